//! Pre-commitment in the asymmetric game: A's match/withdraw decision and
//! when B can beat an equilibrium payoff.

use lotto_precommit::ggl::{Battlefield, GGLInstance};
use lotto_precommit::ggl_precommit::{
    benefit_report, indifference_points, optimal_precommit_ggl, response_a, ub_ggl, GGLPreCommit,
};

fn main() -> lotto_precommit::Result<()> {
    let game = GGLInstance::new(1.0, 1.0, 0.25)?;
    let pts = indifference_points(&game);
    println!("indifference points on battlefield 1: {pts:.6?}");
    for p in [0.3, pts[0], 0.8, 1.0] {
        let pc = GGLPreCommit::new(&game, Battlefield::First, p)?;
        println!(
            "p={p:.4}: A plays {:?}, uB={:.4}",
            response_a(&pc, &game),
            ub_ggl(&pc, &game)
        );
    }

    // three equilibria; B's middle payoff is the benchmark
    let game = GGLInstance::new(0.6, 1.0, 0.08)?;
    let (set, report) = benefit_report(&game)?;
    println!(
        "{} equilibria, benchmark {:.4}, beats it: {}, guaranteed uB {:.4}",
        set.count(),
        report.benchmark,
        report.beats_second_best,
        report.guaranteed_ub
    );
    let (best, u) = optimal_precommit_ggl(&game, 1e-6)?;
    println!(
        "best found: battlefield {} p={:.5} uB={u:.4}",
        best.battlefield().index(),
        best.amount()
    );
    Ok(())
}
