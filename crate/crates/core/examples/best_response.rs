//! Player A's best response to a multi-battlefield pre-commitment, and the
//! stronger player's optimal single pre-commitment.

use lotto_precommit::lotto::GLInstance;
use lotto_precommit::precommit::{
    best_response_a, default_epsilon, optimal_single_precommit, payoff_b, PreCommitment,
};

fn main() -> lotto_precommit::Result<()> {
    let game = GLInstance::new(1.0, 2.0, vec![0.55, 0.2, 0.15, 0.1])?;

    let pc = PreCommitment::new(&game, [(0, 0.6), (1, 0.5), (3, 0.2)])?;
    let (resp, u_a) = best_response_a(&pc, &game)?;
    println!(
        "A matches {:?} spending {:.2}: uA={u_a:.4} uB={:.4}",
        resp.matched,
        resp.spent,
        payoff_b(&pc, &game)?
    );

    let eps = default_epsilon(&game);
    for b in 0..game.battlefields() {
        let opt = optimal_single_precommit(&game, b, eps)?;
        println!(
            "battlefield {b}: p={:.4} sup uB={:.4} attained={} beneficial={}",
            opt.p,
            opt.u_b,
            opt.attained,
            opt.is_beneficial()
        );
    }
    Ok(())
}
