//! Equilibria of the two-battlefield game with asymmetric values.

use lotto_precommit::ggl::{
    count_equilibria, critical_points, find_zeros, ggl_marginals, Battlefield, GGLInstance,
};

fn main() -> lotto_precommit::Result<()> {
    let game = GGLInstance::new(1.25, 1.0, 0.1)?;
    println!(
        "breakpoints {:?}, critical points {:?}",
        game.breakpoints(),
        critical_points(&game)
    );
    println!("predicted equilibria: {}", count_equilibria(&game));

    let set = find_zeros(&game, 1e-12)?;
    for (z, (pa, pb)) in set.zeros.iter().zip(&set.payoffs) {
        let m = ggl_marginals(*z, &game)?;
        let means: Vec<String> = Battlefield::BOTH
            .iter()
            .map(|b| {
                let i = b.index() - 1;
                format!(
                    "b{}: A {:.3} B {:.3}",
                    b.index(),
                    m.marginals_a[i].mean(),
                    m.marginals_b[i].mean()
                )
            })
            .collect();
        println!("sigma={z:.6} piA={pa:.4} piB={pb:.4}  {}", means.join("  "));
    }
    println!("B's payoffs best to worst: {:.4?}", set.ranked_payoffs_b());
    Ok(())
}
