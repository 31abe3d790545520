//! Equilibrium payoffs and sampled allocations in a General Lotto game.

use lotto_precommit::lotto::{
    equilibrium_marginal, nominal_payoffs, sample_allocation, GLInstance, Player,
};

fn main() -> lotto_precommit::Result<()> {
    let game = GLInstance::new(2.0, 3.0, vec![0.5, 0.3, 0.2])?;
    let pay = nominal_payoffs(&game)?;
    println!(
        "budgets 2 vs 3: piA={:.4} piB={:.4}",
        pay.payoff_a, pay.payoff_b
    );

    for b in 0..game.battlefields() {
        let fa = equilibrium_marginal(&game, Player::A, b)?;
        let fb = equilibrium_marginal(&game, Player::B, b)?;
        println!(
            "battlefield {b}: A atom {:.3} mean {:.3} | B atom {:.3} mean {:.3} | support [0, {:.3}]",
            fa.atom_at_zero,
            fa.mean(),
            fb.atom_at_zero,
            fb.mean(),
            fb.support_upper
        );
    }

    // independent marginals: the sample only spends the budget on average
    let alloc = sample_allocation(&game, Player::B, 42)?;
    println!(
        "one draw for B: {alloc:.3?} (sum {:.3})",
        alloc.iter().sum::<f64>()
    );
    Ok(())
}
