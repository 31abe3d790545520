//! Collapsing a pre-commitment on several battlefields into one merged
//! battlefield never lowers the stronger player's payoff.

use lotto_precommit::lotto::GLInstance;
use lotto_precommit::precommit::{payoff_b, reduce_to_single, PreCommitment};

fn main() -> lotto_precommit::Result<()> {
    let game = GLInstance::new(1.0, 2.5, vec![0.3, 0.3, 0.25, 0.15])?;
    let pc = PreCommitment::new(&game, [(0, 0.7), (1, 0.5)])?;
    let before = payoff_b(&pc, &game)?;

    let red = reduce_to_single(&pc, &game)?;
    let single = PreCommitment::single(&red.game, red.battlefield, red.amount)?;
    let after = payoff_b(&single, &red.game)?;

    println!("split over 0 and 1: uB={before:.5}");
    println!(
        "merged into battlefield {} of {:?} with p={}: uB={after:.5}",
        red.battlefield,
        red.game.valuations(),
        red.amount
    );
    Ok(())
}
