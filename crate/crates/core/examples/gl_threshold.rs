//! Minimum pre-commitment value that can help the stronger player, as the
//! budget ratio varies.

use lotto_precommit::precommit::{classify_incentive, min_beneficial_value};

fn main() -> lotto_precommit::Result<()> {
    println!("{:>6}  {:>9}", "ratio", "threshold");
    for k in 0..=16 {
        let gamma = 1.0 + k as f64 * 0.125;
        match min_beneficial_value(1.0, gamma, 1.0)? {
            Some(t) => println!("{gamma:>6.3}  {t:>9.5}"),
            None => println!("{gamma:>6.3}  {:>9}", "none"),
        }
    }

    let report = classify_incentive(2.0, 3.0, 1.0, 0.6)?;
    println!(
        "X_A=2 X_B=3 vbar=0.6: incentive={} threshold={:?} regime={:?}",
        report.has_incentive, report.threshold, report.regime
    );
    Ok(())
}
