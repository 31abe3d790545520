//! Cross-checks closed forms against quadrature, grid search and brute force.

use lotto_precommit::oracle::verify_suite;

fn main() -> lotto_precommit::Result<()> {
    let reports = verify_suite()?;
    for r in &reports {
        println!(
            "{} {:<40} closed={:.9} oracle={:.9} gap={:.1e}",
            if r.pass { "ok  " } else { "FAIL" },
            r.quantity,
            r.closed_form,
            r.oracle,
            r.gap
        );
    }
    let failed = reports.iter().filter(|r| !r.pass).count();
    println!("{} checks, {failed} failed", reports.len());
    Ok(())
}
