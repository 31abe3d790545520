//! Small parameter sweeps over both games, written as CSV.

use lotto_precommit::experiments::{
    ggl_region_cell, region_sweep_gl, write_gl_region_csv, Axis, SweepConfig,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = SweepConfig::default()
        .with_axis(Axis::new("xa", 0.5, 2.0, 4)?)
        .with_axis(Axis::new("xb", 0.5, 4.0, 8)?)
        .with_fixed("vbar", 0.55);
    let rows = region_sweep_gl(&config)?;
    write_gl_region_csv(&rows, &mut std::io::stdout().lock())?;

    println!();
    println!("alpha=0.08, X_B=1: improvement over the middle equilibrium");
    for k in 1..=12 {
        let xa = 0.1 * k as f64;
        let row = ggl_region_cell(0.08, xa, 1.0)?;
        match row.improvement_over_second_pct() {
            Some(pct) => println!("X_A={xa:.1} {} {pct:.2}%", row.verdict.as_str()),
            None => println!("X_A={xa:.1} {}", row.verdict.as_str()),
        }
    }
    Ok(())
}
