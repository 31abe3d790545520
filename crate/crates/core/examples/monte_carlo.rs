//! Random valuations: how often one pre-commitment helps, and whether
//! splitting it over two battlefields ever does better.

use lotto_precommit::experiments::{run_fig5, write_mc_csv, McConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = McConfig {
        samples: 100,
        v_bars: vec![0.5, 0.6, 0.8, 1.0],
        seed: 7,
        ..McConfig::default()
    };
    let rows = run_fig5(&config)?;
    write_mc_csv(&rows, &mut std::io::stdout().lock())?;
    Ok(())
}
