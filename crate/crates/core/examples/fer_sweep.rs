//! Frame error rate sweep with JSON-lines output.
//!
//! cargo run --release --example fer_sweep

use nbmr::sim::{self, ChannelKind, CodeParams, SimConfig};
use nbmr::CoeffDomain;

fn main() -> nbmr::Result<()> {
    let code = CodeParams {
        m: 6,
        n: 60,
        dv: 2,
        dc: 3,
        t: 2,
        domain: CoeffDomain::ExcludeZeroOne,
        seed: 11,
        coeff_seed: None,
        puncture: None,
    }
    .build()?;
    let config = SimConfig {
        max_trials: 2000,
        max_frame_errors: 50,
        ..SimConfig::new(ChannelKind::Bec, vec![0.6, 0.65, 0.7, 0.75], 42)
    };
    let stdout = std::io::stdout();
    sim::run(&code, &config, |r| {
        use std::io::Write;
        writeln!(stdout.lock(), "{}", r.to_json_line())?;
        Ok(())
    })?;
    Ok(())
}
