//! Rate-compatible family from one mother code: puncturing and repetition.
//!
//! cargo run --release --example rate_ladder

use nbmr::sim::{self, ChannelKind, SimConfig};
use nbmr::{CoeffDomain, Field, MotherCode, PuncturePattern, Rate, RepCode};

fn main() -> nbmr::Result<()> {
    let mother = MotherCode::build(Field::new(8)?, 72, 2, 3, 7)?;
    let half = PuncturePattern::random(&mother, Rate::new(1, 2)?, 7)?;
    let mut ladder = vec![RepCode::extend(mother.clone(), 1, CoeffDomain::ExcludeZeroOne, 8)?.with_puncture(half)];
    for t in 1..=3 {
        ladder.push(RepCode::extend(mother.clone(), t, CoeffDomain::ExcludeZeroOne, 8)?);
    }

    let config = SimConfig { max_trials: 1000, max_frame_errors: 40, ..SimConfig::new(ChannelKind::Awgn, vec![1.0], 3) };
    for code in &ladder {
        let rec = sim::run(code, &config, |_| Ok(()))?.remove(0);
        println!(
            "rate {:>4} ({} symbols sent): FER {:.3e} at Eb/N0 1.0 dB ({} frames)",
            code.rate().to_string(),
            code.transmitted_symbols(),
            rec.fer,
            rec.trials
        );
    }
    Ok(())
}
