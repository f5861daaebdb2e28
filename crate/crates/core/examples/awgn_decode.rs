//! Decode one frame sent with BPSK over the AWGN channel, stepping the
//! decoder by hand.
//!
//! cargo run --release --example awgn_decode -- 1.0

use nbmr::decoder::{channel_posteriors, Decoder, DecoderOptions};
use nbmr::sim::CodeParams;
use nbmr::{Channel, CoeffDomain, Symbol};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> nbmr::Result<()> {
    let ebn0: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1.0);
    let code = CodeParams {
        m: 8,
        n: 72,
        dv: 2,
        dc: 3,
        t: 2,
        domain: CoeffDomain::ExcludeZeroOne,
        seed: 7,
        coeff_seed: None,
        puncture: None,
    }
    .build()?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let info: Vec<Symbol> = (0..code.k()).map(|_| Symbol(rng.random_range(0..256))).collect();
    let x = code.encode(&info)?;

    let channel = Channel::awgn(ebn0, code.rate().as_f64())?;
    println!("rate {} at Eb/N0 {ebn0} dB: {channel:?}", code.rate());
    let obs = channel.transmit(&code.to_bits(&x), &mut rng);
    let posteriors = channel_posteriors(&code, &channel, &obs)?;

    let decoder = Decoder::new(&code, DecoderOptions::default());
    let mut state = decoder.initialize(&posteriors)?;
    loop {
        let d = state.tentative_decision();
        let wrong = d.symbols.iter().zip(&x).filter(|(a, b)| a != b).count();
        println!("iteration {:>3}: {:>2} unsatisfied checks, {:>2} wrong symbols", state.iteration(), d.syndrome_weight, wrong);
        if d.is_codeword() || state.iteration() == 50 {
            break;
        }
        state.step();
    }
    Ok(())
}
