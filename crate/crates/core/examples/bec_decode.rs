//! Decode one frame sent over the binary erasure channel.
//!
//! cargo run --release --example bec_decode -- 0.6

use nbmr::decoder::{Decoder, DecoderOptions};
use nbmr::sim::CodeParams;
use nbmr::{Channel, CoeffDomain, Symbol};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> nbmr::Result<()> {
    let eps: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0.6);
    let code = CodeParams {
        m: 8,
        n: 256,
        dv: 2,
        dc: 4,
        t: 2,
        domain: CoeffDomain::ExcludeZeroOne,
        seed: 3,
        coeff_seed: None,
        puncture: None,
    }
    .build()?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let info: Vec<Symbol> = (0..code.k()).map(|_| Symbol(rng.random_range(0..256))).collect();
    let x = code.encode(&info)?;

    let channel = Channel::bec(eps)?;
    let obs = channel.transmit(&code.to_bits(&x), &mut rng);
    let erased = obs.iter().filter(|o| matches!(o, nbmr::BitObservation::Erased)).count();
    println!("rate {} code, {erased} of {} bits erased", code.rate(), obs.len());

    let decoder = Decoder::new(&code, DecoderOptions { max_iter: 200, trace: true });
    let result = decoder.decode_observations(&channel, &obs)?;
    println!("unsatisfied checks per iteration: {:?}", result.syndrome_trace);
    match result.outcome {
        nbmr::DecodeOutcome::Codeword(c) => {
            println!("decoded in {} iterations, correct: {}", result.iterations, c[..] == x[..code.mother().n()])
        }
        nbmr::DecodeOutcome::Fail => println!("failed after {} iterations", result.iterations),
    }
    Ok(())
}
