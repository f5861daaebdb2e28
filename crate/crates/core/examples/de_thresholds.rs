//! BEC thresholds of (2, dc) ensembles with repetition factor T.
//!
//! cargo run --release --example de_thresholds -- 3

use nbmr::density;

fn main() {
    let dc: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    println!("(2,{dc}) ensembles, threshold by density evolution");
    print!("{:>4}", "m");
    for t in 1..=4 {
        print!("{:>10}", format!("T={t}"));
    }
    println!();
    for m in 1..=10 {
        print!("{m:>4}");
        for t in 1..=4 {
            print!("{:>10.5}", density::threshold(m, dc, t, 1e-5));
        }
        println!();
    }
    print!("{:>4}", "1-R");
    for t in 1..=4 {
        print!("{:>10.5}", 1.0 - density::design_rate(dc, t));
    }
    println!();

    let ev = density::evolve(8, 4, 2, 0.72, 10_000, 1e-9);
    println!("m=8 dc=4 T=2 at eps=0.72: converged={} after {} iterations", ev.converged, ev.trajectory.len() - 1);
}
