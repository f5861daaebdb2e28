//! Save a code to the text format and load it back.
//!
//! cargo run --example code_file -- /tmp/c2.code

use nbmr::codefile;
use nbmr::sim::CodeParams;
use nbmr::{CoeffDomain, Rate};

fn main() -> nbmr::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| "c2.code".into());
    let code = CodeParams {
        m: 4,
        n: 24,
        dv: 2,
        dc: 3,
        t: 2,
        domain: CoeffDomain::ExcludeZeroOne,
        seed: 1,
        coeff_seed: None,
        puncture: Some(Rate::new(1, 2)?),
    }
    .build()?;
    codefile::save_code(&code, &path)?;
    let back = codefile::load_code(&path)?;
    assert_eq!(back, code);
    println!("wrote {path}: rate {}, crc32 0x{:08x}", code.rate(), codefile::checksum(&code));
    for line in codefile::to_string(&code).lines().take(4) {
        println!("  {line}");
    }
    Ok(())
}
