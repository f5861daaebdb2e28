//! Build a mother code, extend it with multiplicative repetition and encode.
//!
//! cargo run --example build_and_encode

use nbmr::{CoeffDomain, Field, MotherCode, RepCode, Symbol};

fn main() -> nbmr::Result<()> {
    let field = Field::new(8)?;
    // (2,3)-regular, N=72 symbols: K=24 symbols = 192 information bits.
    let mother = MotherCode::build(field.clone(), 72, 2, 3, 7)?;
    println!("mother: N={} M={} K={} rate={}", mother.n(), mother.checks(), mother.k(), mother.rate());

    for t in 1..=3 {
        let code = RepCode::extend(mother.clone(), t, CoeffDomain::ExcludeZeroOne, 8)?;
        let info: Vec<Symbol> = (0..code.k()).map(|i| Symbol((i * 37 % 256) as u16)).collect();
        let x = code.encode(&info)?;
        assert!(code.is_codeword(&x));
        println!(
            "T={t}: length {} symbols, rate {}, first copy coefficients {:?}",
            code.len(),
            code.rate(),
            (1..t).map(|tt| code.coeff(tt, 0)).collect::<Vec<_>>()
        );
    }
    Ok(())
}
