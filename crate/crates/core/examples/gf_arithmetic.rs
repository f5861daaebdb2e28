//! GF(2^m) arithmetic and the bit representation of symbols.
//!
//! cargo run --example gf_arithmetic -- 3

use nbmr::{Field, Symbol};

fn main() -> nbmr::Result<()> {
    let m: u32 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let f = Field::new(m)?;
    println!("GF(2^{m}), primitive polynomial 0x{:x}", f.poly());

    println!("powers of alpha:");
    for e in 0..f.order() {
        let mut bits = Vec::new();
        f.to_bits(f.alpha_pow(e), &mut bits);
        println!("  a^{e:<3} = {:>4}  bits {:?}", f.alpha_pow(e).value(), bits);
    }

    let a = f.alpha_pow(1);
    let b = f.alpha_pow(f.order() - 1);
    println!("a * a^-1 = {}", f.mul(a, b));
    println!("a + a    = {}", f.add(a, a));
    println!("inverse of 0: {:?}", f.inv(Symbol::ZERO).err());
    Ok(())
}
