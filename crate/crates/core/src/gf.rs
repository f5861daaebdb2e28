//! GF(2^m) arithmetic for 1 ≤ m ≤ 10.
//!
//! Symbols are stored as integers whose bit `i` is the coefficient of `α^i`
//! in the polynomial basis, so the integer value doubles as the m-bit
//! representation sent over a binary channel (least-significant bit first).
//!
//! Primitive polynomials (bit `i` = coefficient of `x^i`):
//!
//! | m  | polynomial              | mask    |
//! |----|-------------------------|---------|
//! | 1  | x + 1                   | `0x3`   |
//! | 2  | x² + x + 1              | `0x7`   |
//! | 3  | x³ + x + 1              | `0xB`   |
//! | 4  | x⁴ + x + 1              | `0x13`  |
//! | 5  | x⁵ + x² + 1             | `0x25`  |
//! | 6  | x⁶ + x + 1              | `0x43`  |
//! | 7  | x⁷ + x³ + 1             | `0x89`  |
//! | 8  | x⁸ + x⁴ + x³ + x² + 1   | `0x11D` |
//! | 9  | x⁹ + x⁴ + 1             | `0x211` |
//! | 10 | x¹⁰ + x³ + 1            | `0x409` |

use std::fmt;
use std::ops::{Add, AddAssign};

use crate::error::{Error, Result};

/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 10;

const PRIMITIVE_POLYS: [u32; MAX_DEGREE as usize + 1] =
    [0, 0x3, 0x7, 0xB, 0x13, 0x25, 0x43, 0x89, 0x11D, 0x211, 0x409];

/// Returns the fixed primitive polynomial mask for degree `m`.
pub fn primitive_poly(m: u32) -> Result<u32> {
    if (1..=MAX_DEGREE).contains(&m) {
        Ok(PRIMITIVE_POLYS[m as usize])
    } else {
        Err(Error::UnsupportedDegree(m))
    }
}

/// An element of GF(2^m).
#[derive(Copy, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(pub u16);

impl Symbol {
    pub const ZERO: Symbol = Symbol(0);
    pub const ONE: Symbol = Symbol(1);

    #[inline]
    pub fn value(self) -> u16 {
        self.0
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Bit `i` of the representation (coefficient of `α^i`).
    #[inline]
    pub fn bit(self, i: u32) -> u8 {
        ((self.0 >> i) & 1) as u8
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0x{:x}", self.0)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0x{:x}", self.0)
    }
}

// Characteristic 2: addition is XOR and does not depend on the modulus.
// Characteristic 2: addition is XOR.
impl Add for Symbol {
    type Output = Symbol;

    #[inline]
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: Symbol) -> Symbol {
        Symbol(self.0 ^ rhs.0)
    }
}

impl AddAssign for Symbol {
    #[inline]
    #[allow(clippy::suspicious_op_assign_impl)]
    fn add_assign(&mut self, rhs: Symbol) {
        self.0 ^= rhs.0;
    }
}

/// A fixed GF(2^m) with log/exp tables.
///
/// Immutable after construction; share it freely between threads.
#[derive(Clone)]
pub struct Field {
    m: u32,
    poly: u32,
    // Doubled so that `exp[log a + log b]` needs no reduction.
    exp: Vec<Symbol>,
    log: Vec<u16>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.poly == other.poly
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("m", &self.m)
            .field("poly", &format_args!("0x{:x}", self.poly))
            .finish()
    }
}

impl Field {
    /// Builds GF(2^m) from the fixed primitive polynomial table.
    pub fn new(m: u32) -> Result<Field> {
        let poly = primitive_poly(m)?;
        let q = 1usize << m;
        let order = q - 1;
        let mut exp = vec![Symbol::ZERO; 2 * order];
        let mut log = vec![0u16; q];
        let mut x: u32 = 1;
        for i in 0..order {
            exp[i] = Symbol(x as u16);
            exp[i + order] = Symbol(x as u16);
            log[x as usize] = i as u16;
            x <<= 1;
            if x & (1 << m) != 0 {
                x ^= poly;
            }
        }
        debug_assert_eq!(x, 1, "polynomial for m={m} is not primitive");
        Ok(Field { m, poly, exp, log })
    }

    /// Extension degree (bits per symbol).
    #[inline]
    pub fn m(&self) -> u32 {
        self.m
    }

    /// Field size `2^m`.
    #[inline]
    pub fn size(&self) -> usize {
        1 << self.m
    }

    /// Multiplicative group order `2^m - 1`.
    #[inline]
    pub fn order(&self) -> usize {
        self.size() - 1
    }

    /// Primitive polynomial mask.
    pub fn poly(&self) -> u32 {
        self.poly
    }

    /// `α^i` for `i` in `0..2^m-1`.
    pub fn exp_table(&self) -> &[Symbol] {
        &self.exp[..self.order()]
    }

    /// Discrete log of a nonzero symbol.
    pub fn log(&self, a: Symbol) -> Option<usize> {
        (!a.is_zero()).then(|| self.log[a.index()] as usize)
    }

    /// `α^e`, exponent taken modulo `2^m - 1`.
    pub fn alpha_pow(&self, e: usize) -> Symbol {
        self.exp[e % self.order()]
    }

    /// Whether `a` is an element of this field.
    pub fn contains(&self, a: Symbol) -> bool {
        a.index() < self.size()
    }

    /// Iterator over all field elements in increasing integer order.
    pub fn elements(&self) -> impl Iterator<Item = Symbol> {
        (0..self.size() as u16).map(Symbol)
    }

    #[inline]
    pub fn add(&self, a: Symbol, b: Symbol) -> Symbol {
        a + b
    }

    #[inline]
    pub fn mul(&self, a: Symbol, b: Symbol) -> Symbol {
        if a.is_zero() || b.is_zero() {
            Symbol::ZERO
        } else {
            self.exp[self.log[a.index()] as usize + self.log[b.index()] as usize]
        }
    }

    pub fn inv(&self, a: Symbol) -> Result<Symbol> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let order = self.order();
        Ok(self.exp[(order - self.log[a.index()] as usize) % order])
    }

    /// `a / b` for nonzero `b`.
    pub fn div(&self, a: Symbol, b: Symbol) -> Result<Symbol> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Expands a symbol into its m bits, least-significant first.
    pub fn to_bits(&self, a: Symbol, out: &mut Vec<u8>) {
        out.extend((0..self.m).map(|i| a.bit(i)));
    }

    /// Inverse of [`Field::to_bits`]; `bits` must hold exactly m entries.
    pub fn from_bits(&self, bits: &[u8]) -> Symbol {
        debug_assert_eq!(bits.len(), self.m as usize);
        Symbol(
            bits.iter()
                .enumerate()
                .fold(0u16, |acc, (i, &b)| acc | (u16::from(b & 1) << i)),
        )
    }
}
