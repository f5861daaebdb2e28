//! Binary-input channels and per-symbol posteriors.
//!
//! Symbols are sent bit by bit (m bits per symbol, least-significant first).
//! AWGN uses BPSK with `0 → +1`, `1 → -1`.

use std::ops::{Deref, DerefMut};

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::gf::Field;

/// What the receiver sees for one transmitted bit.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum BitObservation {
    Zero,
    One,
    Erased,
    /// Real-valued AWGN channel output `y = s + n`.
    Soft(f64),
}

impl BitObservation {
    fn is_erasure_kind(self) -> bool {
        !matches!(self, BitObservation::Soft(_))
    }
}

/// A probability vector over GF(2^m), indexed by symbol value.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbVec(pub Vec<f64>);

impl ProbVec {
    pub fn uniform(q: usize) -> ProbVec {
        ProbVec(vec![1.0 / q as f64; q])
    }

    pub fn point_mass(q: usize, at: usize) -> ProbVec {
        let mut p = vec![0.0; q];
        p[at] = 1.0;
        ProbVec(p)
    }

    /// Rescales to unit sum. Returns false (and leaves the vector untouched)
    /// if the sum is zero or not finite.
    pub fn normalize(&mut self) -> bool {
        normalize_slice(&mut self.0)
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    /// Number of entries with nonzero probability.
    pub fn support_size(&self) -> usize {
        self.0.iter().filter(|&&p| p > 0.0).count()
    }
}

impl Deref for ProbVec {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl DerefMut for ProbVec {
    fn deref_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }
}

pub(crate) fn normalize_slice(p: &mut [f64]) -> bool {
    let s: f64 = p.iter().sum();
    if !(s > 0.0 && s.is_finite()) {
        return false;
    }
    let inv = 1.0 / s;
    p.iter_mut().for_each(|x| *x *= inv);
    true
}

/// A memoryless binary-input channel.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum Channel {
    Bec { epsilon: f64 },
    Awgn { sigma2: f64 },
}

impl Channel {
    pub fn bec(epsilon: f64) -> Result<Channel> {
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(Error::Config(format!("erasure probability {epsilon} outside [0, 1]")));
        }
        Ok(Channel::Bec { epsilon })
    }

    /// BIAWGN at the given `E_b/N_0` for a code sending `rate_bits`
    /// information bits per channel bit.
    pub fn awgn(ebn0_db: f64, rate_bits: f64) -> Result<Channel> {
        Ok(Channel::Awgn { sigma2: awgn_noise_variance(ebn0_db, rate_bits)? })
    }

    pub fn transmit<R: Rng + ?Sized>(&self, bits: &[u8], rng: &mut R) -> Vec<BitObservation> {
        match *self {
            Channel::Bec { epsilon } => erase(bits, epsilon, rng),
            Channel::Awgn { sigma2 } => add_noise(bits, sigma2.sqrt(), rng),
        }
    }

    /// `ln P(bit=0 | obs) - ln P(bit=1 | obs)`; infinite for known BEC bits.
    pub fn bit_llr(&self, obs: BitObservation) -> f64 {
        match (obs, *self) {
            (BitObservation::Zero, _) => f64::INFINITY,
            (BitObservation::One, _) => f64::NEG_INFINITY,
            (BitObservation::Erased, _) => 0.0,
            (BitObservation::Soft(y), Channel::Awgn { sigma2 }) => 2.0 * y / sigma2,
            (BitObservation::Soft(_), Channel::Bec { .. }) => 0.0,
        }
    }
}

/// `σ² = 1 / (2 · R · 10^(E_b/N_0 / 10))` for unit-energy BPSK.
pub fn awgn_noise_variance(ebn0_db: f64, rate_bits: f64) -> Result<f64> {
    if !(rate_bits > 0.0 && rate_bits <= 1.0) {
        return Err(Error::Config(format!("rate {rate_bits} outside (0, 1]")));
    }
    Ok(1.0 / (2.0 * rate_bits * 10f64.powf(ebn0_db / 10.0)))
}

/// Erases every bit independently with probability `epsilon`.
pub fn transmit_bec<R: Rng + ?Sized>(bits: &[u8], epsilon: f64, rng: &mut R) -> Result<Vec<BitObservation>> {
    Channel::bec(epsilon)?;
    Ok(erase(bits, epsilon, rng))
}

/// BPSK over additive white Gaussian noise.
pub fn transmit_awgn<R: Rng + ?Sized>(
    bits: &[u8],
    ebn0_db: f64,
    rate_bits: f64,
    rng: &mut R,
) -> Result<Vec<BitObservation>> {
    let sigma2 = awgn_noise_variance(ebn0_db, rate_bits)?;
    Ok(add_noise(bits, sigma2.sqrt(), rng))
}

fn erase<R: Rng + ?Sized>(bits: &[u8], epsilon: f64, rng: &mut R) -> Vec<BitObservation> {
    bits.iter()
        .map(|&b| {
            if rng.random::<f64>() < epsilon {
                BitObservation::Erased
            } else if b == 0 {
                BitObservation::Zero
            } else {
                BitObservation::One
            }
        })
        .collect()
}

fn add_noise<R: Rng + ?Sized>(bits: &[u8], sigma: f64, rng: &mut R) -> Vec<BitObservation> {
    let noise = Normal::new(0.0, sigma).expect("finite noise deviation");
    bits.iter()
        .map(|&b| {
            let s = if b == 0 { 1.0 } else { -1.0 };
            BitObservation::Soft(s + noise.sample(rng))
        })
        .collect()
}

/// Posterior `P(X = x | y)` of one symbol from its m bit observations.
///
/// For the BEC this is uniform over the symbols consistent with the
/// unerased bits. For AWGN the bit log-likelihoods are summed per symbol
/// and exponentiated after subtracting the maximum.
pub fn symbol_posterior(field: &Field, obs: &[BitObservation], channel: &Channel) -> Result<ProbVec> {
    let m = field.m() as usize;
    if obs.len() != m {
        return Err(Error::LengthMismatch { expected: m, actual: obs.len() });
    }
    let erasure_kind = obs[0].is_erasure_kind();
    if obs.iter().any(|o| o.is_erasure_kind() != erasure_kind) {
        return Err(Error::MixedObservations);
    }
    let q = field.size();
    let mut p = vec![0.0; q];
    if erasure_kind {
        let (mut mask, mut value) = (0usize, 0usize);
        for (i, o) in obs.iter().enumerate() {
            match o {
                BitObservation::Zero => mask |= 1 << i,
                BitObservation::One => {
                    mask |= 1 << i;
                    value |= 1 << i;
                }
                _ => {}
            }
        }
        let weight = 1.0 / (1usize << (m - mask.count_ones() as usize)) as f64;
        for (x, px) in p.iter_mut().enumerate() {
            if x & mask == value {
                *px = weight;
            }
        }
    } else {
        // Half-LLRs: ln P(b|y) = ±L/2 up to a per-bit constant.
        let half: Vec<f64> = obs.iter().map(|&o| 0.5 * channel.bit_llr(o)).collect();
        for (x, px) in p.iter_mut().enumerate() {
            *px = half
                .iter()
                .enumerate()
                .map(|(i, &h)| if (x >> i) & 1 == 0 { h } else { -h })
                .sum();
        }
        let max = p.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        p.iter_mut().for_each(|x| *x = (*x - max).exp());
        normalize_slice(&mut p);
    }
    Ok(ProbVec(p))
}
