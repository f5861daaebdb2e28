//! Walsh-Hadamard transform on (GF(2))^m.
//!
//! The transform diagonalizes convolution under XOR, the additive group of
//! GF(2^m): `H(p ⊗ q) = H(p) · H(q)` pointwise, and `H(H(p)) = 2^m · p`.

/// In-place unnormalized fast Walsh-Hadamard transform.
///
/// `data.len()` must be a power of two.
pub fn fwht(data: &mut [f64]) {
    let n = data.len();
    debug_assert!(n.is_power_of_two());
    let mut h = 1;
    while h < n {
        for block in data.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
}

/// Inverse transform: forward transform scaled by `1 / len`.
pub fn ifwht(data: &mut [f64]) {
    fwht(data);
    let scale = 1.0 / data.len() as f64;
    data.iter_mut().for_each(|x| *x *= scale);
}

/// XOR-convolution of two or more vectors via the transform domain.
pub fn xor_convolve(inputs: &[&[f64]]) -> Vec<f64> {
    let n = inputs[0].len();
    let mut acc = vec![1.0; n];
    let mut buf = vec![0.0; n];
    for p in inputs {
        buf.copy_from_slice(p);
        fwht(&mut buf);
        acc.iter_mut().zip(&buf).for_each(|(a, b)| *a *= b);
    }
    ifwht(&mut acc);
    acc
}
