//! Density evolution on the BEC for multiplicatively repeated
//! (2, d_c)-regular ensembles over GF(2^m).
//!
//! On the BEC (all-zero codeword) the support of every BP message is a
//! linear subspace of GF(2)^m, so a message is summarized by its dimension.
//! A [`Density`] is the distribution of that dimension. Variable nodes
//! intersect subspaces ([`boxdot`], identity `δ_m`), check nodes add them
//! ([`boxtimes`], identity `δ_0`), and for uniformly random subspaces the
//! outcome dimension only depends on the input dimensions through the
//! kernels `C_⊡` and `C_⊠`:
//!
//! ```text
//! C_⊡(m,k,i,j) = 2^((i-k)(j-k)) · [i k] · [m-i j-k] / [m j]
//! C_⊠(m,k,i,j) = 2^((k-i)(k-j)) · [m-i m-k] · [i k-j] / [m m-j]
//! ```
//!
//! where `[m k]` is the 2-Gaussian binomial. The recursion is
//!
//! ```text
//! P0    = E ⊡ … ⊡ E              (T factors, E = Binomial(m, ε))
//! Q(l+1) = P(l) ⊠ … ⊠ P(l)        (d_c - 1 factors)
//! P(l+1) = P0 ⊡ Q(l+1)
//! ```
//!
//! and the threshold is the largest ε for which `P(l)_0 → 1`.

use std::ops::Deref;

/// Convergence and search parameters.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct DeParams {
    /// Success once the erasure mass `1 - P_0` falls to this level.
    pub delta: f64,
    /// Hard cap on iterations per evaluation.
    pub max_iter: usize,
    /// Bisection stops when the bracket is narrower than this.
    pub bisect_tol: f64,
}

impl Default for DeParams {
    fn default() -> Self {
        DeParams { delta: 1e-9, max_iter: 1_000_000, bisect_tol: 1e-5 }
    }
}

// An iteration that shrinks the erasure mass by less than this fraction has
// reached a fixed point.
const STALL_RELATIVE: f64 = 1e-12;

/// Distribution of the subspace dimension, `d[i]` for `i = 0..=m`.
#[derive(Clone, Debug, PartialEq)]
pub struct Density(pub Vec<f64>);

impl Density {
    /// Point mass at dimension `k`.
    pub fn delta(m: u32, k: usize) -> Density {
        let mut d = vec![0.0; m as usize + 1];
        d[k] = 1.0;
        Density(d)
    }

    pub fn m(&self) -> u32 {
        (self.0.len() - 1) as u32
    }

    /// Probability of a nonzero dimension, summed directly for accuracy.
    pub fn erasure(&self) -> f64 {
        self.0[1..].iter().sum()
    }

    fn clamp_normalize(&mut self) {
        for x in self.0.iter_mut() {
            if *x < 0.0 {
                *x = 0.0;
            }
        }
        let s: f64 = self.0.iter().sum();
        if s > 0.0 {
            self.0.iter_mut().for_each(|x| *x /= s);
        }
    }
}

impl Deref for Density {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// Number of k-dimensional subspaces of GF(2)^m; zero when `k > m`.
pub fn gaussian_binomial(m: u32, k: u32) -> f64 {
    if k > m {
        return 0.0;
    }
    log2_gaussian_binomial(m, k).exp2().round()
}

fn log2_gaussian_binomial(m: u32, k: u32) -> f64 {
    (0..k)
        .map(|l| {
            let num = (2f64.powi(m as i32) - 2f64.powi(l as i32)).log2();
            let den = (2f64.powi(k as i32) - 2f64.powi(l as i32)).log2();
            num - den
        })
        .sum()
}

/// Dense `C_⊡` and `C_⊠` kernels for one m.
#[derive(Clone, Debug)]
pub struct OperatorTables {
    m: u32,
    // [k][i][j], flattened with stride (m+1)
    boxdot: Vec<f64>,
    boxtimes: Vec<f64>,
}

impl OperatorTables {
    pub fn new(m: u32) -> OperatorTables {
        let s = m as usize + 1;
        let mut boxdot = vec![0.0; s * s * s];
        let mut boxtimes = vec![0.0; s * s * s];
        let lgb = |a: u32, b: u32| log2_gaussian_binomial(a, b);
        for k in 0..=m {
            for i in 0..=m {
                for j in 0..=m {
                    let idx = (k as usize * s + i as usize) * s + j as usize;
                    // Intersection of dims i and j has dim k.
                    if k <= i && k <= j && j - k <= m - i {
                        let e = ((i - k) * (j - k)) as f64 + lgb(i, k) + lgb(m - i, j - k) - lgb(m, j);
                        boxdot[idx] = e.exp2();
                    }
                    // Sum of dims i and j has dim k.
                    if k >= i && k >= j && k - j <= i {
                        let e = ((k - i) * (k - j)) as f64 + lgb(m - i, m - k) + lgb(i, k - j) - lgb(m, m - j);
                        boxtimes[idx] = e.exp2();
                    }
                }
            }
        }
        OperatorTables { m, boxdot, boxtimes }
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    fn idx(&self, k: u32, i: u32, j: u32) -> usize {
        let s = self.m as usize + 1;
        (k as usize * s + i as usize) * s + j as usize
    }

    /// `C_⊡(m, k, i, j)`.
    pub fn boxdot_coeff(&self, k: u32, i: u32, j: u32) -> f64 {
        self.boxdot[self.idx(k, i, j)]
    }

    /// `C_⊠(m, k, i, j)`.
    pub fn boxtimes_coeff(&self, k: u32, i: u32, j: u32) -> f64 {
        self.boxtimes[self.idx(k, i, j)]
    }

    fn apply(&self, kernel: &[f64], p: &Density, q: &Density) -> Density {
        let s = self.m as usize + 1;
        debug_assert_eq!(p.len(), s);
        debug_assert_eq!(q.len(), s);
        let mut out = vec![0.0; s];
        for (k, o) in out.iter_mut().enumerate() {
            let block = &kernel[k * s * s..(k + 1) * s * s];
            let mut acc = 0.0;
            for (i, &pi) in p.iter().enumerate() {
                if pi == 0.0 {
                    continue;
                }
                let row = &block[i * s..(i + 1) * s];
                acc += pi * row.iter().zip(q.iter()).map(|(c, qj)| c * qj).sum::<f64>();
            }
            *o = acc;
        }
        let mut d = Density(out);
        d.clamp_normalize();
        d
    }
}

/// Variable-node combination (subspace intersection).
pub fn boxdot(p: &Density, q: &Density, tables: &OperatorTables) -> Density {
    tables.apply(&tables.boxdot, p, q)
}

/// Check-node combination (subspace sum).
pub fn boxtimes(p: &Density, q: &Density, tables: &OperatorTables) -> Density {
    tables.apply(&tables.boxtimes, p, q)
}

/// Dimension of the erased coordinate subspace of one symbol:
/// `E_i = C(m, i) ε^i (1-ε)^(m-i)`.
pub fn channel_density(m: u32, epsilon: f64) -> Density {
    let mut binom = 1.0;
    let d = (0..=m)
        .map(|i| {
            if i > 0 {
                binom = binom * f64::from(m - i + 1) / f64::from(i);
            }
            binom * epsilon.powi(i as i32) * (1.0 - epsilon).powi((m - i) as i32)
        })
        .collect();
    Density(d)
}

/// Density of the initial variable message with `T` channel copies.
pub fn initial_density(tables: &OperatorTables, t: usize, epsilon: f64) -> Density {
    let e = channel_density(tables.m(), epsilon);
    (1..t).fold(e.clone(), |acc, _| boxdot(&acc, &e, tables))
}

/// Outcome of one density-evolution run.
#[derive(Clone, Debug, PartialEq)]
pub struct Evolution {
    pub converged: bool,
    /// `P_0` after every iteration, starting with `P(0)`.
    pub trajectory: Vec<f64>,
}

/// Runs the recursion at one erasure probability.
pub fn evolve(m: u32, dc: usize, t: usize, epsilon: f64, max_iter: usize, delta: f64) -> Evolution {
    let tables = OperatorTables::new(m);
    evolve_with(&tables, dc, t, epsilon, max_iter, delta)
}

/// [`evolve`] with precomputed kernels.
pub fn evolve_with(
    tables: &OperatorTables,
    dc: usize,
    t: usize,
    epsilon: f64,
    max_iter: usize,
    delta: f64,
) -> Evolution {
    assert!(dc >= 2 && t >= 1, "need dc >= 2 and T >= 1");
    let p0 = initial_density(tables, t, epsilon);
    let mut p = p0.clone();
    let mut erasure = p.erasure();
    let mut trajectory = vec![p[0]];
    for _ in 0..max_iter {
        if erasure <= delta {
            break;
        }
        let mut q = p.clone();
        for _ in 1..dc - 1 {
            q = boxtimes(&q, &p, tables);
        }
        p = boxdot(&p0, &q, tables);
        let next = p.erasure();
        trajectory.push(p[0]);
        if next > erasure * (1.0 - STALL_RELATIVE) {
            erasure = next;
            break;
        }
        erasure = next;
    }
    Evolution { converged: erasure <= delta, trajectory }
}

/// Largest ε with vanishing erasure, found by bisection on `[0, 1]`.
pub fn threshold(m: u32, dc: usize, t: usize, bisect_tol: f64) -> f64 {
    threshold_with(m, dc, t, &DeParams { bisect_tol, ..DeParams::default() })
}

pub fn threshold_with(m: u32, dc: usize, t: usize, params: &DeParams) -> f64 {
    let tables = OperatorTables::new(m);
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > params.bisect_tol {
        let mid = 0.5 * (lo + hi);
        if evolve_with(&tables, dc, t, mid, params.max_iter, params.delta).converged {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Growth factor of a small erasure mass around the all-known state:
/// `(d_c - 1) · Σ_i P0_i (2^i - 1) / (2^m - 1)`.
///
/// Decoding can only succeed where this is below one.
pub fn stability_factor(tables: &OperatorTables, dc: usize, t: usize, epsilon: f64) -> f64 {
    let p0 = initial_density(tables, t, epsilon);
    let full = 2f64.powi(tables.m() as i32) - 1.0;
    let contained: f64 = p0
        .iter()
        .enumerate()
        .map(|(i, &pi)| pi * (2f64.powi(i as i32) - 1.0) / full)
        .sum();
    (dc - 1) as f64 * contained
}

/// ε at which [`stability_factor`] reaches one.
pub fn stability_threshold(m: u32, dc: usize, t: usize, tol: f64) -> f64 {
    let tables = OperatorTables::new(m);
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if stability_factor(&tables, dc, t, mid) < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Design rate `(1 - 2/d_c) / T` of the (2, d_c) ensemble.
pub fn design_rate(dc: usize, t: usize) -> f64 {
    (1.0 - 2.0 / dc as f64) / t as f64
}

/// Normalized gap `(1 - ε* - R) / R` between capacity and rate.
pub fn normalized_gap(epsilon_star: f64, rate: f64) -> f64 {
    (1.0 - epsilon_star - rate) / rate
}
