//! Independent oracles shared by the integration tests.
//!
//! Nothing here calls the decoder, the transform or the density kernels of
//! the library; only field arithmetic and code construction are reused.

#![allow(dead_code)]

use nbmr::channel::BitObservation;
use nbmr::{Channel, RepCode, Symbol};

pub const TIE_TOLERANCE: f64 = 1e-9;

fn normalize(p: &mut [f64]) {
    let s: f64 = p.iter().sum();
    if s > 0.0 && s.is_finite() {
        p.iter_mut().for_each(|x| *x /= s);
    } else {
        let u = 1.0 / p.len() as f64;
        p.iter_mut().for_each(|x| *x = u);
    }
}

/// Posterior of one symbol straight from the channel likelihoods.
pub fn direct_posterior(m: u32, obs: &[BitObservation], channel: &Channel) -> Vec<f64> {
    let q = 1usize << m;
    let mut p: Vec<f64> = (0..q)
        .map(|x| {
            obs.iter()
                .enumerate()
                .map(|(i, o)| {
                    let bit = (x >> i) & 1;
                    match (o, channel) {
                        (BitObservation::Erased, _) => 1.0,
                        (BitObservation::Zero, _) => f64::from(u8::from(bit == 0)),
                        (BitObservation::One, _) => f64::from(u8::from(bit == 1)),
                        (BitObservation::Soft(y), Channel::Awgn { sigma2 }) => {
                            let s = if bit == 0 { 1.0 } else { -1.0 };
                            // Drop the common factor exp(-(y^2+1)/(2σ²)).
                            (y * s / sigma2).exp()
                        }
                        (BitObservation::Soft(_), Channel::Bec { .. }) => 1.0,
                    }
                })
                .product()
        })
        .collect();
    normalize(&mut p);
    p
}

/// Plain belief propagation on the complete Tanner graph of `C_T`: the
/// mother checks, one degree-2 check `r·x_v + x_{tN+v} = 0` per copy, and
/// the degree-1 copy variables. Check messages are computed by explicit
/// summation over the field.
pub struct ReferenceBp<'a> {
    code: &'a RepCode,
    q: usize,
    // checks[c] = [(variable, label)], mother checks first in edge order
    checks: Vec<Vec<(usize, Symbol)>>,
    // var_checks[v] = [(check, slot)]
    var_checks: Vec<Vec<(usize, usize)>>,
    channel: Vec<Vec<f64>>,
    v2c: Vec<Vec<Vec<f64>>>,
    c2v: Vec<Vec<Vec<f64>>>,
}

impl<'a> ReferenceBp<'a> {
    /// `obs` holds m bit observations per transmitted symbol.
    pub fn new(code: &'a RepCode, channel: &Channel, obs: &[BitObservation]) -> ReferenceBp<'a> {
        let mother = code.mother();
        let (n, t) = (mother.n(), code.t());
        let m = code.field().m();
        let q = 1usize << m;
        let mut checks: Vec<Vec<(usize, Symbol)>> = (0..mother.checks())
            .map(|c| mother.check_edges(c).map(|e| (mother.edges()[e].var, mother.edges()[e].label)).collect())
            .collect();
        for tt in 1..t {
            for v in 0..n {
                checks.push(vec![(v, code.coeff(tt, v)), (tt * n + v, Symbol::ONE)]);
            }
        }
        let mut var_checks = vec![Vec::new(); t * n];
        for (c, members) in checks.iter().enumerate() {
            for (slot, &(v, _)) in members.iter().enumerate() {
                var_checks[v].push((c, slot));
            }
        }
        let mut channel_msgs = vec![vec![1.0 / q as f64; q]; t * n];
        for (i, pos) in code.transmitted_positions().enumerate() {
            channel_msgs[pos] = direct_posterior(m, &obs[i * m as usize..(i + 1) * m as usize], channel);
        }
        let v2c = checks.iter().map(|ms| ms.iter().map(|&(v, _)| channel_msgs[v].clone()).collect()).collect();
        let c2v = checks.iter().map(|ms| vec![vec![1.0 / q as f64; q]; ms.len()]).collect();
        let mut bp = ReferenceBp { code, q, checks, var_checks, channel: channel_msgs, v2c, c2v };
        // Copies are leaves: push their channel messages through the
        // repetition checks before the first full round.
        let rep: Vec<usize> = (mother.checks()..bp.checks.len()).collect();
        bp.update_checks(&rep);
        bp.update_vars(0..n);
        bp
    }

    fn mul(&self, a: Symbol, b: usize) -> usize {
        self.code.field().mul(a, Symbol(b as u16)).index()
    }

    fn update_checks(&mut self, which: &[usize]) {
        let q = self.q;
        for &c in which {
            let members = self.checks[c].clone();
            for (j, &(_, hj)) in members.iter().enumerate() {
                // Distribution of Σ_{w≠j} h_w x_w by repeated XOR convolution.
                let mut acc = vec![0.0; q];
                acc[0] = 1.0;
                for (w, &(_, hw)) in members.iter().enumerate() {
                    if w == j {
                        continue;
                    }
                    let mut next = vec![0.0; q];
                    for (s, &a) in acc.iter().enumerate() {
                        if a == 0.0 {
                            continue;
                        }
                        for (y, &p) in self.v2c[c][w].iter().enumerate() {
                            next[s ^ self.mul(hw, y)] += a * p;
                        }
                    }
                    acc = next;
                }
                let mut out: Vec<f64> = (0..q).map(|x| acc[self.mul(hj, x)]).collect();
                normalize(&mut out);
                self.c2v[c][j] = out;
            }
        }
    }

    fn update_vars(&mut self, which: impl Iterator<Item = usize>) {
        for v in which {
            let links = self.var_checks[v].clone();
            for (i, &(c, slot)) in links.iter().enumerate() {
                let mut out = self.channel[v].clone();
                for (k, &(c2, s2)) in links.iter().enumerate() {
                    if k != i {
                        out.iter_mut().zip(&self.c2v[c2][s2]).for_each(|(a, b)| *a *= b);
                    }
                }
                normalize(&mut out);
                self.v2c[c][slot] = out;
            }
        }
    }

    /// One flooding round over every check and then every variable.
    pub fn step(&mut self) {
        let all: Vec<usize> = (0..self.checks.len()).collect();
        self.update_checks(&all);
        self.update_vars(0..self.var_checks.len());
    }

    pub fn belief(&self, v: usize) -> Vec<f64> {
        let mut b = self.channel[v].clone();
        for &(c, slot) in &self.var_checks[v] {
            b.iter_mut().zip(&self.c2v[c][slot]).for_each(|(a, m)| *a *= m);
        }
        b
    }

    /// Mother-variable message on mother edge `e` (library edge numbering).
    pub fn v2c(&self, e: usize) -> &[f64] {
        let (c, slot) = self.locate(e);
        &self.v2c[c][slot]
    }

    pub fn c2v(&self, e: usize) -> &[f64] {
        let (c, slot) = self.locate(e);
        &self.c2v[c][slot]
    }

    fn locate(&self, e: usize) -> (usize, usize) {
        let mother = self.code.mother();
        let c = mother.edges()[e].check;
        (c, e - mother.check_edges(c).start)
    }

    /// Smallest maximizer per mother variable and its undetermined-bit mask.
    pub fn decision(&self) -> (Vec<Symbol>, Vec<u16>) {
        (0..self.code.mother().n())
            .map(|v| {
                let b = self.belief(v);
                let max = b.iter().copied().fold(0.0, f64::max);
                let ties: Vec<usize> = (0..self.q).filter(|&x| b[x] >= max * (1.0 - TIE_TOLERANCE)).collect();
                let mask = ties.iter().fold(0, |acc, &x| acc | (x ^ ties[0])) as u16;
                (Symbol(ties[0] as u16), mask)
            })
            .unzip()
    }

    /// Runs to an unambiguous mother codeword or the cap; returns the
    /// codeword (if any) and the number of rounds.
    pub fn run(&mut self, max_iter: usize) -> (Option<Vec<Symbol>>, usize) {
        let mut it = 0;
        loop {
            let (x, mask) = self.decision();
            if mask.iter().all(|&m| m == 0) && self.code.mother().is_codeword(&x) {
                return (Some(x), it);
            }
            if it >= max_iter {
                return (None, it);
            }
            self.step();
            it += 1;
        }
    }
}

/// Naive XOR convolution `Σ_{y⊕z=x} p(y) q(z)`.
pub fn naive_xor(p: &[f64], q: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; p.len()];
    for (y, &a) in p.iter().enumerate() {
        for (z, &b) in q.iter().enumerate() {
            out[y ^ z] += a * b;
        }
    }
    out
}

/// Rank over GF(2) of a set of m-bit vectors.
pub fn gf2_rank(vectors: &[u32]) -> usize {
    let mut basis: Vec<u32> = Vec::new();
    for &v in vectors {
        let mut x = v;
        for &b in &basis {
            x = x.min(x ^ b);
        }
        if x != 0 {
            basis.push(x);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

/// Every subspace of GF(2)^m as the bitmask of its members (m ≤ 5),
/// grouped by dimension.
pub fn all_subspaces(m: u32) -> Vec<Vec<u64>> {
    assert!(m <= 5);
    let q = 1u32 << m;
    let mut seen = std::collections::BTreeSet::new();
    let mut frontier = vec![1u64]; // {0}
    seen.insert(1u64);
    while let Some(s) = frontier.pop() {
        for v in 1..q {
            if s >> v & 1 == 1 {
                continue;
            }
            let mut t = s;
            for x in 0..q {
                if s >> x & 1 == 1 {
                    t |= 1 << (x ^ v);
                }
            }
            if seen.insert(t) {
                frontier.push(t);
            }
        }
    }
    let mut by_dim = vec![Vec::new(); m as usize + 1];
    for s in seen {
        by_dim[s.count_ones().trailing_zeros() as usize].push(s);
    }
    by_dim
}

/// Dimension of the span of two subspaces given as member bitmasks.
pub fn sum_dimension(m: u32, a: u64, b: u64) -> usize {
    let members = |s: u64| (0..1u32 << m).filter(move |&x| s >> x & 1 == 1);
    let vectors: Vec<u32> = members(a).chain(members(b)).collect();
    gf2_rank(&vectors)
}
