//! Mother codes, multiplicative repetition and puncturing.
//!
//! A mother code `C_1` is a (d_v, d_c)-regular LDPC code over GF(2^m) with
//! a random Tanner graph and uniformly random nonzero labels. The extension
//! `C_T` appends `T - 1` scaled copies of every mother symbol:
//! `x[t·N + v] = r[t·N + v] · x[v]` for `t = 1..T`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf::{Field, Symbol};

const LABEL_RETRIES_PER_GRAPH: usize = 10;
const MAX_CONSTRUCTION_ATTEMPTS: usize = 100;

/// One nonzero entry `h[check][var] = label` of the parity-check matrix.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub check: usize,
    pub var: usize,
    pub label: Symbol,
}

/// A code rate as an exact fraction.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Rate {
    pub num: u64,
    pub den: u64,
}

impl Rate {
    pub fn new(num: u64, den: u64) -> Result<Rate> {
        if den == 0 || num == 0 {
            return Err(Error::Config(format!("invalid rate {num}/{den}")));
        }
        Ok(Rate { num, den })
    }

    pub fn as_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Rate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Rate> {
        let bad = || Error::Config(format!("cannot parse rate '{s}' (expected a/b)"));
        match s.split_once('/') {
            Some((a, b)) => Rate::new(
                a.trim().parse().map_err(|_| bad())?,
                b.trim().parse().map_err(|_| bad())?,
            ),
            None => Rate::new(s.trim().parse().map_err(|_| bad())?, 1),
        }
    }
}

/// Dense elimination result used by the systematic encoder.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Encoder {
    info: Vec<usize>,
    parity: Vec<usize>,
    // parity[r] = sum_k gen[r * K + k] * info[k]
    gen: Vec<Symbol>,
}

/// A (d_v, d_c)-regular non-binary LDPC mother code with full-rank `H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MotherCode {
    field: Field,
    n: usize,
    checks: usize,
    dv: usize,
    dc: usize,
    seed: u64,
    // Grouped by check: edges[c * dc..(c + 1) * dc].
    edges: Vec<Edge>,
    // var_edges[v * dv..(v + 1) * dv] are indices into `edges`.
    var_edges: Vec<usize>,
    encoder: Encoder,
}

impl MotherCode {
    /// Samples a random regular code; deterministic in `(field, n, dv, dc, seed)`.
    ///
    /// The graph comes from the configuration model with local swaps to
    /// remove parallel edges and, where possible, 4-cycles. If the sampled
    /// `H` is rank deficient the labels are resampled up to 10 times before a
    /// new graph is drawn; construction gives up after 100 attempts.
    pub fn build(field: Field, n: usize, dv: usize, dc: usize, seed: u64) -> Result<MotherCode> {
        check_degrees(n, dv, dc)?;
        let checks = n * dv / dc;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut attempts = 0;
        while attempts < MAX_CONSTRUCTION_ATTEMPTS {
            let Some(rows) = sample_graph(n, dv, dc, &mut rng) else {
                attempts += 1;
                continue;
            };
            for _ in 0..LABEL_RETRIES_PER_GRAPH {
                if attempts >= MAX_CONSTRUCTION_ATTEMPTS {
                    break;
                }
                attempts += 1;
                let edges: Vec<Edge> = rows
                    .iter()
                    .enumerate()
                    .flat_map(|(c, vars)| vars.iter().map(move |&v| (c, v)))
                    .map(|(check, var)| Edge {
                        check,
                        var,
                        label: Symbol(rng.random_range(1..field.size()) as u16),
                    })
                    .collect();
                if let Some(encoder) = eliminate(&field, checks, n, &edges) {
                    return Ok(Self::assemble(field, n, dv, dc, seed, edges, encoder));
                }
            }
        }
        Err(Error::Construction(format!(
            "no full-rank ({dv},{dc}) code with N={n} over GF(2^{}) after {MAX_CONSTRUCTION_ATTEMPTS} attempts",
            field.m()
        )))
    }

    /// Rebuilds a code from an explicit edge list (e.g. a loaded file),
    /// validating regularity, labels and rank.
    pub fn from_edges(
        field: Field,
        n: usize,
        dv: usize,
        dc: usize,
        seed: u64,
        mut edges: Vec<Edge>,
    ) -> Result<MotherCode> {
        check_degrees(n, dv, dc)?;
        let checks = n * dv / dc;
        if edges.len() != n * dv {
            return Err(Error::Construction(format!(
                "expected {} edges, found {}",
                n * dv,
                edges.len()
            )));
        }
        edges.sort_by_key(|e| (e.check, e.var));
        let mut check_deg = vec![0usize; checks];
        let mut var_deg = vec![0usize; n];
        for (i, e) in edges.iter().enumerate() {
            if e.check >= checks || e.var >= n {
                return Err(Error::Construction(format!("edge ({}, {}) out of range", e.check, e.var)));
            }
            if e.label.is_zero() || !field.contains(e.label) {
                return Err(Error::Construction(format!(
                    "edge ({}, {}) has invalid label {}",
                    e.check, e.var, e.label
                )));
            }
            if i > 0 && edges[i - 1].check == e.check && edges[i - 1].var == e.var {
                return Err(Error::Construction(format!("parallel edge ({}, {})", e.check, e.var)));
            }
            check_deg[e.check] += 1;
            var_deg[e.var] += 1;
        }
        if check_deg.iter().any(|&d| d != dc) || var_deg.iter().any(|&d| d != dv) {
            return Err(Error::Construction("edge list is not regular".into()));
        }
        let encoder = eliminate(&field, checks, n, &edges)
            .ok_or_else(|| Error::Construction("parity-check matrix is rank deficient".into()))?;
        Ok(Self::assemble(field, n, dv, dc, seed, edges, encoder))
    }

    fn assemble(
        field: Field,
        n: usize,
        dv: usize,
        dc: usize,
        seed: u64,
        mut edges: Vec<Edge>,
        encoder: Encoder,
    ) -> MotherCode {
        edges.sort_by_key(|e| (e.check, e.var));
        let mut var_edges = vec![usize::MAX; n * dv];
        let mut fill = vec![0usize; n];
        for (i, e) in edges.iter().enumerate() {
            var_edges[e.var * dv + fill[e.var]] = i;
            fill[e.var] += 1;
        }
        MotherCode {
            field,
            n,
            checks: edges.len() / dc,
            dv,
            dc,
            seed,
            edges,
            var_edges,
            encoder,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Number of variable nodes (symbols).
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of check nodes.
    pub fn checks(&self) -> usize {
        self.checks
    }

    pub fn dv(&self) -> usize {
        self.dv
    }

    pub fn dc(&self) -> usize {
        self.dc
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of information symbols `K = N - M`.
    pub fn k(&self) -> usize {
        self.n - self.checks
    }

    pub fn rate(&self) -> Rate {
        reduced(self.k() as u64, self.n as u64)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Edge indices of check `c`, in increasing variable order.
    pub fn check_edges(&self, c: usize) -> std::ops::Range<usize> {
        c * self.dc..(c + 1) * self.dc
    }

    /// Edge indices incident to variable `v`.
    pub fn var_edges(&self, v: usize) -> &[usize] {
        &self.var_edges[v * self.dv..(v + 1) * self.dv]
    }

    /// Positions that carry information symbols in an encoded word.
    pub fn info_positions(&self) -> &[usize] {
        &self.encoder.info
    }

    /// Evaluates `H·x` and returns the number of unsatisfied checks.
    pub fn syndrome_weight(&self, x: &[Symbol]) -> usize {
        (0..self.checks)
            .filter(|&c| {
                self.check_edges(c)
                    .map(|e| {
                        let edge = self.edges[e];
                        self.field.mul(edge.label, x[edge.var])
                    })
                    .fold(Symbol::ZERO, |a, b| a + b)
                    != Symbol::ZERO
            })
            .count()
    }

    pub fn is_codeword(&self, x: &[Symbol]) -> bool {
        x.len() == self.n && self.syndrome_weight(x) == 0
    }

    /// Systematic encoding of `K` information symbols into a mother codeword.
    pub fn encode(&self, info: &[Symbol]) -> Result<Vec<Symbol>> {
        let k = self.k();
        if info.len() != k {
            return Err(Error::LengthMismatch { expected: k, actual: info.len() });
        }
        let mut x = vec![Symbol::ZERO; self.n];
        for (&pos, &s) in self.encoder.info.iter().zip(info) {
            x[pos] = s;
        }
        for (r, &pos) in self.encoder.parity.iter().enumerate() {
            let row = &self.encoder.gen[r * k..(r + 1) * k];
            x[pos] = row
                .iter()
                .zip(info)
                .fold(Symbol::ZERO, |acc, (&g, &s)| acc + self.field.mul(g, s));
        }
        Ok(x)
    }

    /// Reads the information symbols back out of a mother codeword.
    pub fn extract_info(&self, x: &[Symbol]) -> Vec<Symbol> {
        self.encoder.info.iter().map(|&p| x[p]).collect()
    }
}

fn check_degrees(n: usize, dv: usize, dc: usize) -> Result<()> {
    if dv == 0 || dc < 2 {
        return Err(Error::Config(format!("degrees must satisfy dv >= 1, dc >= 2 (got {dv}, {dc})")));
    }
    if dv >= dc {
        return Err(Error::Config(format!("dv={dv} must be smaller than dc={dc} for a positive rate")));
    }
    if n < dc {
        return Err(Error::Config(format!("N={n} must be at least dc={dc}")));
    }
    if !(dv * n).is_multiple_of(dc) {
        return Err(Error::Config(format!("dv*N = {} is not divisible by dc={dc}", dv * n)));
    }
    Ok(())
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn reduced(num: u64, den: u64) -> Rate {
    let g = gcd(num, den).max(1);
    Rate { num: num / g, den: den / g }
}

// Configuration-model sampling. Returns the variable list of every check,
// or None if parallel edges could not be removed.
fn sample_graph(n: usize, dv: usize, dc: usize, rng: &mut ChaCha8Rng) -> Option<Vec<Vec<usize>>> {
    let mut sockets: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, dv)).collect();
    sockets.shuffle(rng);
    let total = sockets.len();
    let max_swaps = 20 * total + 100;

    // Parallel edges first; they are a hard constraint.
    let mut swaps = 0;
    while let Some(slot) = find_parallel(&sockets, dc) {
        if swaps == max_swaps {
            return None;
        }
        swaps += 1;
        swap_out(&mut sockets, slot, dc, rng);
    }

    // 4-cycles: best effort, only kept if no parallel edge is reintroduced.
    let mut swaps = 0;
    while let Some(slot) = find_four_cycle(&sockets, dc) {
        if swaps == max_swaps {
            break;
        }
        swaps += 1;
        let before = sockets.clone();
        let other = swap_out(&mut sockets, slot, dc, rng);
        if has_parallel_in(&sockets, slot / dc, dc) || has_parallel_in(&sockets, other / dc, dc) {
            sockets = before;
        }
    }

    let mut rows: Vec<Vec<usize>> = sockets.chunks(dc).map(|c| c.to_vec()).collect();
    for r in &mut rows {
        r.sort_unstable();
    }
    Some(rows)
}

fn swap_out(sockets: &mut [usize], slot: usize, dc: usize, rng: &mut ChaCha8Rng) -> usize {
    let total = sockets.len();
    loop {
        let other = rng.random_range(0..total);
        if other / dc != slot / dc {
            sockets.swap(slot, other);
            return other;
        }
    }
}

fn has_parallel_in(sockets: &[usize], check: usize, dc: usize) -> bool {
    let row = &sockets[check * dc..(check + 1) * dc];
    (0..dc).any(|i| (i + 1..dc).any(|j| row[i] == row[j]))
}

fn find_parallel(sockets: &[usize], dc: usize) -> Option<usize> {
    sockets.chunks(dc).enumerate().find_map(|(c, row)| {
        (1..dc)
            .find(|&j| row[..j].contains(&row[j]))
            .map(|j| c * dc + j)
    })
}

fn find_four_cycle(sockets: &[usize], dc: usize) -> Option<usize> {
    let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
    for (c, row) in sockets.chunks(dc).enumerate() {
        for i in 0..dc {
            for j in i + 1..dc {
                let key = (row[i].min(row[j]), row[i].max(row[j]));
                match seen.get(&key) {
                    Some(&c0) if c0 != c => return Some(c * dc + j),
                    _ => {
                        seen.insert(key, c);
                    }
                }
            }
        }
    }
    None
}

// Gaussian elimination to reduced row-echelon form. Returns None when H has
// rank below the number of rows.
fn eliminate(field: &Field, rows: usize, cols: usize, edges: &[Edge]) -> Option<Encoder> {
    let mut a = vec![Symbol::ZERO; rows * cols];
    for e in edges {
        a[e.check * cols + e.var] = e.label;
    }
    let mut pivots = Vec::with_capacity(rows);
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i * cols + col].is_zero()) else {
            continue;
        };
        if p != r {
            for j in col..cols {
                a.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = field.inv(a[r * cols + col]).expect("pivot is nonzero");
        for j in col..cols {
            a[r * cols + j] = field.mul(a[r * cols + j], inv);
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = a[i * cols + col];
            if factor.is_zero() {
                continue;
            }
            for j in col..cols {
                let t = field.mul(factor, a[r * cols + j]);
                a[i * cols + j] += t;
            }
        }
        pivots.push(col);
        r += 1;
    }
    if r < rows {
        return None;
    }
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let info: Vec<usize> = (0..cols).filter(|&c| !is_pivot[c]).collect();
    let k = info.len();
    let mut gen = vec![Symbol::ZERO; rows * k];
    for i in 0..rows {
        for (j, &c) in info.iter().enumerate() {
            gen[i * k + j] = a[i * cols + c];
        }
    }
    Some(Encoder { info, parity: pivots, gen })
}

/// Where repetition coefficients are drawn from.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub enum CoeffDomain {
    /// GF(2^m) \ {0}.
    ExcludeZero,
    /// GF(2^m) \ {0, 1}.
    #[default]
    ExcludeZeroOne,
    /// Every coefficient is 1: plain repetition.
    AllOnes,
}

impl FromStr for CoeffDomain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exclude-zero" => Ok(CoeffDomain::ExcludeZero),
            "exclude-zero-one" => Ok(CoeffDomain::ExcludeZeroOne),
            "all-ones" => Ok(CoeffDomain::AllOnes),
            _ => Err(Error::Config(format!(
                "unknown coefficient domain '{s}' (exclude-zero, exclude-zero-one, all-ones)"
            ))),
        }
    }
}

/// Mother-code positions that are not transmitted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PuncturePattern {
    positions: Vec<usize>,
}

impl PuncturePattern {
    pub fn new(mut positions: Vec<usize>) -> PuncturePattern {
        positions.sort_unstable();
        positions.dedup();
        PuncturePattern { positions }
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.positions.binary_search(&v).is_ok()
    }

    /// Draws a uniform pattern raising the mother rate to `target`.
    ///
    /// Punctures `⌈N·(1 - R_mother/target)⌉ = N - ⌊K/target⌋` positions.
    /// Draws containing a stopping set are rejected and redrawn: BP could
    /// never move those symbols off the uniform belief, so every frame
    /// would fail.
    pub fn random(mother: &MotherCode, target: Rate, seed: u64) -> Result<PuncturePattern> {
        let (n, k) = (mother.n() as u64, mother.k() as u64);
        // target < mother rate, or target >= 1
        if target.num * n < k * target.den || target.num >= target.den {
            return Err(Error::Config(format!(
                "rate {target} is unreachable by puncturing a rate-{} mother code",
                mother.rate()
            )));
        }
        let count = (n - (k * target.den) / target.num) as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..PUNCTURE_ATTEMPTS {
            let mut all: Vec<usize> = (0..mother.n()).collect();
            let (chosen, _) = all.partial_shuffle(&mut rng, count);
            let pattern = PuncturePattern::new(chosen.to_vec());
            if pattern.stuck(mother).is_empty() {
                return Ok(pattern);
            }
        }
        Err(Error::Construction(format!(
            "no recoverable puncturing to rate {target} in {PUNCTURE_ATTEMPTS} draws"
        )))
    }

    /// Punctured positions that peeling cannot recover, i.e. the largest
    /// stopping set inside the pattern.
    pub fn stuck(&self, mother: &MotherCode) -> Vec<usize> {
        let mut erased = vec![false; mother.n()];
        for &v in &self.positions {
            erased[v] = true;
        }
        let mut open: Vec<usize> = (0..mother.checks())
            .map(|c| mother.check_edges(c).filter(|&e| erased[mother.edges()[e].var]).count())
            .collect();
        let mut queue: Vec<usize> = (0..mother.checks()).filter(|&c| open[c] == 1).collect();
        while let Some(c) = queue.pop() {
            if open[c] != 1 {
                continue;
            }
            let Some(v) = mother.check_edges(c).map(|e| mother.edges()[e].var).find(|&v| erased[v]) else {
                continue;
            };
            erased[v] = false;
            for &e in mother.var_edges(v) {
                let d = mother.edges()[e].check;
                open[d] -= 1;
                if open[d] == 1 {
                    queue.push(d);
                }
            }
        }
        self.positions.iter().copied().filter(|&v| erased[v]).collect()
    }
}

const PUNCTURE_ATTEMPTS: usize = 1000;

/// The concatenation `C_T` of a mother code with multiplicative repetition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepCode {
    mother: MotherCode,
    t: usize,
    // coeffs[(t - 1) * N + v] multiplies x[v] into position t * N + v.
    coeffs: Vec<Symbol>,
    puncture: PuncturePattern,
}

impl RepCode {
    /// Extends `mother` with `T - 1` multiplicative repetitions.
    pub fn extend(mother: MotherCode, t: usize, domain: CoeffDomain, seed: u64) -> Result<RepCode> {
        if t == 0 {
            return Err(Error::Config("repetition parameter T must be at least 1".into()));
        }
        let q = mother.field().size();
        let low = match domain {
            CoeffDomain::ExcludeZero => 1,
            CoeffDomain::ExcludeZeroOne => 2,
            CoeffDomain::AllOnes => 1,
        };
        if low >= q {
            return Err(Error::Config(format!(
                "coefficient domain {domain:?} is empty over GF(2^{})",
                mother.field().m()
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let count = (t - 1) * mother.n();
        let coeffs = (0..count)
            .map(|_| match domain {
                CoeffDomain::AllOnes => Symbol::ONE,
                _ => Symbol(rng.random_range(low..q) as u16),
            })
            .collect();
        Ok(RepCode { mother, t, coeffs, puncture: PuncturePattern::default() })
    }

    /// Assembles a code from explicit coefficients.
    pub fn from_parts(
        mother: MotherCode,
        t: usize,
        coeffs: Vec<Symbol>,
        puncture: PuncturePattern,
    ) -> Result<RepCode> {
        if t == 0 {
            return Err(Error::Config("repetition parameter T must be at least 1".into()));
        }
        let expected = (t - 1) * mother.n();
        if coeffs.len() != expected {
            return Err(Error::LengthMismatch { expected, actual: coeffs.len() });
        }
        if coeffs.iter().any(|c| c.is_zero() || !mother.field().contains(*c)) {
            return Err(Error::Construction("repetition coefficients must be nonzero field elements".into()));
        }
        if puncture.positions().iter().any(|&p| p >= mother.n()) {
            return Err(Error::Construction("puncture position out of range".into()));
        }
        Ok(RepCode { mother, t, coeffs, puncture })
    }

    pub fn with_puncture(mut self, puncture: PuncturePattern) -> RepCode {
        self.puncture = puncture;
        self
    }

    pub fn mother(&self) -> &MotherCode {
        &self.mother
    }

    pub fn field(&self) -> &Field {
        self.mother.field()
    }

    /// Repetition parameter `T`.
    pub fn t(&self) -> usize {
        self.t
    }

    pub fn coeffs(&self) -> &[Symbol] {
        &self.coeffs
    }

    /// Coefficient `r[t·N + v]` for `t` in `1..T`.
    #[inline]
    pub fn coeff(&self, t: usize, v: usize) -> Symbol {
        self.coeffs[(t - 1) * self.mother.n() + v]
    }

    pub fn puncture(&self) -> &PuncturePattern {
        &self.puncture
    }

    /// Code length `T·N` in symbols (punctured positions included).
    pub fn len(&self) -> usize {
        self.t * self.mother.n()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn k(&self) -> usize {
        self.mother.k()
    }

    /// Positions of `0..T·N` that are sent over the channel, in order.
    pub fn transmitted_positions(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&p| p >= self.mother.n() || !self.puncture.contains(p))
    }

    pub fn transmitted_symbols(&self) -> usize {
        self.len() - self.puncture.len()
    }

    /// Rate `K / (T·N - |punctured|)`.
    pub fn rate(&self) -> Rate {
        reduced(self.k() as u64, self.transmitted_symbols() as u64)
    }

    /// Encodes `K` information symbols into a length `T·N` codeword.
    pub fn encode(&self, info: &[Symbol]) -> Result<Vec<Symbol>> {
        let base = self.mother.encode(info)?;
        Ok(self.repeat(&base))
    }

    /// Applies the repetition map to a mother codeword.
    pub fn repeat(&self, base: &[Symbol]) -> Vec<Symbol> {
        let n = self.mother.n();
        let field = self.field();
        let mut x = Vec::with_capacity(self.len());
        x.extend_from_slice(base);
        for t in 1..self.t {
            x.extend((0..n).map(|v| field.mul(self.coeff(t, v), base[v])));
        }
        x
    }

    /// True iff every mother check and repetition constraint holds.
    pub fn is_codeword(&self, x: &[Symbol]) -> bool {
        let n = self.mother.n();
        if x.len() != self.len() || !self.mother.is_codeword(&x[..n]) {
            return false;
        }
        (1..self.t).all(|t| (0..n).all(|v| x[t * n + v] == self.field().mul(self.coeff(t, v), x[v])))
    }

    /// The transmitted bit stream of a codeword: m bits per transmitted
    /// symbol, least-significant first.
    pub fn to_bits(&self, x: &[Symbol]) -> Vec<u8> {
        let mut bits = Vec::with_capacity(self.transmitted_symbols() * self.field().m() as usize);
        for p in self.transmitted_positions() {
            self.field().to_bits(x[p], &mut bits);
        }
        bits
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    fn field(m: u32) -> Field {
        Field::new(m).unwrap()
    }

    // Direct evaluation of every check equation from the edge list.
    fn brute_force_syndrome_zero(code: &MotherCode, x: &[Symbol]) -> bool {
        let f = code.field();
        let mut s = vec![Symbol::ZERO; code.checks()];
        for e in code.edges() {
            s[e.check] += f.mul(e.label, x[e.var]);
        }
        s.iter().all(|v| v.is_zero())
    }

    #[test]
    fn mother_dimensions() {
        let c = MotherCode::build(field(2), 18, 2, 3, 1).unwrap();
        assert_eq!(c.checks(), 12);
        assert_eq!(c.edges().len(), 36);
        assert_eq!(c.k(), 6);
        assert_eq!(c.rate(), Rate { num: 1, den: 3 });

        let c = MotherCode::build(field(8), 24, 2, 4, 1).unwrap();
        assert_eq!(c.checks(), 12);
        assert_eq!(c.rate(), Rate { num: 1, den: 2 });
    }

    #[test]
    fn mother_invariants() {
        for seed in 0..20 {
            let c = MotherCode::build(field(3), 30, 2, 3, seed).unwrap();
            let mut vdeg = vec![0; c.n()];
            let mut cdeg = vec![0; c.checks()];
            for e in c.edges() {
                assert!(!e.label.is_zero());
                vdeg[e.var] += 1;
                cdeg[e.check] += 1;
            }
            assert!(vdeg.iter().all(|&d| d == 2));
            assert!(cdeg.iter().all(|&d| d == 3));
            let mut pairs: Vec<_> = c.edges().iter().map(|e| (e.check, e.var)).collect();
            pairs.dedup();
            assert_eq!(pairs.len(), c.edges().len());
            for v in 0..c.n() {
                for &e in c.var_edges(v) {
                    assert_eq!(c.edges()[e].var, v);
                }
            }
        }
    }

    #[test]
    fn construction_is_deterministic() {
        let a = MotherCode::build(field(4), 48, 2, 3, 99).unwrap();
        let b = MotherCode::build(field(4), 48, 2, 3, 99).unwrap();
        assert_eq!(a.edges(), b.edges());
        let c = MotherCode::build(field(4), 48, 2, 3, 100).unwrap();
        assert_ne!(a.edges(), c.edges());
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(MotherCode::build(field(2), 10, 2, 3, 0), Err(Error::Config(_))));
        assert!(matches!(MotherCode::build(field(2), 2, 2, 3, 0), Err(Error::Config(_))));
        // Binary (2,k) codes always have dependent rows: every cycle product is 1.
        assert!(matches!(MotherCode::build(field(1), 18, 2, 3, 0), Err(Error::Construction(_))));
    }

    #[test]
    fn large_code_avoids_four_cycles() {
        let c = MotherCode::build(field(8), 300, 2, 3, 5).unwrap();
        let mut seen = std::collections::HashSet::new();
        for ch in 0..c.checks() {
            let vars: Vec<usize> = c.check_edges(ch).map(|e| c.edges()[e].var).collect();
            for i in 0..vars.len() {
                for j in i + 1..vars.len() {
                    assert!(seen.insert((vars[i], vars[j])), "4-cycle through {vars:?}");
                }
            }
        }
    }

    #[test]
    fn extension_shapes() {
        let mother = MotherCode::build(field(4), 18, 2, 3, 3).unwrap();
        let c1 = RepCode::extend(mother.clone(), 1, CoeffDomain::ExcludeZeroOne, 0).unwrap();
        assert!(c1.coeffs().is_empty());
        assert_eq!(c1.rate(), Rate { num: 1, den: 3 });
        let c2 = RepCode::extend(mother.clone(), 2, CoeffDomain::ExcludeZeroOne, 0).unwrap();
        assert_eq!(c2.len(), 36);
        assert_eq!(c2.rate(), Rate { num: 1, den: 6 });
        assert!(c2.coeffs().iter().all(|c| c.value() >= 2));
        let c3 = RepCode::extend(mother.clone(), 3, CoeffDomain::ExcludeZero, 0).unwrap();
        assert_eq!(c3.len(), 54);
        assert_eq!(c3.rate(), Rate { num: 1, den: 9 });
        assert_eq!(c3.coeffs().len(), 36);
        let ones = RepCode::extend(mother, 2, CoeffDomain::AllOnes, 0).unwrap();
        assert!(ones.coeffs().iter().all(|&c| c == Symbol::ONE));
    }

    #[test]
    fn empty_domain_is_rejected() {
        // Only reachable through from_edges for m = 1; build a GF(2) code by hand.
        let f = field(1);
        let edges = vec![
            Edge { check: 0, var: 0, label: Symbol::ONE },
            Edge { check: 0, var: 1, label: Symbol::ONE },
        ];
        let mother = MotherCode::from_edges(f, 2, 1, 2, 0, edges).unwrap();
        assert!(RepCode::extend(mother.clone(), 2, CoeffDomain::ExcludeZeroOne, 0).is_err());
        assert!(RepCode::extend(mother, 2, CoeffDomain::ExcludeZero, 0).is_ok());
    }

    #[test]
    fn encode_satisfies_all_constraints() {
        let mother = MotherCode::build(field(4), 12, 2, 3, 11).unwrap();
        let code = RepCode::extend(mother, 2, CoeffDomain::ExcludeZeroOne, 12).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let info: Vec<Symbol> = (0..code.k()).map(|_| Symbol(rng.random_range(0..16))).collect();
            let x = code.encode(&info).unwrap();
            let n = code.mother().n();
            assert!(brute_force_syndrome_zero(code.mother(), &x[..n]));
            for v in 0..n {
                assert_eq!(x[n + v], code.field().mul(code.coeff(1, v), x[v]));
            }
            assert!(code.is_codeword(&x));
            assert_eq!(code.mother().extract_info(&x[..n]), info);
        }
        assert!(matches!(code.encode(&[Symbol::ZERO]), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn zero_and_perturbed_words() {
        let mother = MotherCode::build(field(3), 18, 2, 3, 2).unwrap();
        let code = RepCode::extend(mother, 3, CoeffDomain::ExcludeZero, 2).unwrap();
        let zero = vec![Symbol::ZERO; code.k()];
        let x = code.encode(&zero).unwrap();
        assert!(x.iter().all(|s| s.is_zero()));
        assert!(code.is_codeword(&x));

        let info: Vec<Symbol> = (0..code.k()).map(|i| Symbol((i % 8) as u16)).collect();
        let x = code.encode(&info).unwrap();
        for p in 0..code.len() {
            let mut y = x.clone();
            y[p] += Symbol(1);
            assert!(!code.is_codeword(&y), "flip at {p} undetected");
        }
    }

    #[test]
    fn puncturing() {
        let mother = MotherCode::build(field(8), 72, 2, 3, 1).unwrap();
        let p = PuncturePattern::random(&mother, Rate::new(1, 2).unwrap(), 4).unwrap();
        assert_eq!(p.len(), 24);
        assert_eq!(p, PuncturePattern::random(&mother, Rate::new(1, 2).unwrap(), 4).unwrap());
        assert!(PuncturePattern::random(&mother, Rate::new(1, 3).unwrap(), 4).unwrap().is_empty());
        assert!(PuncturePattern::random(&mother, Rate::new(1, 4).unwrap(), 4).is_err());
        assert!(PuncturePattern::random(&mother, Rate::new(1, 1).unwrap(), 4).is_err());

        let code = RepCode::extend(mother, 1, CoeffDomain::ExcludeZeroOne, 0).unwrap().with_puncture(p);
        assert_eq!(code.rate(), Rate { num: 1, den: 2 });
        assert_eq!(code.transmitted_symbols(), 48);
        assert_eq!(code.to_bits(&[Symbol::ZERO; 72]).len(), 48 * 8);
    }

    // Repeated full sweeps until nothing changes.
    fn naive_stuck(mother: &MotherCode, p: &PuncturePattern) -> Vec<usize> {
        let mut erased: Vec<bool> = (0..mother.n()).map(|v| p.contains(v)).collect();
        let mut changed = true;
        while changed {
            changed = false;
            for c in 0..mother.checks() {
                let open: Vec<usize> =
                    mother.check_edges(c).map(|e| mother.edges()[e].var).filter(|&v| erased[v]).collect();
                if open.len() == 1 {
                    erased[open[0]] = false;
                    changed = true;
                }
            }
        }
        (0..mother.n()).filter(|&v| erased[v]).collect()
    }

    #[test]
    fn puncturing_avoids_stopping_sets() {
        let mother = MotherCode::build(field(8), 72, 2, 3, 7).unwrap();
        let everything = PuncturePattern::new((0..72).collect());
        assert_eq!(everything.stuck(&mother).len(), 72);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut nonempty = 0;
        for _ in 0..200 {
            let p = PuncturePattern::new((0..72).filter(|_| rng.random_bool(0.35)).collect());
            let stuck = p.stuck(&mother);
            assert_eq!(stuck, naive_stuck(&mother, &p));
            nonempty += usize::from(!stuck.is_empty());
        }
        assert!(nonempty > 0);
        for seed in 0..40 {
            let p = PuncturePattern::random(&mother, Rate::new(1, 2).unwrap(), seed).unwrap();
            assert_eq!(p.len(), 24);
            assert!(p.stuck(&mother).is_empty());
        }
    }

    #[test]
    fn rate_parsing() {
        assert_eq!("1/2".parse::<Rate>().unwrap(), Rate { num: 1, den: 2 });
        assert!("x".parse::<Rate>().is_err());
        assert!("1/0".parse::<Rate>().is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn encode_roundtrips_info(seed in any::<u64>(), m in 2u32..=8, t in 1usize..4) {
            let mother = MotherCode::build(field(m), 24, 2, 3, seed).unwrap();
            prop_assert_eq!(mother.n() * mother.dv(), mother.checks() * mother.dc());
            let code = RepCode::extend(mother, t, CoeffDomain::ExcludeZero, seed ^ 1).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let q = code.field().size();
            let info: Vec<Symbol> = (0..code.k()).map(|_| Symbol(rng.random_range(0..q) as u16)).collect();
            let x = code.encode(&info).unwrap();
            prop_assert!(code.is_codeword(&x));
            prop_assert_eq!(code.mother().extract_info(&x[..code.mother().n()]), info);
        }
    }
}
