//! Belief propagation for `C_T` on the mother-code Tanner graph.
//!
//! Every repetition copy `x[t·N + v] = r·x[v]` hangs off the graph through a
//! degree-2 check and a degree-1 variable. A degree-1 variable always
//! returns its channel message, so the copies are folded into the initial
//! message of `v` once and never visited again:
//!
//! ```text
//! p_v0(x) ∝ P(x | y_v) · ∏_t P(r_{tN+v}·x | y_{tN+v})
//! ```
//!
//! From then on only the `M` mother checks iterate, whatever `T` is.
//! Check updates run in the Walsh-Hadamard domain; the schedule is flooding
//! (all checks, then all variables).

use crate::channel::{normalize_slice, symbol_posterior, BitObservation, Channel, ProbVec};
use crate::code::RepCode;
use crate::error::{Error, Result};
use crate::gf::Symbol;
use crate::transform::{fwht, ifwht};

/// Iteration cap used when none is given.
pub const DEFAULT_MAX_ITER: usize = 200;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct DecoderOptions {
    pub max_iter: usize,
    /// Record the syndrome weight after every tentative decision.
    pub trace: bool,
}

impl Default for DecoderOptions {
    fn default() -> Self {
        DecoderOptions { max_iter: DEFAULT_MAX_ITER, trace: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecodeOutcome {
    /// A mother codeword (N symbols).
    Codeword(Vec<Symbol>),
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeResult {
    pub outcome: DecodeOutcome,
    pub iterations: usize,
    /// Last tentative decision, also on failure.
    pub hard_decision: Vec<Symbol>,
    /// Bits of each hard-decision symbol that rest on a tie.
    pub undetermined: Vec<u16>,
    /// Syndrome weight per tentative decision, starting at iteration 0.
    pub syndrome_trace: Vec<usize>,
    /// Messages that collapsed to all-zero and were reset to uniform.
    pub contradictions: usize,
}

impl DecodeResult {
    pub fn is_success(&self) -> bool {
        matches!(self.outcome, DecodeOutcome::Codeword(_))
    }
}

/// Per-code decoder; reusable across frames.
pub struct Decoder<'a> {
    code: &'a RepCode,
    options: DecoderOptions,
    q: usize,
    // mul[h * q + y] = h·y
    mul: Vec<u16>,
}

impl<'a> Decoder<'a> {
    pub fn new(code: &'a RepCode, options: DecoderOptions) -> Decoder<'a> {
        let field = code.field();
        let q = field.size();
        let mut mul = vec![0u16; q * q];
        for h in field.elements() {
            for y in field.elements() {
                mul[h.index() * q + y.index()] = field.mul(h, y).value();
            }
        }
        Decoder { code, options, q, mul }
    }

    pub fn code(&self) -> &RepCode {
        self.code
    }

    pub fn options(&self) -> DecoderOptions {
        self.options
    }

    #[inline]
    fn mul(&self, h: Symbol, y: usize) -> usize {
        self.mul[h.index() * self.q + y] as usize
    }

    /// Builds the decoder state from one posterior per transmitted position
    /// (see [`RepCode::transmitted_positions`]). Punctured positions count as
    /// uniform.
    pub fn initialize(&self, posteriors: &[ProbVec]) -> Result<DecoderState<'_, 'a>> {
        let code = self.code;
        let expected = code.transmitted_symbols();
        if posteriors.len() != expected {
            return Err(Error::LengthMismatch { expected, actual: posteriors.len() });
        }
        let q = self.q;
        if let Some(bad) = posteriors.iter().find(|p| p.len() != q) {
            return Err(Error::LengthMismatch { expected: q, actual: bad.len() });
        }
        let n = code.mother().n();
        let mut slot = vec![usize::MAX; code.len()];
        for (i, p) in code.transmitted_positions().enumerate() {
            slot[p] = i;
        }

        let mut contradictions = 0;
        let mut var_init = vec![1.0; n * q];
        for v in 0..n {
            let init = &mut var_init[v * q..(v + 1) * q];
            if slot[v] != usize::MAX {
                init.copy_from_slice(&posteriors[slot[v]]);
            }
            for t in 1..code.t() {
                let r = code.coeff(t, v);
                let copy = &posteriors[slot[t * n + v]];
                for (x, px) in init.iter_mut().enumerate() {
                    *px *= copy[self.mul(r, x)];
                }
            }
            if !normalize_slice(init) {
                init.fill(1.0 / q as f64);
                contradictions += 1;
            }
        }

        let edges = code.mother().edges();
        let mut v2c = vec![0.0; edges.len() * q];
        for (e, edge) in edges.iter().enumerate() {
            v2c[e * q..(e + 1) * q].copy_from_slice(&var_init[edge.var * q..(edge.var + 1) * q]);
        }
        let c2v = vec![1.0 / q as f64; edges.len() * q];
        let dc = code.mother().dc();
        Ok(DecoderState {
            dec: self,
            var_init,
            v2c,
            c2v,
            iteration: 0,
            contradictions,
            scratch: vec![0.0; (3 * dc + 1) * q],
        })
    }

    /// Runs the full decoding loop on channel posteriors.
    pub fn decode(&self, posteriors: &[ProbVec]) -> Result<DecodeResult> {
        let mut state = self.initialize(posteriors)?;
        Ok(state.run(self.options.max_iter, self.options.trace))
    }

    /// Decodes raw bit observations (m per transmitted symbol).
    pub fn decode_observations(&self, channel: &Channel, obs: &[BitObservation]) -> Result<DecodeResult> {
        let posteriors = channel_posteriors(self.code, channel, obs)?;
        self.decode(&posteriors)
    }
}

/// Groups bit observations into per-symbol posteriors in transmission order.
pub fn channel_posteriors(code: &RepCode, channel: &Channel, obs: &[BitObservation]) -> Result<Vec<ProbVec>> {
    let m = code.field().m() as usize;
    let expected = code.transmitted_symbols() * m;
    if obs.len() != expected {
        return Err(Error::LengthMismatch { expected, actual: obs.len() });
    }
    obs.chunks(m).map(|c| symbol_posterior(code.field(), c, channel)).collect()
}

/// Convenience wrapper: decode with default options and a given cap.
pub fn decode(code: &RepCode, posteriors: &[ProbVec], max_iter: usize) -> Result<DecodeResult> {
    if max_iter == 0 {
        return Err(Error::Config("max_iter must be at least 1".into()));
    }
    Decoder::new(code, DecoderOptions { max_iter, trace: false }).decode(posteriors)
}

/// Messages of one decoding run.
pub struct DecoderState<'d, 'a> {
    dec: &'d Decoder<'a>,
    var_init: Vec<f64>,
    v2c: Vec<f64>,
    c2v: Vec<f64>,
    iteration: usize,
    contradictions: usize,
    scratch: Vec<f64>,
}

impl DecoderState<'_, '_> {
    /// Completed check-to-variable rounds.
    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn contradictions(&self) -> usize {
        self.contradictions
    }

    /// Initial message `p_v^(0)` of mother variable `v`.
    pub fn var_init(&self, v: usize) -> &[f64] {
        let q = self.dec.q;
        &self.var_init[v * q..(v + 1) * q]
    }

    /// Variable-to-check message on mother edge `e`.
    pub fn v2c(&self, e: usize) -> &[f64] {
        let q = self.dec.q;
        &self.v2c[e * q..(e + 1) * q]
    }

    /// Check-to-variable message on mother edge `e`.
    pub fn c2v(&self, e: usize) -> &[f64] {
        let q = self.dec.q;
        &self.c2v[e * q..(e + 1) * q]
    }

    /// Updates every check-to-variable message and advances the iteration
    /// counter.
    pub fn check_to_variable(&mut self) {
        let dec = self.dec;
        let mother = dec.code.mother();
        let edges = mother.edges();
        let q = dec.q;
        let dc = mother.dc();
        let (spectra, rest) = self.scratch.split_at_mut(dc * q);
        let (prefix, rest) = rest.split_at_mut(dc * q);
        let (suffix, out) = rest.split_at_mut(dc * q);
        for c in 0..mother.checks() {
            let range = mother.check_edges(c);
            // Rotate by the edge label and move to the transform domain.
            for (j, e) in range.clone().enumerate() {
                let h = edges[e].label;
                let spec = &mut spectra[j * q..(j + 1) * q];
                let msg = &self.v2c[e * q..(e + 1) * q];
                for (y, &p) in msg.iter().enumerate() {
                    spec[dec.mul(h, y)] = p;
                }
                fwht(spec);
            }
            // Leave-one-out products.
            prefix[..q].fill(1.0);
            for j in 1..dc {
                let (done, cur) = prefix.split_at_mut(j * q);
                for y in 0..q {
                    cur[y] = done[(j - 1) * q + y] * spectra[(j - 1) * q + y];
                }
            }
            suffix[(dc - 1) * q..].fill(1.0);
            for j in (0..dc - 1).rev() {
                let (cur, done) = suffix.split_at_mut((j + 1) * q);
                for y in 0..q {
                    cur[j * q + y] = done[y] * spectra[(j + 1) * q + y];
                }
            }
            for (j, e) in range.enumerate() {
                let conv = &mut out[..q];
                for y in 0..q {
                    conv[y] = prefix[j * q + y] * suffix[j * q + y];
                }
                ifwht(conv);
                let h = edges[e].label;
                let msg = &mut self.c2v[e * q..(e + 1) * q];
                for (x, px) in msg.iter_mut().enumerate() {
                    *px = conv[dec.mul(h, x)].max(0.0);
                }
                if !normalize_slice(msg) {
                    msg.fill(1.0 / q as f64);
                    self.contradictions += 1;
                }
            }
        }
        self.iteration += 1;
    }

    /// Updates every variable-to-check message from `p_v^(0)` and the other
    /// incoming check messages.
    pub fn variable_to_check(&mut self) {
        let mother = self.dec.code.mother();
        let q = self.dec.q;
        for v in 0..mother.n() {
            let init = &self.var_init[v * q..(v + 1) * q];
            let incident = mother.var_edges(v);
            for &e in incident {
                let out = &mut self.v2c[e * q..(e + 1) * q];
                out.copy_from_slice(init);
                for &other in incident.iter().filter(|&&o| o != e) {
                    let msg = &self.c2v[other * q..(other + 1) * q];
                    out.iter_mut().zip(msg).for_each(|(a, b)| *a *= b);
                }
                if !normalize_slice(out) {
                    out.fill(1.0 / q as f64);
                    self.contradictions += 1;
                }
            }
        }
    }

    /// Unnormalized belief of variable `v`: `p_v^(0)` times all incoming
    /// check messages.
    pub fn belief(&self, v: usize) -> Vec<f64> {
        let q = self.dec.q;
        let mut b = self.var_init(v).to_vec();
        for &e in self.dec.code.mother().var_edges(v) {
            b.iter_mut().zip(self.c2v(e)).for_each(|(a, m)| *a *= m);
        }
        debug_assert_eq!(b.len(), q);
        b
    }

    /// Symbol-wise argmax of the beliefs, ties going to the smaller symbol.
    pub fn tentative_decision(&self) -> Decision {
        let mother = self.dec.code.mother();
        let (symbols, undetermined): (Vec<Symbol>, Vec<u16>) =
            (0..mother.n()).map(|v| decide(&self.belief(v))).unzip();
        let syndrome_weight = mother.syndrome_weight(&symbols);
        Decision { symbols, syndrome_weight, undetermined }
    }

    /// One flooding iteration.
    pub fn step(&mut self) {
        self.check_to_variable();
        self.variable_to_check();
    }

    /// Iterates until the tentative decision is an unambiguous codeword or
    /// `max_iter` rounds have run.
    pub fn run(&mut self, max_iter: usize, trace: bool) -> DecodeResult {
        let mut syndrome_trace = Vec::new();
        loop {
            let d = self.tentative_decision();
            if trace {
                syndrome_trace.push(d.syndrome_weight);
            }
            let done = d.is_codeword();
            if done || self.iteration >= max_iter {
                return DecodeResult {
                    outcome: if done { DecodeOutcome::Codeword(d.symbols.clone()) } else { DecodeOutcome::Fail },
                    iterations: self.iteration,
                    hard_decision: d.symbols,
                    undetermined: d.undetermined,
                    syndrome_trace,
                    contradictions: self.contradictions,
                };
            }
            self.step();
        }
    }
}

/// Beliefs within this relative distance of the maximum count as tied.
pub const TIE_TOLERANCE: f64 = 1e-9;

/// Hard decision on one belief: the smallest symbol attaining the maximum,
/// and the mask of bits on which the tied maximizers disagree.
pub fn decide(belief: &[f64]) -> (Symbol, u16) {
    let max = belief.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let floor = max * (1.0 - TIE_TOLERANCE);
    let mut hits = belief.iter().enumerate().filter(|(_, &p)| p >= floor).map(|(i, _)| i as u16);
    let first = hits.next().unwrap_or(0);
    let mask = hits.fold(0, |acc, x| acc | (x ^ first));
    (Symbol(first), mask)
}

/// A tentative decision on the mother codeword.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decision {
    pub symbols: Vec<Symbol>,
    pub syndrome_weight: usize,
    /// Per variable, the bits left open by tied maximizers (see [`decide`]).
    pub undetermined: Vec<u16>,
}

impl Decision {
    /// Variables whose belief has more than one maximizer.
    pub fn ambiguous(&self) -> usize {
        self.undetermined.iter().filter(|&&m| m != 0).count()
    }

    /// Decoding stops here: every check holds and no symbol was a guess.
    pub fn is_codeword(&self) -> bool {
        self.syndrome_weight == 0 && self.ambiguous() == 0
    }
}

#[cfg(test)]
#[allow(clippy::needless_range_loop)]
mod tests {
    use super::*;
    use crate::code::{CoeffDomain, MotherCode};
    use crate::gf::Field;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn small_code(m: u32, n: usize, t: usize, seed: u64) -> RepCode {
        let mother = MotherCode::build(Field::new(m).unwrap(), n, 2, 3, seed).unwrap();
        RepCode::extend(mother, t, CoeffDomain::ExcludeZero, seed + 100).unwrap()
    }

    fn random_prob(q: usize, rng: &mut ChaCha8Rng) -> ProbVec {
        let mut p = ProbVec((0..q).map(|_| rng.random::<f64>()).collect());
        p.normalize();
        p
    }

    #[test]
    fn t1_init_equals_channel_posterior() {
        let code = small_code(3, 12, 1, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let post: Vec<ProbVec> = (0..12).map(|_| random_prob(8, &mut rng)).collect();
        let dec = Decoder::new(&code, DecoderOptions::default());
        let st = dec.initialize(&post).unwrap();
        for v in 0..12 {
            for x in 0..8 {
                assert!((st.var_init(v)[x] - post[v][x]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn t2_erased_first_copy_gives_permuted_second() {
        let code = small_code(3, 12, 2, 2);
        let f = code.field();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut post: Vec<ProbVec> = (0..12).map(|_| ProbVec::uniform(8)).collect();
        post.extend((0..12).map(|_| random_prob(8, &mut rng)));
        let dec = Decoder::new(&code, DecoderOptions::default());
        let st = dec.initialize(&post).unwrap();
        for v in 0..12 {
            let r = code.coeff(1, v);
            for x in f.elements() {
                let expect = post[12 + v][f.mul(r, x).index()];
                assert!((st.var_init(v)[x.index()] - expect).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn t2_init_matches_direct_product_m2() {
        let code = small_code(2, 9, 2, 4);
        let f = code.field();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let post: Vec<ProbVec> = (0..18).map(|_| random_prob(4, &mut rng)).collect();
        let dec = Decoder::new(&code, DecoderOptions::default());
        let st = dec.initialize(&post).unwrap();
        for v in 0..9 {
            let r = code.coeff(1, v);
            let raw: Vec<f64> = f
                .elements()
                .map(|x| post[v][x.index()] * post[9 + v][f.mul(r, x).index()])
                .collect();
            let s: f64 = raw.iter().sum();
            for x in 0..4 {
                assert!((st.var_init(v)[x] - raw[x] / s).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn init_rejects_wrong_count() {
        let code = small_code(2, 9, 2, 4);
        let dec = Decoder::new(&code, DecoderOptions::default());
        assert!(matches!(
            dec.initialize(&vec![ProbVec::uniform(4); 9]),
            Err(Error::LengthMismatch { expected: 18, actual: 9 })
        ));
    }

    #[test]
    fn check_update_on_point_masses() {
        let code = small_code(3, 12, 1, 6);
        let f = code.field();
        let mother = code.mother();
        let mut post = vec![ProbVec::uniform(8); 12];
        // Point masses on the first two variables of check 0.
        let e0 = mother.edges()[0];
        let e1 = mother.edges()[1];
        let e2 = mother.edges()[2];
        let (a, b) = (Symbol(5), Symbol(3));
        post[e0.var] = ProbVec::point_mass(8, a.index());
        post[e1.var] = ProbVec::point_mass(8, b.index());
        let dec = Decoder::new(&code, DecoderOptions::default());
        let mut st = dec.initialize(&post).unwrap();
        st.check_to_variable();
        let sum = f.mul(e0.label, a) + f.mul(e1.label, b);
        let expect = f.div(sum, e2.label).unwrap();
        let msg = st.c2v(2);
        for x in 0..8 {
            let want = if x == expect.index() { 1.0 } else { 0.0 };
            assert!((msg[x] - want).abs() < 1e-12, "x={x} {msg:?}");
        }
        // Uniform inputs stay uniform on every other check.
        for c in 1..mother.checks() {
            let touches = mother
                .check_edges(c)
                .any(|e| [e0.var, e1.var].contains(&mother.edges()[e].var));
            if !touches {
                for e in mother.check_edges(c) {
                    assert!(st.c2v(e).iter().all(|&p| (p - 0.125).abs() < 1e-12));
                }
            }
        }
    }

    #[test]
    fn variable_update_products() {
        let code = small_code(2, 9, 1, 7);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let post: Vec<ProbVec> = (0..9).map(|_| random_prob(4, &mut rng)).collect();
        let dec = Decoder::new(&code, DecoderOptions::default());
        let mut st = dec.initialize(&post).unwrap();
        // Incoming uniform: outgoing equals p_v0.
        st.variable_to_check();
        for (e, edge) in code.mother().edges().iter().enumerate() {
            for x in 0..4 {
                assert!((st.v2c(e)[x] - post[edge.var][x]).abs() < 1e-15);
            }
        }
        st.check_to_variable();
        st.variable_to_check();
        let mother = code.mother();
        for v in 0..9 {
            let [e, other] = [mother.var_edges(v)[0], mother.var_edges(v)[1]];
            let raw: Vec<f64> = (0..4).map(|x| post[v][x] * st.c2v(other)[x]).collect();
            let s: f64 = raw.iter().sum();
            for x in 0..4 {
                assert!((st.v2c(e)[x] - raw[x] / s).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn point_mass_init_propagates_unchanged() {
        let code = small_code(2, 9, 1, 8);
        let mut post = vec![ProbVec::uniform(4); 9];
        post[0] = ProbVec::point_mass(4, 2);
        let dec = Decoder::new(&code, DecoderOptions::default());
        let mut st = dec.initialize(&post).unwrap();
        st.step();
        for &e in code.mother().var_edges(0) {
            assert_eq!(st.v2c(e), &[0.0, 0.0, 1.0, 0.0]);
        }
    }

    #[test]
    fn tie_breaks_to_smallest_symbol() {
        let code = small_code(2, 9, 1, 9);
        let post = vec![ProbVec(vec![0.0, 0.5, 0.5, 0.0]); 9];
        let dec = Decoder::new(&code, DecoderOptions::default());
        let st = dec.initialize(&post).unwrap();
        let d = st.tentative_decision();
        assert!(d.symbols.iter().all(|&s| s == Symbol(1)));
        assert_eq!(d.ambiguous(), 9);
        assert!(d.undetermined.iter().all(|&m| m == 0b11));
        assert!(!d.is_codeword());
        assert_eq!(decide(&[0.3, 0.3 * (1.0 + 1e-12), 0.1, 0.0]), (Symbol(0), 1));
        assert_eq!(decide(&[0.3, 0.31, 0.1, 0.0]), (Symbol(1), 0));
        assert_eq!(decide(&[0.0, 0.0, 0.5, 0.5]).1, 0b01);
    }

    #[test]
    fn unresolved_erasures_do_not_count_as_decoded() {
        // Everything erased: the zero word fits every check but is a guess.
        let code = small_code(3, 12, 2, 4);
        let post = vec![ProbVec::uniform(8); code.transmitted_symbols()];
        let res = decode(&code, &post, 5).unwrap();
        assert_eq!(res.outcome, DecodeOutcome::Fail);
        assert!(res.hard_decision.iter().all(|s| s.is_zero()));
    }

    #[test]
    fn noiseless_decodes_in_zero_iterations() {
        let code = small_code(4, 24, 3, 10);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let info: Vec<Symbol> = (0..code.k()).map(|_| Symbol(rng.random_range(0..16))).collect();
        let x = code.encode(&info).unwrap();
        let bits = code.to_bits(&x);
        let ch = Channel::Bec { epsilon: 0.0 };
        let obs = ch.transmit(&bits, &mut rng);
        let dec = Decoder::new(&code, DecoderOptions::default());
        let res = dec.decode_observations(&ch, &obs).unwrap();
        assert_eq!(res.iterations, 0);
        assert_eq!(res.outcome, DecodeOutcome::Codeword(x[..24].to_vec()));
    }

    #[test]
    fn iteration_cap_reports_fail() {
        let code = small_code(3, 30, 1, 12);
        let ch = Channel::Bec { epsilon: 0.9 };
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        // A zero word would win every all-uniform tie, so send a nonzero one.
        let info: Vec<Symbol> = (0..code.k()).map(|i| Symbol(1 + (i % 7) as u16)).collect();
        let bits = code.to_bits(&code.encode(&info).unwrap());
        let obs = ch.transmit(&bits, &mut rng);
        let post = channel_posteriors(&code, &ch, &obs).unwrap();
        let res = decode(&code, &post, 1).unwrap();
        assert_eq!(res.outcome, DecodeOutcome::Fail);
        assert_eq!(res.iterations, 1);
        assert!(decode(&code, &post, 0).is_err());
    }

    #[test]
    fn bec_supports_only_shrink() {
        let code = small_code(3, 60, 2, 13);
        let ch = Channel::Bec { epsilon: 0.45 };
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let bits = code.to_bits(&vec![Symbol::ZERO; code.len()]);
        let obs = ch.transmit(&bits, &mut rng);
        let post = channel_posteriors(&code, &ch, &obs).unwrap();
        let dec = Decoder::new(&code, DecoderOptions::default());
        let mut st = dec.initialize(&post).unwrap();
        let support = |st: &DecoderState| -> Vec<Vec<bool>> {
            (0..code.mother().edges().len())
                .map(|e| st.v2c(e).iter().map(|&p| p > 1e-9).collect())
                .collect()
        };
        let mut prev = support(&st);
        for _ in 0..15 {
            st.step();
            let cur = support(&st);
            for (a, b) in prev.iter().zip(&cur) {
                for (&was, &is) in a.iter().zip(b) {
                    assert!(was || !is, "support grew");
                }
                // Zero was sent, so it stays in every support.
                assert!(b[0]);
            }
            prev = cur;
        }
        assert_eq!(st.contradictions(), 0);
    }

    #[test]
    fn punctured_positions_are_uniform() {
        use crate::code::{PuncturePattern, Rate};
        let mother = MotherCode::build(Field::new(3).unwrap(), 18, 2, 3, 3).unwrap();
        let p = PuncturePattern::random(&mother, Rate::new(1, 2).unwrap(), 1).unwrap();
        let code = RepCode::extend(mother, 2, CoeffDomain::ExcludeZero, 4).unwrap().with_puncture(p.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let post: Vec<ProbVec> = (0..code.transmitted_symbols()).map(|_| random_prob(8, &mut rng)).collect();
        let dec = Decoder::new(&code, DecoderOptions::default());
        let st = dec.initialize(&post).unwrap();
        let f = code.field();
        let first_copy = code.transmitted_positions().position(|pos| pos == 18).unwrap();
        for &v in p.positions() {
            let r = code.coeff(1, v);
            let copy = &post[first_copy + v];
            let raw: Vec<f64> = f.elements().map(|x| copy[f.mul(r, x).index()]).collect();
            let s: f64 = raw.iter().sum();
            for x in 0..8 {
                assert!((st.var_init(v)[x] - raw[x] / s).abs() < 1e-14);
            }
        }
    }
}
