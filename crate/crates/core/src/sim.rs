//! Reproducible Monte Carlo frame-error-rate campaigns.
//!
//! Trial `i` at grid point `g` draws all of its randomness (information
//! word and channel noise) from a ChaCha8 stream seeded by a hash of
//! `(master_seed, g, i)`. Trials run in fixed-size batches on a rayon pool
//! and are folded into the counters strictly in trial order, so the stop
//! rule fires at the same trial and the records come out identical for any
//! worker count.

use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::Channel;
use crate::code::{CoeffDomain, MotherCode, PuncturePattern, Rate, RepCode};
use crate::codefile;
use crate::decoder::{channel_posteriors, DecodeOutcome, Decoder, DecoderOptions, DEFAULT_MAX_ITER};
use crate::error::{Error, Result};
use crate::gf::{Field, Symbol};

const BATCH: usize = 64;

/// Parameters that determine a [`RepCode`] completely.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeParams {
    pub m: u32,
    pub n: usize,
    pub dv: usize,
    pub dc: usize,
    pub t: usize,
    pub domain: CoeffDomain,
    pub seed: u64,
    /// Seed for the repetition coefficients; `seed + 1` when absent.
    pub coeff_seed: Option<u64>,
    /// Puncture the mother code to this rate.
    pub puncture: Option<Rate>,
}

impl CodeParams {
    pub fn build(&self) -> Result<RepCode> {
        let field = Field::new(self.m)?;
        let mother = MotherCode::build(field, self.n, self.dv, self.dc, self.seed)?;
        let puncture = match self.puncture {
            Some(rate) => PuncturePattern::random(&mother, rate, self.seed)?,
            None => PuncturePattern::default(),
        };
        let coeff_seed = self.coeff_seed.unwrap_or(self.seed.wrapping_add(1));
        Ok(RepCode::extend(mother, self.t, self.domain, coeff_seed)?.with_puncture(puncture))
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelKind {
    /// Grid values are erasure probabilities.
    Bec,
    /// Grid values are `E_b/N_0` in dB.
    Awgn,
}

impl ChannelKind {
    pub fn name(self) -> &'static str {
        match self {
            ChannelKind::Bec => "bec",
            ChannelKind::Awgn => "awgn",
        }
    }

    /// The channel at one grid value for a code of the given rate.
    pub fn channel(self, param: f64, rate: f64) -> Result<Channel> {
        match self {
            ChannelKind::Bec => Channel::bec(param),
            ChannelKind::Awgn => Channel::awgn(param, rate),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    pub channel: ChannelKind,
    pub grid: Vec<f64>,
    pub max_iter: usize,
    pub min_trials: u64,
    pub max_trials: u64,
    pub max_frame_errors: u64,
    pub master_seed: u64,
    /// Rayon threads; 0 picks the rayon default.
    pub workers: usize,
    /// Send the all-zero codeword instead of random information (BEC only).
    pub all_zero: bool,
    /// Include wall-clock time in the records (breaks byte-identical output).
    pub record_time: bool,
}

impl SimConfig {
    pub fn new(channel: ChannelKind, grid: Vec<f64>, master_seed: u64) -> SimConfig {
        SimConfig {
            channel,
            grid,
            max_iter: DEFAULT_MAX_ITER,
            min_trials: 1,
            max_trials: 1_000_000,
            max_frame_errors: 100,
            master_seed,
            workers: 0,
            all_zero: false,
            record_time: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Config(msg.to_string()));
        if self.grid.is_empty() {
            return bad("parameter grid is empty");
        }
        if self.min_trials == 0 || self.max_trials == 0 || self.max_frame_errors == 0 {
            return bad("trial limits and frame-error target must be positive");
        }
        if self.min_trials > self.max_trials {
            return bad("min_trials exceeds max_trials");
        }
        if self.max_iter == 0 {
            return bad("max_iter must be at least 1");
        }
        if self.all_zero && self.channel != ChannelKind::Bec {
            return bad("the all-zero shortcut is only valid on the BEC");
        }
        if self.grid.iter().any(|p| !p.is_finite()) {
            return bad("grid values must be finite");
        }
        Ok(())
    }
}

/// One measured grid point. Field order is the output column order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimRecord {
    pub channel: ChannelKind,
    pub param: f64,
    pub trials: u64,
    pub frame_errors: u64,
    pub fer: f64,
    /// Wrong or undetermined information symbols, over all trials.
    pub symbol_errors: u64,
    /// Wrong or undetermined information bits, over all trials.
    pub bit_errors: u64,
    /// Mean iteration count of the successful decodes.
    pub mean_iterations: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
    pub master_seed: u64,
    pub code_crc32: String,
}

/// CSV header matching [`SimRecord`].
pub const CSV_COLUMNS: [&str; 11] = [
    "channel",
    "param",
    "trials",
    "frame_errors",
    "fer",
    "symbol_errors",
    "bit_errors",
    "mean_iterations",
    "wall_time_s",
    "master_seed",
    "code_crc32",
];

impl SimRecord {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }

    pub fn csv_row(&self) -> [String; 11] {
        [
            self.channel.name().to_string(),
            self.param.to_string(),
            self.trials.to_string(),
            self.frame_errors.to_string(),
            self.fer.to_string(),
            self.symbol_errors.to_string(),
            self.bit_errors.to_string(),
            self.mean_iterations.to_string(),
            self.wall_time_s.map(|t| t.to_string()).unwrap_or_default(),
            self.master_seed.to_string(),
            self.code_crc32.clone(),
        ]
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Seed of the random stream for one trial.
pub fn trial_seed(master_seed: u64, grid_index: usize, trial: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master_seed) ^ grid_index as u64) ^ trial)
}

#[derive(Copy, Clone, Debug, Default)]
struct TrialOutcome {
    frame_error: bool,
    symbol_errors: u64,
    bit_errors: u64,
    iterations: usize,
}

struct Point<'a> {
    code: &'a RepCode,
    decoder: Decoder<'a>,
    channel: Channel,
    all_zero: bool,
    master_seed: u64,
    grid_index: usize,
}

impl Point<'_> {
    fn trial(&self, i: u64) -> Result<TrialOutcome> {
        let code = self.code;
        let field = code.field();
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(self.master_seed, self.grid_index, i));
        let info: Vec<Symbol> = if self.all_zero {
            vec![Symbol::ZERO; code.k()]
        } else {
            (0..code.k()).map(|_| Symbol(rng.random_range(0..field.size()) as u16)).collect()
        };
        let x = code.encode(&info)?;
        let obs = self.channel.transmit(&code.to_bits(&x), &mut rng);
        let result = self.decoder.decode(&channel_posteriors(code, &self.channel, &obs)?)?;
        let n = code.mother().n();
        let frame_error = match &result.outcome {
            DecodeOutcome::Codeword(c) => c[..] != x[..n],
            DecodeOutcome::Fail => true,
        };
        let (mut symbol_errors, mut bit_errors) = (0, 0);
        for (&pos, sent) in code.mother().info_positions().iter().zip(&info) {
            // Bits that rest on a tie count as wrong whatever the guess.
            let wrong = (result.hard_decision[pos].value() ^ sent.value()) | result.undetermined[pos];
            symbol_errors += u64::from(wrong != 0);
            bit_errors += u64::from(wrong.count_ones());
        }
        Ok(TrialOutcome { frame_error, symbol_errors, bit_errors, iterations: result.iterations })
    }
}

/// Runs every grid point, handing each record to `sink` as soon as it is
/// complete.
pub fn run<F>(code: &RepCode, config: &SimConfig, mut sink: F) -> Result<Vec<SimRecord>>
where
    F: FnMut(&SimRecord) -> Result<()>,
{
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let crc = format!("0x{:08x}", codefile::checksum(code));
    let rate = code.rate().as_f64();
    let mut records = Vec::with_capacity(config.grid.len());
    for (g, &param) in config.grid.iter().enumerate() {
        let started = Instant::now();
        let point = Point {
            code,
            decoder: Decoder::new(code, DecoderOptions { max_iter: config.max_iter, trace: false }),
            channel: config.channel.channel(param, rate)?,
            all_zero: config.all_zero,
            master_seed: config.master_seed,
            grid_index: g,
        };
        let mut rec = SimRecord {
            channel: config.channel,
            param,
            trials: 0,
            frame_errors: 0,
            fer: 0.0,
            symbol_errors: 0,
            bit_errors: 0,
            mean_iterations: 0.0,
            wall_time_s: None,
            master_seed: config.master_seed,
            code_crc32: crc.clone(),
        };
        let mut iter_sum = 0u64;
        'batches: while rec.trials < config.max_trials {
            let start = rec.trials;
            let end = (start + BATCH as u64).min(config.max_trials);
            let outcomes: Vec<Result<TrialOutcome>> =
                pool.install(|| (start..end).into_par_iter().map(|i| point.trial(i)).collect());
            for o in outcomes {
                let o = o?;
                rec.trials += 1;
                if o.frame_error {
                    rec.frame_errors += 1;
                } else {
                    iter_sum += o.iterations as u64;
                }
                rec.symbol_errors += o.symbol_errors;
                rec.bit_errors += o.bit_errors;
                if rec.trials >= config.min_trials && rec.frame_errors >= config.max_frame_errors {
                    break 'batches;
                }
            }
        }
        rec.fer = rec.frame_errors as f64 / rec.trials as f64;
        let successes = rec.trials - rec.frame_errors;
        if successes > 0 {
            rec.mean_iterations = iter_sum as f64 / successes as f64;
        }
        if config.record_time {
            rec.wall_time_s = Some(started.elapsed().as_secs_f64());
        }
        sink(&rec)?;
        records.push(rec);
    }
    Ok(records)
}

/// Writes records as JSON lines.
pub fn write_json_lines<W: Write>(out: &mut W, records: &[SimRecord]) -> Result<()> {
    for r in records {
        writeln!(out, "{}", r.to_json_line())?;
    }
    Ok(())
}

/// Writes records as CSV with a header row in [`CSV_COLUMNS`] order.
pub fn write_csv<W: Write>(out: W, records: &[SimRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(CSV_COLUMNS).map_err(io)?;
    for r in records {
        w.write_record(r.csv_row()).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

/// Parameter at which the FER curve crosses `target`, interpolating
/// `log10(FER)` linearly between the first bracketing pair of grid points.
/// The grid must be ordered so that FER decreases.
pub fn fer_crossing(records: &[SimRecord], target: f64) -> Option<f64> {
    records.windows(2).find_map(|w| {
        let (a, b) = (&w[0], &w[1]);
        if a.fer >= target && b.fer < target {
            if b.fer == 0.0 {
                return Some(b.param);
            }
            let (la, lb, lt) = (a.fer.log10(), b.fer.log10(), target.log10());
            Some(a.param + (b.param - a.param) * (la - lt) / (la - lb))
        } else {
            None
        }
    })
}
