//! The `nbmr` command-line front end.
//!
//! Exit codes: 0 success, 1 decoding failure or I/O error, 2 invalid
//! configuration or input, 3 code construction failure.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{BitObservation, Channel};
use crate::code::{CoeffDomain, Rate, RepCode};
use crate::codefile;
use crate::decoder::{DecodeOutcome, Decoder, DecoderOptions, DEFAULT_MAX_ITER};
use crate::density::{self, DeParams};
use crate::error::{Error, Result};
use crate::gf::Symbol;
use crate::sim::{self, ChannelKind, CodeParams, SimConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_CONSTRUCTION: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "nbmr", version, about = "Non-binary LDPC codes with multiplicative repetition")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Construct a code and write it to a file.
    Build(BuildArgs),
    /// Encode information symbols, optionally passing them through a channel.
    Encode(EncodeArgs),
    /// Decode channel observations.
    Decode(DecodeArgs),
    /// Monte Carlo frame error rate over a parameter grid.
    Sim(SimArgs),
    /// BEC density-evolution threshold of a (2, dc) ensemble.
    Threshold(ThresholdArgs),
    /// Threshold grid over field degrees and repetition factors.
    DeSweep(SweepArgs),
}

#[derive(Args, Debug, Clone)]
pub struct CodeFlags {
    /// Field degree, GF(2^m).
    #[arg(long)]
    pub m: Option<u32>,
    /// Mother code length in symbols.
    #[arg(long = "N")]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub dv: usize,
    #[arg(long)]
    pub dc: Option<usize>,
    /// Repetition factor.
    #[arg(long = "T", default_value_t = 1)]
    pub t: usize,
    /// Construction seed.
    #[arg(long = "code-seed")]
    pub code_seed: Option<u64>,
    /// Repetition coefficient domain: exclude-zero, exclude-zero-one, all-ones.
    #[arg(long, default_value = "exclude-zero-one")]
    pub coeffs: CoeffDomain,
    #[arg(long)]
    pub coeff_seed: Option<u64>,
    /// Puncture the mother code to this rate, e.g. 1/2.
    #[arg(long)]
    pub puncture: Option<Rate>,
}

impl CodeFlags {
    fn params(&self, seed: Option<u64>) -> Result<CodeParams> {
        let missing = |f: &str| Error::Config(format!("--{f} is required"));
        Ok(CodeParams {
            m: self.m.ok_or_else(|| missing("m"))?,
            n: self.n.ok_or_else(|| missing("N"))?,
            dv: self.dv,
            dc: self.dc.ok_or_else(|| missing("dc"))?,
            t: self.t,
            domain: self.coeffs,
            seed: self.code_seed.or(seed).ok_or_else(|| missing("seed"))?,
            coeff_seed: self.coeff_seed,
            puncture: self.puncture,
        })
    }
}

#[derive(Args, Debug)]
pub struct BuildArgs {
    #[command(flatten)]
    pub code: CodeFlags,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ChannelArg {
    Bec,
    Awgn,
}

impl From<ChannelArg> for ChannelKind {
    fn from(c: ChannelArg) -> ChannelKind {
        match c {
            ChannelArg::Bec => ChannelKind::Bec,
            ChannelArg::Awgn => ChannelKind::Awgn,
        }
    }
}

#[derive(Args, Debug)]
pub struct EncodeArgs {
    #[arg(long)]
    pub code: PathBuf,
    /// Comma-separated hex information symbols; random when absent.
    #[arg(long)]
    pub info: Option<String>,
    /// Seed for random information and channel noise.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Emit channel observations instead of clean bits.
    #[arg(long, requires = "param")]
    pub channel: Option<ChannelArg>,
    /// Erasure probability or E_b/N_0 in dB.
    #[arg(long)]
    pub param: Option<f64>,
    /// Print the full codeword as hex symbols instead of transmitted bits.
    #[arg(long)]
    pub symbols: bool,
}

#[derive(Args, Debug)]
pub struct DecodeArgs {
    #[arg(long)]
    pub code: PathBuf,
    #[arg(long, value_enum)]
    pub channel: ChannelArg,
    /// E_b/N_0 in dB; required for AWGN.
    #[arg(long)]
    pub ebn0: Option<f64>,
    /// Observation file (whitespace-separated 0, 1, ? or reals); stdin when absent.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
    pub max_iter: usize,
}

#[derive(Args, Debug)]
pub struct SimArgs {
    /// Code file; otherwise the code is built from the code flags.
    #[arg(long = "code")]
    pub code_file: Option<PathBuf>,
    #[command(flatten)]
    pub code: CodeFlags,
    #[arg(long, value_enum)]
    pub channel: ChannelArg,
    /// Comma-separated values or start:step:stop.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: String,
    #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 1)]
    pub min_trials: u64,
    #[arg(long, default_value_t = 1_000_000)]
    pub max_trials: u64,
    #[arg(long, default_value_t = 100)]
    pub max_frame_errors: u64,
    /// Master seed of all trial streams.
    #[arg(long)]
    pub seed: u64,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    /// Transmit the all-zero codeword (BEC only).
    #[arg(long)]
    pub all_zero: bool,
    /// Add wall-clock time to each record.
    #[arg(long)]
    pub time: bool,
    /// JSON-lines output file; stdout when absent.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// Also write a CSV table.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ThresholdArgs {
    #[arg(long)]
    pub m: u32,
    #[arg(long)]
    pub dc: usize,
    #[arg(long = "T", default_value_t = 1)]
    pub t: usize,
    #[arg(long, default_value_t = 1e-5)]
    pub tol: f64,
    #[arg(long, default_value_t = DeParams::default().max_iter)]
    pub max_iter: usize,
    /// Print one JSON object instead of text.
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 3)]
    pub dc: usize,
    /// Field degrees, comma-separated or lo..hi.
    #[arg(long, default_value = "1..10")]
    pub m: String,
    /// Repetition factors, comma-separated or lo..hi.
    #[arg(long = "T", default_value = "1..3")]
    pub t: String,
    #[arg(long, default_value_t = 1e-5)]
    pub tol: f64,
}

#[derive(Serialize)]
struct ThresholdReport {
    m: u32,
    dc: usize,
    #[serde(rename = "T")]
    t: usize,
    threshold: f64,
    rate: f64,
    shannon_limit: f64,
    normalized_gap: f64,
}

impl ThresholdReport {
    fn compute(m: u32, dc: usize, t: usize, params: &DeParams) -> Result<ThresholdReport> {
        if !(1..=crate::gf::MAX_DEGREE).contains(&m) {
            return Err(Error::UnsupportedDegree(m));
        }
        if dc < 3 || t == 0 {
            return Err(Error::Config("need dc >= 3 and T >= 1".into()));
        }
        if params.bisect_tol.is_nan() || params.bisect_tol <= 0.0 {
            return Err(Error::Config("tolerance must be positive".into()));
        }
        let threshold = density::threshold_with(m, dc, t, params);
        let rate = density::design_rate(dc, t);
        Ok(ThresholdReport {
            m,
            dc,
            t,
            threshold,
            rate,
            shannon_limit: 1.0 - rate,
            normalized_gap: density::normalized_gap(threshold, rate),
        })
    }
}

/// Exit code for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Construction(_) => EXIT_CONSTRUCTION,
        Error::Io(_) => EXIT_FAIL,
        _ => EXIT_CONFIG,
    }
}

/// Parses arguments and runs one command, writing to `out` and `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Build(a) => cmd_build(a, out),
        Command::Encode(a) => cmd_encode(a, out),
        Command::Decode(a) => cmd_decode(a, out),
        Command::Sim(a) => cmd_sim(a, out, err),
        Command::Threshold(a) => cmd_threshold(a, out),
        Command::DeSweep(a) => cmd_de_sweep(a, out),
    }
}

fn cmd_build(a: BuildArgs, out: &mut dyn Write) -> Result<i32> {
    let code = a.code.params(Some(a.seed))?.build()?;
    if let Some(path) = &a.out {
        codefile::save_code(&code, path)?;
    } else {
        out.write_all(codefile::to_string(&code).as_bytes())?;
    }
    let summary = format!(
        "rate={} K={} info_bits={} N={} T={} punctured={} crc32=0x{:08x}",
        code.rate(),
        code.k(),
        code.k() * code.field().m() as usize,
        code.mother().n(),
        code.t(),
        code.puncture().len(),
        codefile::checksum(&code)
    );
    if a.out.is_some() {
        writeln!(out, "{summary}")?;
    }
    Ok(EXIT_OK)
}

fn parse_info(code: &RepCode, text: &str) -> Result<Vec<Symbol>> {
    let info = text
        .split(',')
        .map(|t| {
            let t = t.trim();
            let digits = t.strip_prefix("0x").unwrap_or(t);
            u16::from_str_radix(digits, 16)
                .ok()
                .map(Symbol)
                .filter(|s| code.field().contains(*s))
                .ok_or_else(|| Error::Config(format!("bad information symbol '{t}'")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(info)
}

fn cmd_encode(a: EncodeArgs, out: &mut dyn Write) -> Result<i32> {
    let code = codefile::load_code(&a.code)?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let info = match &a.info {
        Some(text) => parse_info(&code, text)?,
        None => (0..code.k()).map(|_| Symbol(rng.random_range(0..code.field().size()) as u16)).collect(),
    };
    let x = code.encode(&info)?;
    if a.symbols {
        let hex: Vec<String> = x.iter().map(|s| format!("{:x}", s.value())).collect();
        writeln!(out, "{}", hex.join(" "))?;
        return Ok(EXIT_OK);
    }
    let bits = code.to_bits(&x);
    let tokens: Vec<String> = match a.channel {
        None => bits.iter().map(|b| b.to_string()).collect(),
        Some(kind) => {
            let channel = ChannelKind::from(kind).channel(a.param.unwrap_or(0.0), code.rate().as_f64())?;
            channel.transmit(&bits, &mut rng).iter().map(observation_token).collect()
        }
    };
    writeln!(out, "{}", tokens.join(" "))?;
    Ok(EXIT_OK)
}

fn observation_token(o: &BitObservation) -> String {
    match o {
        BitObservation::Zero => "0".into(),
        BitObservation::One => "1".into(),
        BitObservation::Erased => "?".into(),
        BitObservation::Soft(y) => format!("{y:.6}"),
    }
}

fn parse_observations(text: &str, kind: ChannelArg) -> Result<Vec<BitObservation>> {
    text.split_whitespace()
        .enumerate()
        .map(|(i, tok)| match (tok, kind) {
            ("0", ChannelArg::Bec) => Ok(BitObservation::Zero),
            ("1", ChannelArg::Bec) => Ok(BitObservation::One),
            ("?", ChannelArg::Bec) => Ok(BitObservation::Erased),
            (_, ChannelArg::Awgn) => tok
                .parse::<f64>()
                .ok()
                .filter(|y| y.is_finite())
                .map(BitObservation::Soft)
                .ok_or_else(|| Error::Parse { line: 1, msg: format!("token {}: bad real '{tok}'", i + 1) }),
            _ => Err(Error::Parse { line: 1, msg: format!("token {}: expected 0, 1 or ?, got '{tok}'", i + 1) }),
        })
        .collect()
}

fn cmd_decode(a: DecodeArgs, out: &mut dyn Write) -> Result<i32> {
    let code = codefile::load_code(&a.code)?;
    if a.max_iter == 0 {
        return Err(Error::Config("max_iter must be at least 1".into()));
    }
    let mut text = String::new();
    match &a.input {
        Some(p) => {
            File::open(p)?.read_to_string(&mut text)?;
        }
        None => {
            std::io::stdin().read_to_string(&mut text)?;
        }
    }
    let obs = parse_observations(&text, a.channel)?;
    let channel = match a.channel {
        ChannelArg::Bec => Channel::Bec { epsilon: 0.5 },
        ChannelArg::Awgn => {
            let ebn0 = a.ebn0.ok_or_else(|| Error::Config("--ebn0 is required for AWGN".into()))?;
            Channel::awgn(ebn0, code.rate().as_f64())?
        }
    };
    let decoder = Decoder::new(&code, DecoderOptions { max_iter: a.max_iter, trace: false });
    let result = decoder.decode_observations(&channel, &obs)?;
    match &result.outcome {
        DecodeOutcome::Codeword(c) => {
            let info: Vec<String> =
                code.mother().extract_info(c).iter().map(|s| format!("{:x}", s.value())).collect();
            writeln!(out, "ok iterations={}", result.iterations)?;
            writeln!(out, "{}", info.join(","))?;
            Ok(EXIT_OK)
        }
        DecodeOutcome::Fail => {
            writeln!(out, "FAIL iterations={}", result.iterations)?;
            Ok(EXIT_FAIL)
        }
    }
}

/// Parses `a,b,c` or `start:step:stop` (inclusive, up to rounding).
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let bad = || Error::Config(format!("bad grid '{text}'"));
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [single] => single.split(',').map(num).collect(),
        [start, step, stop] => {
            let (start, step, stop) = (num(start)?, num(step)?, num(stop)?);
            if step.is_nan() || step <= 0.0 || stop < start {
                return Err(bad());
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
            Ok((0..count).map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9).collect())
        }
        _ => Err(bad()),
    }
}

fn parse_int_list(text: &str) -> Result<Vec<usize>> {
    let bad = || Error::Config(format!("bad list '{text}'"));
    if let Some((lo, hi)) = text.split_once("..") {
        let lo: usize = lo.trim().parse().map_err(|_| bad())?;
        let hi: usize = hi.trim().parse().map_err(|_| bad())?;
        return if lo <= hi { Ok((lo..=hi).collect()) } else { Err(bad()) };
    }
    text.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect()
}

fn cmd_sim(a: SimArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let code = match &a.code_file {
        Some(p) => codefile::load_code(p)?,
        None => a.code.params(Some(a.seed))?.build()?,
    };
    let config = SimConfig {
        channel: a.channel.into(),
        grid: parse_grid(&a.grid)?,
        max_iter: a.max_iter,
        min_trials: a.min_trials,
        max_trials: a.max_trials,
        max_frame_errors: a.max_frame_errors,
        master_seed: a.seed,
        workers: a.workers,
        all_zero: a.all_zero,
        record_time: a.time,
    };
    config.validate()?;
    let mut file = match &a.out {
        Some(p) => Some(BufWriter::new(File::create(p)?)),
        None => None,
    };
    let records = sim::run(&code, &config, |r| {
        let line = r.to_json_line();
        match file.as_mut() {
            Some(f) => {
                writeln!(f, "{line}")?;
                f.flush()?;
                let _ = writeln!(err, "{} {} fer={} ({}/{})", r.channel.name(), r.param, r.fer, r.frame_errors, r.trials);
            }
            None => {
                writeln!(out, "{line}")?;
                out.flush()?;
            }
        }
        Ok(())
    })?;
    if let Some(p) = &a.csv {
        sim::write_csv(File::create(p)?, &records)?;
    }
    Ok(EXIT_OK)
}

fn cmd_threshold(a: ThresholdArgs, out: &mut dyn Write) -> Result<i32> {
    let params = DeParams { bisect_tol: a.tol, max_iter: a.max_iter, ..DeParams::default() };
    let r = ThresholdReport::compute(a.m, a.dc, a.t, &params)?;
    if a.json {
        writeln!(out, "{}", serde_json::to_string(&r).expect("report serializes"))?;
    } else {
        writeln!(out, "ensemble       (2,{}) over GF(2^{}), T={}", r.dc, r.m, r.t)?;
        writeln!(out, "rate           {:.6}", r.rate)?;
        writeln!(out, "threshold      {:.6}", r.threshold)?;
        writeln!(out, "shannon limit  {:.6}", r.shannon_limit)?;
        writeln!(out, "normalized gap {:.6}", r.normalized_gap)?;
    }
    Ok(EXIT_OK)
}

fn cmd_de_sweep(a: SweepArgs, out: &mut dyn Write) -> Result<i32> {
    let ms = parse_int_list(&a.m)?;
    let ts = parse_int_list(&a.t)?;
    let params = DeParams { bisect_tol: a.tol, ..DeParams::default() };
    let grid: Vec<(usize, usize)> = ts.iter().flat_map(|&t| ms.iter().map(move |&m| (t, m))).collect();
    let reports: Vec<Result<ThresholdReport>> = grid
        .par_iter()
        .map(|&(t, m)| ThresholdReport::compute(m as u32, a.dc, t, &params))
        .collect();
    for r in reports {
        writeln!(out, "{}", serde_json::to_string(&r?).expect("report serializes"))?;
    }
    Ok(EXIT_OK)
}
