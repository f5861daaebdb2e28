//! Line-oriented text serialization of [`RepCode`].
//!
//! ```text
//! nbmr-code v1
//! m=<int> poly=0x<hex> N=<int> M=<int> dv=<int> dc=<int> T=<int> seed=<int>
//! e <c> <v> 0x<label>        one per edge, 0-based indices
//! r <t> <v> 0x<coef>         one per repetition coefficient, t in 1..T
//! p <v>                      one per punctured mother position
//! crc32=0x<hex>              CRC-32 (IEEE) of every preceding byte
//! ```
//!
//! Hex digits are lowercase; records appear in the order above, sorted by
//! index, so equal codes serialize to identical bytes.

use std::fmt::Write as _;
use std::path::Path;

use crate::code::{Edge, MotherCode, PuncturePattern, RepCode};
use crate::error::{Error, Result};
use crate::gf::{Field, Symbol};

pub const MAGIC: &str = "nbmr-code v1";

/// Serializes a code to its canonical text form.
pub fn to_string(code: &RepCode) -> String {
    let mut s = body(code);
    let crc = crc32fast::hash(s.as_bytes());
    let _ = writeln!(s, "crc32=0x{crc:08x}");
    s
}

/// CRC-32 stored in the trailer of the canonical serialization.
pub fn checksum(code: &RepCode) -> u32 {
    crc32fast::hash(body(code).as_bytes())
}

fn body(code: &RepCode) -> String {
    let mother = code.mother();
    let field = mother.field();
    let mut s = String::new();
    s.push_str(MAGIC);
    s.push('\n');
    let _ = writeln!(
        s,
        "m={} poly=0x{:x} N={} M={} dv={} dc={} T={} seed={}",
        field.m(),
        field.poly(),
        mother.n(),
        mother.checks(),
        mother.dv(),
        mother.dc(),
        code.t(),
        mother.seed()
    );
    for e in mother.edges() {
        let _ = writeln!(s, "e {} {} 0x{:x}", e.check, e.var, e.label.value());
    }
    for t in 1..code.t() {
        for v in 0..mother.n() {
            let _ = writeln!(s, "r {} {} 0x{:x}", t, v, code.coeff(t, v).value());
        }
    }
    for &p in code.puncture().positions() {
        let _ = writeln!(s, "p {p}");
    }
    s
}

pub fn save_code(code: &RepCode, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, to_string(code))?;
    Ok(())
}

pub fn load_code(path: impl AsRef<Path>) -> Result<RepCode> {
    let text = std::fs::read_to_string(path)?;
    from_str(&text)
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_hex(tok: &str, line: usize) -> Result<u32> {
    let digits = tok
        .strip_prefix("0x")
        .ok_or_else(|| perr(line, format!("expected 0x-prefixed hex, got '{tok}'")))?;
    u32::from_str_radix(digits, 16).map_err(|_| perr(line, format!("bad hex '{tok}'")))
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize) -> Result<T> {
    tok.parse()
        .map_err(|_| perr(line, format!("bad integer '{tok}'")))
}

/// Parses the canonical text form, verifying the trailer checksum.
pub fn from_str(text: &str) -> Result<RepCode> {
    let body_end = text
        .trim_end_matches('\n')
        .rfind('\n')
        .map(|i| i + 1)
        .ok_or_else(|| perr(1, "file too short"))?;
    let (body, trailer) = text.split_at(body_end);
    let line_count = body.lines().count();
    let trailer_line = line_count + 1;
    let stored = trailer
        .trim_end()
        .strip_prefix("crc32=")
        .ok_or_else(|| perr(trailer_line, "missing crc32 trailer"))
        .and_then(|t| parse_hex(t, trailer_line))?;
    let computed = crc32fast::hash(body.as_bytes());
    if stored != computed {
        return Err(Error::Checksum { stored, computed });
    }

    let mut lines = body.lines().enumerate().map(|(i, l)| (i + 1, l));
    match lines.next() {
        Some((_, l)) if l == MAGIC => {}
        _ => return Err(perr(1, format!("expected '{MAGIC}'"))),
    }
    let (hline, header) = lines.next().ok_or_else(|| perr(2, "missing header"))?;
    let mut fields = std::collections::HashMap::new();
    for tok in header.split_whitespace() {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| perr(hline, format!("bad header token '{tok}'")))?;
        fields.insert(k, v);
    }
    let get = |k: &str| {
        fields
            .get(k)
            .copied()
            .ok_or_else(|| perr(hline, format!("header lacks '{k}'")))
    };
    let m: u32 = parse_num(get("m")?, hline)?;
    let poly = parse_hex(get("poly")?, hline)?;
    let n: usize = parse_num(get("N")?, hline)?;
    let checks: usize = parse_num(get("M")?, hline)?;
    let dv: usize = parse_num(get("dv")?, hline)?;
    let dc: usize = parse_num(get("dc")?, hline)?;
    let t: usize = parse_num(get("T")?, hline)?;
    let seed: u64 = parse_num(get("seed")?, hline)?;

    let field = Field::new(m).map_err(|e| perr(hline, e.to_string()))?;
    if field.poly() != poly {
        return Err(perr(hline, format!("polynomial 0x{poly:x} is not the fixed one for m={m}")));
    }
    if t == 0 || dc == 0 || checks * dc != n * dv {
        return Err(perr(hline, "inconsistent code dimensions"));
    }

    let symbol = |tok: &str, line: usize| -> Result<Symbol> {
        let v = parse_hex(tok, line)?;
        if v as usize >= field.size() {
            return Err(perr(line, format!("symbol {tok} outside GF(2^{m})")));
        }
        Ok(Symbol(v as u16))
    };

    let mut edges = Vec::with_capacity(n * dv);
    let mut coeffs = vec![Symbol::ZERO; (t - 1) * n];
    let mut coeff_seen = vec![false; (t - 1) * n];
    let mut punctured = Vec::new();
    for (ln, l) in lines {
        let toks: Vec<&str> = l.split_whitespace().collect();
        match toks.as_slice() {
            ["e", c, v, h] => edges.push(Edge {
                check: parse_num(c, ln)?,
                var: parse_num(v, ln)?,
                label: symbol(h, ln)?,
            }),
            ["r", tt, v, r] => {
                let (tt, v): (usize, usize) = (parse_num(tt, ln)?, parse_num(v, ln)?);
                if tt == 0 || tt >= t || v >= n {
                    return Err(perr(ln, "repetition index out of range"));
                }
                let idx = (tt - 1) * n + v;
                if coeff_seen[idx] {
                    return Err(perr(ln, "duplicate repetition coefficient"));
                }
                coeff_seen[idx] = true;
                coeffs[idx] = symbol(r, ln)?;
            }
            ["p", v] => punctured.push(parse_num(v, ln)?),
            _ => return Err(perr(ln, format!("unrecognized record '{l}'"))),
        }
    }
    if coeff_seen.iter().any(|s| !s) {
        return Err(perr(trailer_line, "missing repetition coefficients"));
    }
    let mother = MotherCode::from_edges(field, n, dv, dc, seed, edges)?;
    if mother.checks() != checks {
        return Err(perr(hline, "check count disagrees with edge list"));
    }
    RepCode::from_parts(mother, t, coeffs, PuncturePattern::new(punctured))
}
