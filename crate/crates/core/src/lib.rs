//! Non-binary LDPC codes over GF(2^m) concatenated with multiplicative
//! repetition codes.
//!
//! The crate covers the whole pipeline for a rate-compatible family of
//! low-rate codes:
//!
//! - [`gf`]: GF(2^m) arithmetic (1 ≤ m ≤ 10) and the m-bit symbol
//!   representation used on binary-input channels.
//! - [`code`]: random (d_v, d_c)-regular mother codes, the multiplicative
//!   repetition extension `C_T`, the systematic encoder, puncturing and the
//!   line-oriented code file format.
//! - [`channel`]: BEC and BIAWGN channels and per-symbol posteriors.
//! - [`decoder`]: belief propagation that iterates only on the mother-code
//!   Tanner graph; repetition copies are folded into the initial messages.
//! - [`density`]: dimension-distribution density evolution on the BEC and
//!   threshold search.
//! - [`sim`]: reproducible Monte Carlo frame-error-rate campaigns.
//! - [`cli`]: the `nbmr` command-line front end.
//!
//! See the `examples/` directory of this crate for one runnable program per
//! capability.

pub mod channel;
pub mod cli;
pub mod code;
pub mod codefile;
pub mod decoder;
pub mod density;
mod error;
pub mod gf;
pub mod sim;
pub mod transform;

pub use channel::{BitObservation, Channel, ProbVec};
pub use code::{CoeffDomain, MotherCode, PuncturePattern, Rate, RepCode};
pub use decoder::{decode, Decision, DecodeOutcome, DecodeResult, Decoder, DecoderOptions, DecoderState};
pub use density::{Density, OperatorTables};
pub use error::{Error, Result};
pub use gf::{Field, Symbol};
pub use sim::{SimConfig, SimRecord};
