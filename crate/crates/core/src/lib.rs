//! Construction and verification of periodic quasi-complementary sequence
//! sets (QCSSs).
//!
//! Sequences and complementary matrices are stored as integer phase
//! exponents modulo a root-of-unity order `L`; entry `e` stands for
//! `exp(2πi·e/L)`. The crate provides:
//!
//! - [`field`]: GF(p^n) arithmetic with trace, additive and multiplicative
//!   characters and Gauss sums.
//! - [`generators`]: the character-based sequence family and the two direct
//!   root-of-unity QCSS families (plus the row-deleted variant).
//! - [`interleave`]: the column-interleaving rewrite of a period `K·N`
//!   sequence into a `K×N` matrix.
//! - [`correlation`]: periodic correlation functions, maximum correlation
//!   magnitude sweeps with a naive and an FFT engine.
//! - [`analysis`]: bound ratios, asymptotic trend tables and
//!   declaration audits.
//! - [`io`]: the `QSEQ1` / `QMAT1` text formats and the golden corpus.

pub mod analysis;
pub mod cli;
pub mod correlation;
mod error;
pub mod field;
pub mod generators;
pub mod interleave;
pub mod io;
pub mod model;

pub use error::{Error, Result};
pub use model::{
    qcss_lower_bound, welch_bound, ComplementaryMatrix, Metadata, PhaseSequence, QcssFamily,
    SequenceFamily,
};
