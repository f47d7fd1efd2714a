//! Exact q-binomial coefficients, Zeilberger's KOH decomposition, and
//! unimodality checks for differences `binom(b+c, b)_q - binom(a+d, d)_q`
//! with `a` minimal and `ad = bc`.
//!
//! - [`qpoly`]: integer polynomials, shape predicates, first differences
//! - [`qbinom`]: Gaussian polynomials and strict-unimodality classification
//! - [`kohdec`]: partitions, KOH terms, and the `lambda^{i,j}` / `mu^i` families
//! - [`bergeron`]: quadruple enumeration and the counterexample sweep
//! - [`proofcheck`]: per-step checks of the `a = 2` and `a = 3` arguments
//! - [`cli`]: the `kohlab` command-line interface

pub mod bergeron;
pub mod cli;
pub mod kohdec;
pub mod proofcheck;
pub mod qbinom;
pub mod qpoly;

pub use bergeron::{check, difference, enumerate_quadruples, sweep, Quadruple};
pub use kohdec::{enumerate_partitions, koh_sum, koh_term, KohTerm, Partition};
pub use proofcheck::{StepId, StepVerdict};
pub use qbinom::{classify_strict, even_strict_increase, gauss_box, qbin};
pub use qpoly::{dominates, truncated_first_difference, unimodality_report, CheckReport, QPoly};
