//! Pairwise inequality indices.
//!
//! The V index scales each pair's contribution to the Gini coefficient,
//! `|y_i − y_j| / (n²·μ)`, by the angular difference of the two values,
//! `(2/π)·|atan2(y_i, y_j) − atan2(y_j, y_i)|`. Gaps between two large
//! values count for little; gaps involving small values count fully. The
//! index lies in `[0, (n−1)/n]` for nonnegative data and never exceeds the
//! Gini coefficient of the same data.
//!
//! * [`measures`]: reference definitions of the Gini, V and mean angular
//!   difference, with validation in [`sample`].
//! * [`decompose`]: within/between-group split of V.
//! * [`engine`]: fast exact evaluation (deterministic, multi-threaded) and
//!   quantile-compressed approximation.
//! * [`io`] and [`cli`]: CSV loading and the `vega` command line.
//! * [`harness`]: generators, transfers and a brute-force oracle used to
//!   check the normative properties of the index.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod decompose;
pub mod engine;
pub mod error;
pub mod harness;
pub mod io;
pub mod measures;
pub mod num17;
pub mod report;
pub mod sample;
pub mod sum;

pub use decompose::{decompose, DecompositionReport, GroupTerm, GroupedSample};
pub use engine::{compress, evaluate, ComputePlan, Mode, QuantileSummary};
pub use error::{IndexError, Result};
pub use measures::{angular_difference, compute, gini, mean_angular_difference, pair_contribution, vega};
pub use sample::{validate, IndexReport, Measure, Sample, ValidationVerdict, Warning};
