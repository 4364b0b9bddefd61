//! Scalable evaluation of the pair sums.
//!
//! Exact mode sorts the sample once, computes one partial sum per row `j`
//! (all pairs `i < j`), and folds the rows in index order with compensated
//! summation. Worker threads only decide *which* rows they compute, so the
//! result is bit-identical for every thread count and block size. Quantile
//! mode evaluates the same code on a [`QuantileSummary`].

mod kernel;
mod quantile;

use std::sync::Mutex;

use serde::{Deserialize, Serialize};

pub use kernel::fast_angle;
pub use quantile::{compress, QuantileSummary};

use crate::error::{IndexError, Result};
use crate::measures::{angle, angular_mean_ratio, normaliser, report};
use crate::sample::{validate, IndexReport, Measure, Sample, Warning};
use crate::sum::CompensatedSum;
use kernel::{Backend, PairFactor};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exact,
    Quantile(usize),
}

/// How to evaluate a measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComputePlan {
    pub mode: Mode,
    pub threads: usize,
    /// Rows handed to a worker at a time.
    pub chunk: usize,
}

impl Default for ComputePlan {
    fn default() -> Self {
        ComputePlan {
            mode: Mode::Exact,
            threads: 1,
            chunk: 256,
        }
    }
}

impl ComputePlan {
    pub fn exact() -> Self {
        Self::default()
    }

    pub fn quantile(q: usize) -> Self {
        ComputePlan {
            mode: Mode::Quantile(q),
            ..Self::default()
        }
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }

    pub fn with_chunk(mut self, chunk: usize) -> Self {
        self.chunk = chunk;
        self
    }

    fn check(&self) -> Result<()> {
        if self.threads == 0 {
            return Err(IndexError::Domain("thread count must be at least 1".into()));
        }
        if self.chunk == 0 {
            return Err(IndexError::Domain("chunk size must be at least 1".into()));
        }
        Ok(())
    }
}

/// Evaluate `measure` on `sample` according to `plan`.
///
/// The report's population, mean and diagnostics always describe the input
/// sample, also in quantile mode.
pub fn evaluate(sample: &Sample, measure: Measure, plan: &ComputePlan) -> Result<IndexReport> {
    plan.check()?;
    let mut warnings = validate(sample, measure, false).into_result()?;
    let value = match plan.mode {
        Mode::Exact => exact_value(sample, measure, plan, &mut warnings),
        Mode::Quantile(q) => {
            let summary = compress(sample, q)?;
            exact_value(&summary.to_sample(), measure, plan, &mut warnings)
        }
    };
    Ok(report(sample, measure, value, warnings))
}

fn exact_value(sample: &Sample, measure: Measure, plan: &ComputePlan, warnings: &mut Vec<Warning>) -> f64 {
    match measure {
        Measure::Gini => gini_numerator(sample) / normaliser(sample),
        Measure::Vega => angular_pair_sum(sample, PairFactor::WeightedGap, plan) / normaliser(sample),
        Measure::AngularMean => {
            let numerator = angular_pair_sum(sample, PairFactor::Weight, plan);
            let (value, degenerate) = angular_mean_ratio(sample, numerator);
            if degenerate && !warnings.contains(&Warning::DegenerateSample) {
                warnings.push(Warning::DegenerateSample);
            }
            value
        }
    }
}

/// Values and weights in `(value, position)` order.
fn sorted_columns(sample: &Sample) -> (Vec<f64>, Vec<f64>) {
    let order = quantile::sorted_order(sample.values());
    let ys = order.iter().map(|&i| sample.values()[i]).collect();
    let ws = order.iter().map(|&i| sample.weight(i)).collect();
    (ys, ws)
}

/// Σ_{i<j} w_i·w_j·|y_i − y_j| in O(n log n) from running prefix sums.
fn gini_numerator(sample: &Sample) -> f64 {
    let (ys, ws) = sorted_columns(sample);
    let mut weight_below = CompensatedSum::new();
    let mut mass_below = CompensatedSum::new();
    let mut acc = CompensatedSum::new();
    for (&y, &w) in ys.iter().zip(&ws) {
        acc.add(w * (y * weight_below.total() - mass_below.total()));
        weight_below.add(w);
        mass_below.add(w * y);
    }
    acc.total()
}

/// Σ_{i<j} factor·∠ over the sorted sample, one row per `j`.
fn angular_pair_sum(sample: &Sample, kind: PairFactor, plan: &ComputePlan) -> f64 {
    let (ys, ws) = sorted_columns(sample);
    let nonnegative = ys.first().map_or(true, |&y| y >= 0.0);
    let backend = Backend::detect();

    let row = |j: usize| -> f64 {
        let yj = ys[j];
        let partial = if nonnegative {
            if yj == 0.0 {
                return 0.0;
            }
            backend.row(kind, &ys[..j], &ws[..j], yj)
        } else {
            general_row(kind, &ys[..j], &ws[..j], yj)
        };
        ws[j] * partial
    };

    let mut rows = vec![0.0; ys.len()];
    fill_rows(&mut rows, plan, &row);
    rows.iter().copied().collect::<CompensatedSum>().total()
}

/// Row sum for samples that contain negative values, using the two-`atan2`
/// angle directly.
fn general_row(kind: PairFactor, ys: &[f64], ws: &[f64], yj: f64) -> f64 {
    let mut acc = CompensatedSum::new();
    for (&y, &w) in ys.iter().zip(ws) {
        if y != yj {
            let f = match kind {
                PairFactor::WeightedGap => w * (yj - y),
                PairFactor::Weight => w,
            };
            acc.add(f * angle(y, yj));
        }
    }
    acc.total()
}

/// Evaluate `row(j)` into `rows[j]` for every `j`, spreading blocks of
/// `plan.chunk` rows over `plan.threads` workers. Later rows are longer, so
/// blocks are dealt from the end.
fn fill_rows(rows: &mut [f64], plan: &ComputePlan, row: &(dyn Fn(usize) -> f64 + Sync)) {
    let chunk = plan.chunk;
    let workers = plan.threads.min(rows.len().div_ceil(chunk)).max(1);
    if workers == 1 {
        for (j, out) in rows.iter_mut().enumerate() {
            *out = row(j);
        }
        return;
    }
    let blocks = Mutex::new(rows.chunks_mut(chunk).enumerate().rev());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let next = blocks.lock().expect("row queue poisoned").next();
                let Some((b, block)) = next else { break };
                for (offset, out) in block.iter_mut().enumerate() {
                    *out = row(b * chunk + offset);
                }
            });
        }
    });
}
