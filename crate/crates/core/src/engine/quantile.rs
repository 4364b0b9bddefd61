//! Equal-weight quantile compression.

use serde::{Deserialize, Serialize};

use crate::error::{IndexError, Result};
use crate::sample::{validate, Measure, Sample};
use crate::sum::CompensatedSum;

/// `q` contiguous equal-weight bins of a sample, each represented by the
/// weighted mean of its members.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantileSummary {
    pub q: usize,
    pub representatives: Vec<f64>,
    pub weights: Vec<f64>,
    pub source_population: f64,
}

impl QuantileSummary {
    /// The summary as a weighted sample.
    pub fn to_sample(&self) -> Sample {
        Sample::weighted(self.representatives.clone(), self.weights.clone())
    }
}

#[derive(Default)]
struct Bin {
    weight: CompensatedSum,
    mass: CompensatedSum,
    range: Option<(f64, f64)>,
}

impl Bin {
    fn add(&mut self, y: f64, w: f64) {
        self.weight.add(w);
        self.mass.add(w * y);
        self.range = Some(self.range.map_or((y, y), |(lo, _)| (lo, y)));
    }

    /// Weight and representative. The mean is clamped to the members' range
    /// so a bin holding one value reproduces it exactly.
    fn close(&mut self) -> (f64, f64) {
        let bin = std::mem::take(self);
        let w = bin.weight.total();
        let (lo, hi) = bin.range.unwrap_or((0.0, 0.0));
        let rep = if w > 0.0 { (bin.mass.total() / w).clamp(lo, hi) } else { lo };
        (w, rep)
    }
}

/// Sort positions by `(value, position)`.
pub(crate) fn sorted_order(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    order
}

/// Compress `sample` into `q` bins of (near-)equal weight.
///
/// Observations are visited in `(value, position)` order and the cumulative
/// weight is cut at `k·W/q`. An observation whose weight straddles a cut is
/// split between the two bins, so every bin holds exactly `W/q` up to
/// rounding and the weighted mean is preserved.
pub fn compress(sample: &Sample, q: usize) -> Result<QuantileSummary> {
    validate(sample, Measure::AngularMean, false).into_result()?;
    let n = sample.len();
    if q == 0 || q > n {
        return Err(IndexError::Domain(format!(
            "quantile count must be between 1 and {n}, got {q}"
        )));
    }

    let ys = sample.values();
    let population = sample.population();
    let cut = |k: usize| population * (k + 1) as f64 / q as f64;

    let mut representatives = Vec::with_capacity(q);
    let mut weights = Vec::with_capacity(q);
    let mut bin = Bin::default();
    let mut position = 0.0;

    for i in sorted_order(ys) {
        let y = ys[i];
        let end = position + sample.weight(i);
        while representatives.len() + 1 < q && end > cut(representatives.len()) {
            let boundary = cut(representatives.len());
            bin.add(y, (boundary - position).max(0.0));
            let (w, rep) = bin.close();
            weights.push(w);
            representatives.push(rep);
            position = boundary;
        }
        bin.add(y, end - position);
        position = end;
    }
    let (w, rep) = bin.close();
    weights.push(w);
    representatives.push(rep);

    debug_assert_eq!(representatives.len(), q);
    Ok(QuantileSummary {
        q,
        representatives,
        weights,
        source_population: population,
    })
}
