//! Exact definitions of the pairwise quantities and the three indices.
//!
//! These are the reference implementations. They walk every unordered pair
//! with the two-`atan2` angle and compensated summation, so they cost
//! O(n²) transcendental calls; [`crate::engine`] provides faster routes
//! that are tested against these.

use std::f64::consts::FRAC_2_PI;

use crate::error::{IndexError, Result};
use crate::sample::{validate, IndexReport, Measure, Sample, Warning};
use crate::sum::CompensatedSum;

/// Angular difference `(2/π)·|atan2(a, b) − atan2(b, a)|`.
///
/// Symmetric in its arguments, and depends only on the ratio `a/b`. For
/// nonnegative inputs the result lies in `[0, 1]`; when exactly one argument
/// is negative it can reach up to 2 and is deliberately not clamped.
/// `(0, 0)` is defined as 0 regardless of the platform's `atan2(0, 0)`.
pub fn angular_difference(a: f64, b: f64) -> Result<f64> {
    if !a.is_finite() || !b.is_finite() {
        return Err(IndexError::Domain(format!(
            "angular difference needs finite arguments, got ({a}, {b})"
        )));
    }
    Ok(angle(a, b))
}

/// Unchecked angular difference for validated input.
#[inline]
pub(crate) fn angle(a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    FRAC_2_PI * (a.atan2(b) - b.atan2(a)).abs()
}

/// One pair's contribution to the Gini, `|y_i − y_j| / (W²·μ)`.
pub fn pair_contribution(y_i: f64, y_j: f64, population: f64, mean: f64) -> Result<f64> {
    if !(population > 0.0) {
        return Err(IndexError::Domain(format!(
            "population must be positive, got {population}"
        )));
    }
    if !(mean > 0.0) {
        return Err(IndexError::NonPositiveMean(mean));
    }
    Ok((y_i - y_j).abs() / (population * population * mean))
}

/// Gini coefficient as the sum of pair contributions.
pub fn gini(sample: &Sample) -> Result<IndexReport> {
    let warnings = validate(sample, Measure::Gini, false).into_result()?;
    let numerator = pair_sum(sample, |yi, yj| (yi - yj).abs());
    Ok(report(sample, Measure::Gini, numerator / normaliser(sample), warnings))
}

/// The V index: every pair contribution scaled by its angular difference.
pub fn vega(sample: &Sample) -> Result<IndexReport> {
    let warnings = validate(sample, Measure::Vega, false).into_result()?;
    let numerator = pair_sum(sample, |yi, yj| (yi - yj).abs() * angle(yi, yj));
    Ok(report(sample, Measure::Vega, numerator / normaliser(sample), warnings))
}

/// Weighted mean of the angular difference over all pairs of distinct
/// observations, weight `w_i·w_j`, normalised by `(W² − Σw²)/2`.
///
/// No mean appears in the formula, so samples with μ ≤ 0 are accepted.
pub fn mean_angular_difference(sample: &Sample) -> Result<IndexReport> {
    let mut warnings = validate(sample, Measure::AngularMean, false).into_result()?;
    let numerator = pair_sum(sample, angle);
    let (value, degenerate) = angular_mean_ratio(sample, numerator);
    if degenerate {
        warnings.push(Warning::DegenerateSample);
    }
    Ok(report(sample, Measure::AngularMean, value, warnings))
}

/// Dispatch on `measure`.
pub fn compute(sample: &Sample, measure: Measure) -> Result<IndexReport> {
    match measure {
        Measure::Gini => gini(sample),
        Measure::Vega => vega(sample),
        Measure::AngularMean => mean_angular_difference(sample),
    }
}

/// Σ over unordered pairs of `w_i·w_j·f(y_i, y_j)`. Equal values are skipped.
fn pair_sum(sample: &Sample, f: impl Fn(f64, f64) -> f64) -> f64 {
    let ys = sample.values();
    let mut acc = CompensatedSum::new();
    for j in 1..ys.len() {
        let wj = sample.weight(j);
        let mut row = CompensatedSum::new();
        for i in 0..j {
            if ys[i] != ys[j] {
                row.add(sample.weight(i) * f(ys[i], ys[j]));
            }
        }
        acc.add(wj * row.total());
    }
    acc.total()
}

/// `W²·μ`, the common denominator of Gini and V.
pub(crate) fn normaliser(sample: &Sample) -> f64 {
    let w = sample.population();
    w * w * sample.mean()
}

/// Turn a pair-weighted angle sum into the angular mean. Returns
/// `(value, degenerate)`.
pub(crate) fn angular_mean_ratio(sample: &Sample, numerator: f64) -> (f64, bool) {
    let w = sample.population();
    let self_weight: CompensatedSum = (0..sample.len()).map(|i| sample.weight(i).powi(2)).collect();
    let pairs = 0.5 * (w * w - self_weight.total());
    // Relative cut-off: W² and Σw² cancel exactly for a single observation.
    if pairs <= 1e-12 * w * w {
        (0.0, true)
    } else {
        (numerator / pairs, false)
    }
}

pub(crate) fn report(sample: &Sample, measure: Measure, value: f64, warnings: Vec<Warning>) -> IndexReport {
    IndexReport {
        measure,
        value,
        population: sample.population(),
        mean: sample.mean(),
        nonpositive_share: sample.nonpositive_share(),
        warnings,
    }
}
