//! Observations, report types and input validation.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{IndexError, Result};
use crate::sum::CompensatedSum;

/// A vector of observations with optional nonnegative frequency weights.
///
/// Construction does not validate; [`validate`] reports every problem at once
/// and the measure functions refuse invalid input.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    values: Vec<f64>,
    weights: Option<Vec<f64>>,
}

impl Sample {
    /// Unit-weight sample.
    pub fn new(values: Vec<f64>) -> Self {
        Self {
            values,
            weights: None,
        }
    }

    pub fn weighted(values: Vec<f64>, weights: Vec<f64>) -> Self {
        Self {
            values,
            weights: Some(weights),
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Weight of observation `i`; 1 for unweighted samples.
    #[inline]
    pub fn weight(&self, i: usize) -> f64 {
        self.weights.as_ref().map_or(1.0, |w| w[i])
    }

    pub fn is_unit_weighted(&self) -> bool {
        self.weights
            .as_ref()
            .map_or(true, |w| w.iter().all(|&x| x == 1.0))
    }

    /// Total weight W (the observation count when unweighted).
    pub fn population(&self) -> f64 {
        match &self.weights {
            None => self.values.len() as f64,
            Some(w) => w.iter().copied().collect::<CompensatedSum>().total(),
        }
    }

    /// Weighted mean. NaN for an empty or zero-weight sample.
    pub fn mean(&self) -> f64 {
        let total: CompensatedSum = (0..self.len())
            .map(|i| self.weight(i) * self.values[i])
            .collect();
        total.total() / self.population()
    }

    /// Weighted share of observations with value ≤ 0.
    pub fn nonpositive_share(&self) -> f64 {
        let nonpositive: CompensatedSum = (0..self.len())
            .filter(|&i| self.values[i] <= 0.0)
            .map(|i| self.weight(i))
            .collect();
        let population = self.population();
        if population > 0.0 {
            nonpositive.total() / population
        } else {
            0.0
        }
    }

    pub fn has_negative(&self) -> bool {
        self.values.iter().any(|&y| y < 0.0)
    }

    /// Sample restricted to the given positions, keeping weights.
    pub fn subset(&self, indices: &[usize]) -> Sample {
        let values = indices.iter().map(|&i| self.values[i]).collect();
        match &self.weights {
            None => Sample::new(values),
            Some(w) => Sample::weighted(values, indices.iter().map(|&i| w[i]).collect()),
        }
    }

    /// Multiply every value by `factor`.
    pub fn scaled(&self, factor: f64) -> Sample {
        Sample {
            values: self.values.iter().map(|y| y * factor).collect(),
            weights: self.weights.clone(),
        }
    }

    /// Concatenate `copies` copies of the sample.
    pub fn replicated(&self, copies: usize) -> Sample {
        let values = self.values.repeat(copies);
        Sample {
            values,
            weights: self.weights.as_ref().map(|w| w.repeat(copies)),
        }
    }

    pub fn into_parts(self) -> (Vec<f64>, Option<Vec<f64>>) {
        (self.values, self.weights)
    }
}

impl From<Vec<f64>> for Sample {
    fn from(values: Vec<f64>) -> Self {
        Sample::new(values)
    }
}

impl From<&[f64]> for Sample {
    fn from(values: &[f64]) -> Self {
        Sample::new(values.to_vec())
    }
}

/// Which index to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Gini,
    Vega,
    AngularMean,
}

impl Measure {
    pub const ALL: [Measure; 3] = [Measure::Gini, Measure::Vega, Measure::AngularMean];

    pub fn name(self) -> &'static str {
        match self {
            Measure::Gini => "gini",
            Measure::Vega => "vega",
            Measure::AngularMean => "angular_mean",
        }
    }

    /// Gini and V divide by the mean; the angular mean does not.
    pub fn requires_positive_mean(self) -> bool {
        !matches!(self, Measure::AngularMean)
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Diagnostics attached to a verdict or report. They never block a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Warning {
    /// Zero and negative values hold at least half of the total weight; the
    /// transfer principle is no longer guaranteed.
    NonpositiveMajority,
    /// A negative value is present, so some angular differences may exceed 1.
    AngleAboveOne,
    /// No pair of distinct observations exists; the angular mean is reported as 0.
    DegenerateSample,
}

impl Warning {
    pub fn code(self) -> &'static str {
        match self {
            Warning::NonpositiveMajority => "NONPOSITIVE_MAJORITY",
            Warning::AngleAboveOne => "ANGLE_ABOVE_ONE",
            Warning::DegenerateSample => "DEGENERATE_SAMPLE",
        }
    }
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// A computed index with the diagnostics needed to interpret it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexReport {
    pub measure: Measure,
    #[serde(serialize_with = "crate::num17::serialize")]
    pub value: f64,
    /// Total weight W.
    #[serde(serialize_with = "crate::num17::serialize")]
    pub population: f64,
    #[serde(serialize_with = "crate::num17::serialize")]
    pub mean: f64,
    #[serde(serialize_with = "crate::num17::serialize")]
    pub nonpositive_share: f64,
    pub warnings: Vec<Warning>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationVerdict {
    pub ok: bool,
    pub errors: Vec<IndexError>,
    pub warnings: Vec<Warning>,
}

impl ValidationVerdict {
    /// First error, or the warnings on success.
    pub fn into_result(self) -> Result<Vec<Warning>> {
        match self.errors.into_iter().next() {
            Some(err) => Err(err),
            None => Ok(self.warnings),
        }
    }
}

/// Check a sample for use with `measure`.
///
/// Structural problems (empty input, length mismatch) stop the check early;
/// otherwise every offending position is reported. In `strict` mode a
/// nonpositive majority is an error instead of a warning.
pub fn validate(sample: &Sample, measure: Measure, strict: bool) -> ValidationVerdict {
    let mut verdict = ValidationVerdict::default();
    let errors = &mut verdict.errors;

    if sample.is_empty() {
        errors.push(IndexError::Empty);
    }
    if let Some(w) = sample.weights() {
        if w.len() != sample.len() {
            errors.push(IndexError::WeightLengthMismatch {
                values: sample.len(),
                weights: w.len(),
            });
        }
    }
    if !errors.is_empty() {
        return verdict;
    }

    for (i, y) in sample.values().iter().enumerate() {
        if !y.is_finite() {
            errors.push(IndexError::NonFiniteValue(i));
        }
    }
    if let Some(w) = sample.weights() {
        for (i, &x) in w.iter().enumerate() {
            if !x.is_finite() {
                errors.push(IndexError::NonFiniteWeight(i));
            } else if x < 0.0 {
                errors.push(IndexError::NegativeWeight(i));
            }
        }
    }
    if !errors.is_empty() {
        return verdict;
    }

    if sample.population() <= 0.0 {
        errors.push(IndexError::ZeroPopulation);
        return verdict;
    }

    if measure.requires_positive_mean() {
        let mean = sample.mean();
        if mean <= 0.0 {
            errors.push(IndexError::NonPositiveMean(mean));
        }
    }

    let share = sample.nonpositive_share();
    if share >= 0.5 {
        if strict {
            errors.push(IndexError::NonpositiveMajority { share });
        } else {
            verdict.warnings.push(Warning::NonpositiveMajority);
        }
    }
    if sample.has_negative() {
        verdict.warnings.push(Warning::AngleAboveOne);
    }

    verdict.ok = verdict.errors.is_empty();
    verdict
}
