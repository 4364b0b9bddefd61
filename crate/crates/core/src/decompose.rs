//! Within/between split of the V index over a partition of the sample.
//!
//! Every unordered pair is either inside one group or crosses two, so
//!
//! ```text
//! V = Σ_k ω_k·V_k + B,   ω_k = W_k²·μ_k / (W²·μ)
//! ```
//!
//! where `V_k` is the index of group `k` on its own and `B` sums the
//! cross-group pair terms over the full-sample denominator `W²·μ`. The
//! weights follow from rescaling each group's denominator `W_k²·μ_k` to the
//! full one. The between term is summed directly from the cross pairs, so the
//! reported residual is a genuine check of the identity.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{IndexError, Result};
use crate::measures::{angle, normaliser, vega};
use crate::sample::{validate, Measure, Sample, Warning};
use crate::sum::CompensatedSum;

/// A sample with one group label per observation.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupedSample {
    pub sample: Sample,
    pub labels: Vec<String>,
}

impl GroupedSample {
    pub fn new(sample: Sample, labels: Vec<String>) -> Self {
        GroupedSample { sample, labels }
    }

    /// Distinct labels in order of first appearance, each with its positions.
    pub fn groups(&self) -> Vec<(&str, Vec<usize>)> {
        let mut index: HashMap<&str, usize> = HashMap::new();
        let mut groups: Vec<(&str, Vec<usize>)> = Vec::new();
        for (i, label) in self.labels.iter().enumerate() {
            let slot = *index.entry(label.as_str()).or_insert_with(|| {
                groups.push((label.as_str(), Vec::new()));
                groups.len() - 1
            });
            groups[slot].1.push(i);
        }
        groups
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupTerm {
    pub label: String,
    #[serde(serialize_with = "crate::num17::serialize")]
    pub population: f64,
    #[serde(serialize_with = "crate::num17::serialize")]
    pub mean: f64,
    /// `None` when the group mean is not positive.
    #[serde(serialize_with = "crate::num17::option::serialize")]
    pub within_index: Option<f64>,
    #[serde(serialize_with = "crate::num17::serialize")]
    pub weight: f64,
    /// `weight·within_index`, or the raw within-pair sum over `W²·μ` when the
    /// group index is undefined.
    #[serde(serialize_with = "crate::num17::serialize")]
    pub contribution: f64,
    /// Set when the group mean is not positive.
    pub undefined_index: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub groups: Vec<GroupTerm>,
    #[serde(serialize_with = "crate::num17::serialize")]
    pub between_term: f64,
    #[serde(serialize_with = "crate::num17::serialize")]
    pub total: f64,
    #[serde(serialize_with = "crate::num17::serialize")]
    pub residual: f64,
    pub warnings: Vec<Warning>,
}

impl DecompositionReport {
    pub fn within_sum(&self) -> f64 {
        self.groups.iter().map(|g| g.contribution).sum()
    }
}

/// Split V of `grouped.sample` into weighted within-group terms and a
/// between-group term.
pub fn decompose(grouped: &GroupedSample) -> Result<DecompositionReport> {
    let sample = &grouped.sample;
    if grouped.labels.len() != sample.len() {
        return Err(IndexError::Domain(format!(
            "{} group labels supplied for {} values",
            grouped.labels.len(),
            sample.len()
        )));
    }
    if let Some(i) = grouped.labels.iter().position(|l| l.is_empty()) {
        return Err(IndexError::Domain(format!("group label at position {i} is empty")));
    }
    let warnings = validate(sample, Measure::Vega, false).into_result()?;
    let groups = grouped.groups();
    if groups.is_empty() {
        return Err(IndexError::Empty);
    }

    let total = vega(sample)?.value;
    let denominator = normaliser(sample);

    let mut terms = Vec::with_capacity(groups.len());
    for (label, members) in &groups {
        let sub = sample.subset(members);
        let population = sub.population();
        let mean = sub.mean();
        let defined = population > 0.0 && mean > 0.0;
        let term = if defined {
            let within = vega(&sub)?.value;
            let weight = normaliser(&sub) / denominator;
            GroupTerm {
                label: label.to_string(),
                population,
                mean,
                within_index: Some(within),
                weight,
                contribution: weight * within,
                undefined_index: false,
            }
        } else {
            // A zero-weight group has no mean; report it as 0.
            let mean = if population > 0.0 { mean } else { 0.0 };
            GroupTerm {
                label: label.to_string(),
                population,
                mean,
                within_index: None,
                weight: population * population * mean / denominator,
                contribution: within_pair_sum(&sub) / denominator,
                undefined_index: true,
            }
        };
        terms.push(term);
    }

    let between_term = cross_pair_sum(sample, &groups) / denominator;
    let within: CompensatedSum = terms.iter().map(|t| t.contribution).collect();
    let residual = (within.total() + between_term - total).abs();

    Ok(DecompositionReport {
        groups: terms,
        between_term,
        total,
        residual,
        warnings,
    })
}

fn pair_term(yi: f64, yj: f64) -> f64 {
    if yi == yj {
        0.0
    } else {
        (yi - yj).abs() * angle(yi, yj)
    }
}

/// Σ over pairs inside `sub` of `w_i·w_j·|y_i − y_j|·∠`.
fn within_pair_sum(sub: &Sample) -> f64 {
    let ys = sub.values();
    let mut acc = CompensatedSum::new();
    for j in 1..ys.len() {
        for i in 0..j {
            acc.add(sub.weight(i) * sub.weight(j) * pair_term(ys[i], ys[j]));
        }
    }
    acc.total()
}

/// Σ over pairs in different groups of `w_i·w_j·|y_i − y_j|·∠`.
fn cross_pair_sum(sample: &Sample, groups: &[(&str, Vec<usize>)]) -> f64 {
    let ys = sample.values();
    let mut acc = CompensatedSum::new();
    for (a, (_, left)) in groups.iter().enumerate() {
        for (_, right) in &groups[a + 1..] {
            for &i in left {
                let mut row = CompensatedSum::new();
                for &j in right {
                    row.add(sample.weight(j) * pair_term(ys[i], ys[j]));
                }
                acc.add(sample.weight(i) * row.total());
            }
        }
    }
    acc.total()
}
