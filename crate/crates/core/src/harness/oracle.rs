use std::f64::consts::PI;

use crate::error::{IndexError, Result};
use crate::sample::{validate, Measure, Sample};

pub const ORACLE_MAX_N: usize = 5000;

/// Most literal evaluation: a double loop over ordered pairs halved at the
/// end, naive summation, and the two-`atan2` angle written out inline. It
/// shares no code with the library paths it is used to check.
#[allow(clippy::needless_range_loop)]
pub fn oracle(sample: &Sample, measure: Measure) -> Result<f64> {
    let n = sample.len();
    if n > ORACLE_MAX_N {
        return Err(IndexError::Domain(format!(
            "oracle is limited to {ORACLE_MAX_N} observations, got {n}"
        )));
    }
    validate(sample, measure, false).into_result()?;
    let ys = sample.values();
    let w = |i: usize| sample.weights().map_or(1.0, |ws| ws[i]);

    let mut population = 0.0;
    let mut mass = 0.0;
    let mut self_weight = 0.0;
    for i in 0..n {
        population += w(i);
        mass += w(i) * ys[i];
        self_weight += w(i) * w(i);
    }
    let mean = mass / population;

    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let (a, b) = (ys[i], ys[j]);
            let angle = if a == 0.0 && b == 0.0 {
                0.0
            } else {
                2.0 / PI * (a.atan2(b) - b.atan2(a)).abs()
            };
            total += w(i)
                * w(j)
                * match measure {
                    Measure::Gini => (a - b).abs(),
                    Measure::Vega => (a - b).abs() * angle,
                    Measure::AngularMean => angle,
                };
        }
    }
    let pair_total = total / 2.0;
    Ok(match measure {
        Measure::Gini | Measure::Vega => pair_total / (population * population * mean),
        Measure::AngularMean => {
            let pairs = (population * population - self_weight) / 2.0;
            if pairs <= 1e-12 * population * population {
                0.0
            } else {
                pair_total / pairs
            }
        }
    })
}
