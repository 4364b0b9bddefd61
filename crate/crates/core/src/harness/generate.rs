use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, LogNormal, Pareto, Uniform};
use serde::{Deserialize, Serialize};

use crate::error::{IndexError, Result};
use crate::sample::Sample;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    LogNormal { mu: f64, sigma: f64 },
    Pareto { alpha: f64, x_min: f64 },
    Uniform { lo: f64, hi: f64 },
    PointMass { value: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    #[serde(flatten)]
    pub family: Family,
    pub n: usize,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(family: Family, n: usize, seed: u64) -> Self {
        GeneratorSpec { family, n, seed }
    }
}

fn invalid(msg: String) -> IndexError {
    IndexError::Domain(msg)
}

/// Draw `spec.n` values. The same spec always yields the same sample.
pub fn generate(spec: &GeneratorSpec) -> Result<Sample> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.n;
    let values: Vec<f64> = match spec.family {
        Family::LogNormal { mu, sigma } => {
            if !(sigma > 0.0) || !mu.is_finite() || !sigma.is_finite() {
                return Err(invalid(format!("lognormal needs finite mu and sigma > 0, got ({mu}, {sigma})")));
            }
            let d = LogNormal::new(mu, sigma).map_err(|e| invalid(e.to_string()))?;
            d.sample_iter(&mut rng).take(n).collect()
        }
        Family::Pareto { alpha, x_min } => {
            if !(alpha > 0.0) || !(x_min > 0.0) || !alpha.is_finite() || !x_min.is_finite() {
                return Err(invalid(format!("pareto needs alpha > 0 and x_min > 0, got ({alpha}, {x_min})")));
            }
            let d = Pareto::new(x_min, alpha).map_err(|e| invalid(e.to_string()))?;
            d.sample_iter(&mut rng).take(n).collect()
        }
        Family::Uniform { lo, hi } => {
            if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
                return Err(invalid(format!("uniform needs finite lo < hi, got ({lo}, {hi})")));
            }
            let d = Uniform::new_inclusive(lo, hi).map_err(|e| invalid(e.to_string()))?;
            d.sample_iter(&mut rng).take(n).collect()
        }
        Family::PointMass { value } => {
            if !value.is_finite() {
                return Err(invalid(format!("point mass needs a finite value, got {value}")));
            }
            vec![value; n]
        }
    };
    if let Some(i) = values.iter().position(|y| !y.is_finite()) {
        return Err(invalid(format!("generator produced a non-finite value at {i}")));
    }
    Ok(Sample::new(values))
}
