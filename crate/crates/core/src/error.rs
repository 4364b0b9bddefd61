use thiserror::Error;

/// Errors raised by index computation, decomposition and the engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum IndexError {
    #[error("sample is empty")]
    Empty,
    #[error("value at position {0} is not finite")]
    NonFiniteValue(usize),
    #[error("weight at position {0} is not finite")]
    NonFiniteWeight(usize),
    #[error("weight at position {0} is negative")]
    NegativeWeight(usize),
    #[error("{weights} weights supplied for {values} values")]
    WeightLengthMismatch { values: usize, weights: usize },
    #[error("total weight must be positive")]
    ZeroPopulation,
    #[error("mean is {0}; gini and vega require a positive mean")]
    NonPositiveMean(f64),
    #[error("non-positive values hold {share} of the population (limit is below 0.5)")]
    NonpositiveMajority { share: f64 },
    #[error("{0}")]
    Domain(String),
}

impl IndexError {
    /// Stable machine-readable code, used in reports and by the C API.
    pub fn code(&self) -> &'static str {
        match self {
            IndexError::Empty => "EMPTY_SAMPLE",
            IndexError::NonFiniteValue(_) => "NON_FINITE_VALUE",
            IndexError::NonFiniteWeight(_) => "NON_FINITE_WEIGHT",
            IndexError::NegativeWeight(_) => "NEGATIVE_WEIGHT",
            IndexError::WeightLengthMismatch { .. } => "LENGTH_MISMATCH",
            IndexError::ZeroPopulation => "ZERO_POPULATION",
            IndexError::NonPositiveMean(_) => "NONPOSITIVE_MEAN",
            IndexError::NonpositiveMajority { .. } => "NONPOSITIVE_MAJORITY",
            IndexError::Domain(_) => "DOMAIN",
        }
    }
}

pub type Result<T, E = IndexError> = std::result::Result<T, E>;
