use serde::{Deserialize, Serialize};

use crate::error::{IndexError, Result};
use crate::sample::Sample;

/// Move `amount` from observation `from` to observation `to`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Transfer {
    pub from: usize,
    pub to: usize,
    pub amount: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransferOutcome {
    pub sample: Sample,
    /// No strict ordering between two observations was reversed. Donor and
    /// recipient may end up equal.
    pub rank_preserved: bool,
}

/// Apply a progressive transfer (richer to poorer) to a unit-weight sample.
pub fn apply_transfer(sample: &Sample, t: &Transfer) -> Result<TransferOutcome> {
    let n = sample.len();
    if t.from >= n || t.to >= n || t.from == t.to {
        return Err(IndexError::Domain(format!(
            "transfer needs two distinct positions below {n}, got {} -> {}",
            t.from, t.to
        )));
    }
    if !sample.is_unit_weighted() {
        return Err(IndexError::Domain("transfers are defined on unit-weight samples".into()));
    }
    if !(t.amount > 0.0) || !t.amount.is_finite() {
        return Err(IndexError::Domain(format!("transfer amount must be positive, got {}", t.amount)));
    }
    let ys = sample.values();
    if ys[t.from] <= ys[t.to] {
        return Err(IndexError::Domain(format!(
            "transfer from {} to {} is not progressive",
            ys[t.from], ys[t.to]
        )));
    }

    let mut after = ys.to_vec();
    after[t.from] -= t.amount;
    after[t.to] += t.amount;
    let rank_preserved = preserves_order(ys, &after, t.from, t.to);
    Ok(TransferOutcome {
        sample: Sample::new(after),
        rank_preserved,
    })
}

/// Only the two moved entries can change order, so compare each of them
/// against every other observation and against each other.
fn preserves_order(before: &[f64], after: &[f64], a: usize, b: usize) -> bool {
    let kept = |i: usize, k: usize| {
        let (x, y) = (before[i], before[k]);
        let (u, v) = (after[i], after[k]);
        !((x < y && u > v) || (x > y && u < v))
    };
    (0..before.len()).all(|k| (k == a || kept(a, k)) && (k == b || kept(b, k)))
}
