//! Exhaustive subset search for small instances.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::VectorSystem;
use crate::linalg::hermitian_eigenvalues;
use crate::{Error, Result};

/// Largest number of subsets [`brute_force_best`] will enumerate.
pub const MAX_SUBSETS: u128 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    /// Maximize `λ_min(Σ_J v v*)`.
    MaxLambdaMin,
    /// Minimize `λ_max(Σ_J v v*)`.
    MinLambdaMax,
    /// Maximize `λ_min` of the `|J| × |J|` coefficient Gram.
    MaxGramLambdaMin,
}

/// `C(m, k)`, saturating at `u128::MAX`.
pub fn binomial(m: usize, k: usize) -> u128 {
    if k > m {
        return 0;
    }
    let k = k.min(m - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((m - i) as u128) {
            Some(x) => x / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Best `k`-subset under `objective`. Ties go to the lexicographically
/// smallest subset.
pub fn brute_force_best(sys: &VectorSystem, k: usize, objective: Objective) -> Result<(Vec<usize>, f64)> {
    let m = sys.m();
    if k == 0 || k > m {
        return Err(Error::InvalidParameter(format!("k = {k} outside 1..={m}")));
    }
    let count = binomial(m, k);
    if count > MAX_SUBSETS {
        return Err(Error::TooManySubsets { count });
    }
    let mut best: Option<(Vec<usize>, f64)> = None;
    for subset in (0..m).combinations(k) {
        let value = evaluate(sys, &subset, objective)?;
        // compare in "larger is better" orientation
        let score = if objective == Objective::MinLambdaMax { -value } else { value };
        let better = match &best {
            None => true,
            Some((_, b)) => {
                let incumbent = if objective == Objective::MinLambdaMax { -*b } else { *b };
                score > incumbent + 1e-12 * incumbent.abs().max(1e-300)
            }
        };
        if better {
            best = Some((subset, value));
        }
    }
    Ok(best.expect("at least one subset"))
}

fn evaluate(sys: &VectorSystem, subset: &[usize], objective: Objective) -> Result<f64> {
    let values = match objective {
        Objective::MaxGramLambdaMin => hermitian_eigenvalues(&sys.coefficient_gram(subset))?,
        _ => hermitian_eigenvalues(&sys.frame_operator(subset, &[]))?,
    };
    Ok(match objective {
        Objective::MinLambdaMax => values[values.len() - 1],
        _ => values[0],
    })
}
