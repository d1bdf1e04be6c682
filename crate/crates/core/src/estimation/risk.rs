use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimation::LossFunction;
use crate::quantum::{outcome_distribution, DensityMatrix, ParametrisedState, Povm};

/// A map from outcome index to a point in parameter space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "EstimatorRepr", into = "EstimatorRepr")]
pub struct Estimator {
    values: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct EstimatorRepr {
    values: Vec<Vec<f64>>,
}

impl TryFrom<EstimatorRepr> for Estimator {
    type Error = Error;
    fn try_from(r: EstimatorRepr) -> Result<Self> {
        Estimator::new(r.values)
    }
}

impl From<Estimator> for EstimatorRepr {
    fn from(e: Estimator) -> Self {
        EstimatorRepr { values: e.values }
    }
}

impl Estimator {
    pub fn new(values: Vec<Vec<f64>>) -> Result<Self> {
        let n = values
            .first()
            .map(|v| v.len())
            .ok_or_else(|| Error::InvalidEstimator("no outcomes".into()))?;
        if n == 0 {
            return Err(Error::InvalidEstimator("zero-dimensional values".into()));
        }
        if values.iter().any(|v| v.len() != n) {
            return Err(Error::InvalidEstimator("values differ in dimension".into()));
        }
        if values.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::InvalidEstimator("non-finite value".into()));
        }
        Ok(Estimator { values })
    }

    /// One scalar estimate per outcome.
    pub fn scalar(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| vec![v]).collect())
    }

    /// The same estimate for every one of `outcomes` outcomes.
    pub fn constant(point: &[f64], outcomes: usize) -> Result<Self> {
        Self::new(vec![point.to_vec(); outcomes])
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn value(&self, outcome: usize) -> &[f64] {
        &self.values[outcome]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn param_dim(&self) -> usize {
        self.values[0].len()
    }

    /// Scalar values, for single-parameter estimators.
    pub fn scalars(&self) -> Result<Vec<f64>> {
        if self.param_dim() != 1 {
            return Err(Error::MultiParameterUnsupported {
                param_dim: self.param_dim(),
            });
        }
        Ok(self.values.iter().map(|v| v[0]).collect())
    }

    pub(crate) fn check_outcomes(&self, outcomes: usize) -> Result<()> {
        if self.len() != outcomes {
            return Err(Error::DimensionMismatch {
                expected: outcomes,
                found: self.len(),
            });
        }
        Ok(())
    }
}

/// Risk at each grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiskProfile {
    pub grid: Vec<Vec<f64>>,
    pub values: Vec<f64>,
}

impl RiskProfile {
    /// CSV with columns `theta_1..theta_N,risk`.
    pub fn to_csv(&self) -> String {
        let n = self.grid.first().map(|p| p.len()).unwrap_or(1);
        let mut out = String::new();
        let header: Vec<String> = (1..=n).map(|i| format!("theta_{i}")).collect();
        out.push_str(&header.join(","));
        out.push_str(",risk\n");
        for (p, v) in self.grid.iter().zip(&self.values) {
            for x in p {
                out.push_str(&format!("{x},"));
            }
            out.push_str(&format!("{v}\n"));
        }
        out
    }

    pub fn max_abs_diff(&self, other: &RiskProfile) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// `sum_k Tr(rho M_k) L(estimate(k), theta)` for an arbitrary state and
/// parameter value.
pub fn risk_at(
    rho: &DensityMatrix,
    povm: &Povm,
    estimator: &Estimator,
    loss: &LossFunction,
    theta: &[f64],
) -> Result<f64> {
    estimator.check_outcomes(povm.len())?;
    let probs = outcome_distribution(rho, povm)?;
    expected_loss(&probs, estimator, loss, theta)
}

pub(crate) fn expected_loss(
    probs: &[f64],
    estimator: &Estimator,
    loss: &LossFunction,
    theta: &[f64],
) -> Result<f64> {
    let mut acc = 0.0;
    for (p, est) in probs.iter().zip(estimator.values()) {
        acc += p * loss.loss(est, theta)?;
    }
    Ok(acc)
}

/// Risk at grid point `index`.
pub fn risk(
    family: &ParametrisedState,
    povm: &Povm,
    estimator: &Estimator,
    loss: &LossFunction,
    index: usize,
) -> Result<f64> {
    if index >= family.len() {
        return Err(Error::InvalidGrid(format!("grid index {index} out of range")));
    }
    risk_at(family.state(index), povm, estimator, loss, family.point(index))
}

/// Risk at every grid point.
pub fn risk_profile(
    family: &ParametrisedState,
    povm: &Povm,
    estimator: &Estimator,
    loss: &LossFunction,
) -> Result<RiskProfile> {
    estimator.check_outcomes(povm.len())?;
    let table = family.probability_table(povm)?;
    profile_from_table(family, &table, estimator, loss)
}

pub(crate) fn profile_from_table(
    family: &ParametrisedState,
    table: &[Vec<f64>],
    estimator: &Estimator,
    loss: &LossFunction,
) -> Result<RiskProfile> {
    let values = table
        .iter()
        .zip(family.grid())
        .map(|(p, theta)| expected_loss(p, estimator, loss, theta))
        .collect::<Result<Vec<_>>>()?;
    Ok(RiskProfile {
        grid: family.grid().to_vec(),
        values,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domination {
    /// At least as good everywhere and strictly better somewhere.
    Dominates,
    /// At least as good everywhere, never strictly better.
    WeaklyBetter,
    Incomparable,
}

/// Compares two risk profiles on the same grid with slack `tol` on both the
/// "at least as good" and "strictly better" sides.
pub fn dominates_pair(a: &RiskProfile, b: &RiskProfile, tol: f64) -> Result<Domination> {
    if a.grid != b.grid || a.values.len() != b.values.len() {
        return Err(Error::GridMismatch);
    }
    let pairs = a.values.iter().zip(&b.values);
    if !pairs.clone().all(|(x, y)| *x <= y + tol) {
        return Ok(Domination::Incomparable);
    }
    if pairs.into_iter().any(|(x, y)| *x < y - tol) {
        Ok(Domination::Dominates)
    } else {
        Ok(Domination::WeaklyBetter)
    }
}
