//! Optimal measurements for classical families, no-go witnesses, and
//! approximate-optimality bounds.
//!
//! If every state on the grid is diagonal in one basis, measuring in that
//! basis is optimal: any estimator on any other measurement is matched
//! pointwise by [`transfer_estimator`]. Under least-squares loss on a convex
//! parameter set the converse holds, so a non-commuting pair witnesses that
//! no optimal measurement exists. Families close to a classical reference
//! inherit approximate versions of this, quantified additively (trace norm),
//! multiplicatively (max-relative entropy) and locally (excluded volume).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimation::{risk_profile, transfer_estimator, Estimator, LossFunction, LossKind, RiskProfile};
use crate::io::extended_f64;
use crate::linalg::{self, ComplexMatrix};
use crate::quantum::{
    classicality_certificate, d_max, trace_norm, Classicality, CommutatorWitness,
    ParametrisedState, Povm,
};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// The family is classical; `measurement` is optimal.
    Optimal,
    /// Two states fail to commute, so no optimal measurement exists under
    /// least-squares loss on a convex parameter set.
    NoGo,
    /// Neither conclusion applies.
    Inconclusive,
    /// An approximate-optimality bound is attached.
    ApproxBound,
}

/// Self-describing optimality report.
#[derive(Debug, Clone, Serialize)]
pub struct OptimalityCertificate {
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<CommutatorWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<ApproxBound>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measurement: Option<Povm>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_commutator: Option<f64>,
    pub tolerances: Tolerances,
}

/// Projective measurement in the common eigenbasis of a classical family.
pub fn optimal_measurement_for_classical(family: &ParametrisedState, tol: &Tolerances) -> Result<Povm> {
    Povm::projective(&classical_basis(family, tol)?)
}

fn classical_basis(family: &ParametrisedState, tol: &Tolerances) -> Result<ComplexMatrix> {
    match classicality_certificate(family, tol) {
        Classicality::Classical { basis, .. } => Ok(basis),
        Classicality::NotClassical(w) => Err(Error::NotClassicalState {
            first: w.first,
            second: w.second,
            commutator_norm: w.commutator_norm,
        }),
    }
}

/// `NoGo` with the maximal-commutator pair if that norm exceeds `tol.comm`,
/// otherwise `Inconclusive`. Only meaningful for least-squares loss.
pub fn no_go_witness(
    family: &ParametrisedState,
    loss: &LossFunction,
    tol: &Tolerances,
) -> Result<OptimalityCertificate> {
    if loss.kind() != LossKind::LeastSquares {
        return Err(Error::WrongLoss);
    }
    let witness = crate::quantum::max_commutator_pair(family);
    let max_commutator = witness.as_ref().map_or(0.0, |w| w.commutator_norm);
    let (verdict, witness) = match witness {
        Some(w) if w.commutator_norm > tol.comm => (Verdict::NoGo, Some(w)),
        _ => (Verdict::Inconclusive, None),
    };
    Ok(OptimalityCertificate {
        verdict,
        witness,
        bound: None,
        measurement: None,
        max_commutator: Some(max_commutator),
        tolerances: *tol,
    })
}

/// `Optimal` for classical families; otherwise the no-go witness for
/// least-squares loss, or `Inconclusive` for other losses.
pub fn certify(family: &ParametrisedState, loss: &LossFunction, tol: &Tolerances) -> Result<OptimalityCertificate> {
    match classicality_certificate(family, tol) {
        Classicality::Classical { basis, max_commutator } => Ok(OptimalityCertificate {
            verdict: Verdict::Optimal,
            witness: None,
            bound: None,
            measurement: Some(Povm::projective(&basis)?),
            max_commutator: Some(max_commutator),
            tolerances: *tol,
        }),
        Classicality::NotClassical(w) => {
            if loss.kind() == LossKind::LeastSquares {
                no_go_witness(family, loss, tol)
            } else {
                Ok(OptimalityCertificate {
                    verdict: Verdict::Inconclusive,
                    max_commutator: Some(w.commutator_norm),
                    witness: Some(w),
                    bound: None,
                    measurement: None,
                    tolerances: *tol,
                })
            }
        }
    }
}

/// An approximate-optimality bound and the measurement it certifies.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ApproxBound {
    /// Risk of the transferred estimator exceeds any competitor's by at most
    /// `bound = 2 * diameter * epsilon`.
    Additive {
        epsilon: f64,
        diameter: f64,
        bound: f64,
        measurement: Povm,
    },
    /// Risk of the transferred estimator is at most `(1 + eta)` times any
    /// competitor's.
    Multiplicative {
        #[serde(serialize_with = "extended_f64::serialize")]
        eta: f64,
        measurement: Povm,
    },
    /// The family is classical on the grid subset `gamma`; `delta` is the
    /// excluded cell volume.
    Local {
        gamma: Vec<usize>,
        gamma_volume: f64,
        delta: f64,
        /// No two grid points commute; `gamma` is one point of maximal volume.
        singleton_fallback: bool,
        measurement: Povm,
    },
}

impl ApproxBound {
    pub fn value(&self) -> f64 {
        match self {
            ApproxBound::Additive { bound, .. } => *bound,
            ApproxBound::Multiplicative { eta, .. } => *eta,
            ApproxBound::Local { delta, .. } => *delta,
        }
    }

    pub fn measurement(&self) -> &Povm {
        match self {
            ApproxBound::Additive { measurement, .. }
            | ApproxBound::Multiplicative { measurement, .. }
            | ApproxBound::Local { measurement, .. } => measurement,
        }
    }

    pub fn into_certificate(self, tol: &Tolerances) -> OptimalityCertificate {
        OptimalityCertificate {
            verdict: Verdict::ApproxBound,
            witness: None,
            measurement: Some(self.measurement().clone()),
            bound: Some(self),
            max_commutator: None,
            tolerances: *tol,
        }
    }
}

fn check_reference(family: &ParametrisedState, reference: &ParametrisedState, tol: &Tolerances) -> Result<ComplexMatrix> {
    if family.grid() != reference.grid() {
        return Err(Error::GridMismatch);
    }
    if family.hilbert_dim() != reference.hilbert_dim() {
        return Err(Error::DimensionMismatch {
            expected: family.hilbert_dim(),
            found: reference.hilbert_dim(),
        });
    }
    match classicality_certificate(reference, tol) {
        Classicality::Classical { basis, .. } => Ok(basis),
        Classicality::NotClassical(_) => Err(Error::NotClassicalReference),
    }
}

/// Largest loss between two grid points, in either order.
pub fn grid_diameter(family: &ParametrisedState, loss: &LossFunction) -> Result<f64> {
    let mut d: f64 = 0.0;
    for a in family.grid() {
        for b in family.grid() {
            d = d.max(loss.loss(a, b)?);
        }
    }
    Ok(d)
}

/// Additive bound `2 d epsilon` with `epsilon = max_theta ||rho - sigma||_1`.
///
/// `d` is the grid diameter unless overridden. The bound covers estimators
/// whose values lie in the parameter set (for convex losses, the convex hull
/// of the grid).
pub fn additive_bound(
    family: &ParametrisedState,
    reference: &ParametrisedState,
    loss: &LossFunction,
    diameter: Option<f64>,
    tol: &Tolerances,
) -> Result<ApproxBound> {
    let basis = check_reference(family, reference, tol)?;
    let epsilon = family
        .states()
        .iter()
        .zip(reference.states())
        .map(|(r, s)| trace_norm(&(r.matrix() - s.matrix())))
        .fold(0.0, f64::max);
    let diameter = match diameter {
        Some(d) => d,
        None => grid_diameter(family, loss)?,
    };
    Ok(ApproxBound::Additive {
        epsilon,
        diameter,
        bound: 2.0 * diameter * epsilon,
        measurement: Povm::projective(&basis)?,
    })
}

/// `eta = max_theta exp(D_max(rho||sigma) + D_max(sigma||rho)) - 1`, possibly
/// infinite.
pub fn multiplicative_bound(
    family: &ParametrisedState,
    reference: &ParametrisedState,
    tol: &Tolerances,
) -> Result<ApproxBound> {
    let basis = check_reference(family, reference, tol)?;
    let eta = family
        .states()
        .iter()
        .zip(reference.states())
        .map(|(r, s)| (d_max(r, s, tol) + d_max(s, r, tol)).exp() - 1.0)
        .fold(0.0, f64::max);
    Ok(ApproxBound::Multiplicative {
        eta,
        measurement: Povm::projective(&basis)?,
    })
}

/// Greedy search for a large grid subset on which the family is classical.
///
/// Every point seeds a cluster that absorbs, in order of decreasing cell
/// volume, each point commuting (within `tol.comm`) with all current
/// members. The heaviest cluster wins (first seed on ties). The excluded
/// volume is an upper bound on the optimum.
pub fn local_bound(family: &ParametrisedState, tol: &Tolerances) -> Result<ApproxBound> {
    let n = family.len();
    let mut commute = vec![vec![true; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let norm = linalg::operator_norm(&linalg::commutator(
                family.state(i).matrix(),
                family.state(j).matrix(),
            ));
            commute[i][j] = norm <= tol.comm;
            commute[j][i] = commute[i][j];
        }
    }
    let vols = family.cell_volumes();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| vols[b].total_cmp(&vols[a]).then(a.cmp(&b)));

    let mut best: Option<(f64, Vec<usize>)> = None;
    for seed in 0..n {
        let mut members = vec![seed];
        for &j in &order {
            if j != seed && members.iter().all(|&m| commute[m][j]) {
                members.push(j);
            }
        }
        members.sort_unstable();
        let volume: f64 = members.iter().map(|&m| vols[m]).sum();
        let better = match &best {
            None => true,
            Some((v, m)) => volume > *v || (volume == *v && members.len() > m.len()),
        };
        if better {
            best = Some((volume, members));
        }
    }
    let (mut gamma_volume, mut gamma) = best.expect("families are nonempty");
    let singleton_fallback = gamma.len() == 1 && n > 1;
    if singleton_fallback {
        let top = order[0];
        gamma = vec![top];
        gamma_volume = vols[top];
    }
    let sub = family.restrict(&gamma)?;
    let measurement = optimal_measurement_for_classical(&sub, tol)?;
    Ok(ApproxBound::Local {
        delta: (family.total_volume() - gamma_volume).max(0.0),
        gamma,
        gamma_volume,
        singleton_fallback,
        measurement,
    })
}

/// Risk profiles on `family` of a competitor `(f, estimator)` and of its
/// transfer to the optimal measurement of the classical `reference`.
#[derive(Debug, Clone, Serialize)]
pub struct TransferComparison {
    pub transferred: Estimator,
    pub transferred_profile: RiskProfile,
    pub competitor_profile: RiskProfile,
}

impl TransferComparison {
    /// `max_theta (R_transferred - R_competitor)`.
    pub fn additive_gap(&self) -> f64 {
        self.transferred_profile
            .values
            .iter()
            .zip(&self.competitor_profile.values)
            .map(|(a, b)| a - b)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `max_theta (R_transferred - (1 + eta) R_competitor)`; nonpositive when
    /// the multiplicative bound holds.
    pub fn multiplicative_excess(&self, eta: f64) -> f64 {
        self.transferred_profile
            .values
            .iter()
            .zip(&self.competitor_profile.values)
            .map(|(a, b)| a - (1.0 + eta) * b)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

pub fn compare_with_transfer(
    family: &ParametrisedState,
    reference: &ParametrisedState,
    f: &Povm,
    estimator: &Estimator,
    loss: &LossFunction,
    tol: &Tolerances,
) -> Result<TransferComparison> {
    let basis = check_reference(family, reference, tol)?;
    let transferred = transfer_estimator(&basis, f, estimator)?;
    let m = Povm::projective(&basis)?;
    Ok(TransferComparison {
        transferred_profile: risk_profile(family, &m, &transferred, loss)?,
        competitor_profile: risk_profile(family, f, estimator, loss)?,
        transferred,
    })
}

/// Empirical additive gap `max_theta (R(theta_M) - R(theta_F))` on `family`.
pub fn check_additive_risk_gap(
    family: &ParametrisedState,
    reference: &ParametrisedState,
    f: &Povm,
    estimator: &Estimator,
    loss: &LossFunction,
    tol: &Tolerances,
) -> Result<f64> {
    Ok(compare_with_transfer(family, reference, f, estimator, loss, tol)?.additive_gap())
}
