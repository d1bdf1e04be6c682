//! Bayesian risk, posterior means and the single-parameter Bayes measurement.
//!
//! For least-squares loss and a single real parameter, the optimal operator
//! `Lambda` solves `{Lambda, rho_bar} = 2 rho_bar'` where
//! `rho_bar = sum_j w_j rho_j` and `rho_bar' = sum_j w_j theta_j rho_j`.
//! Measuring in the eigenbasis of `Lambda` and reporting the eigenvalue is
//! Bayes optimal among all measurement/estimator pairs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimation::{risk_profile, Estimator, LossFunction};
use crate::io::matrix_serde;
use crate::linalg::{
    anticommutator, c, eigh, group_eigenvalues, hermitian_part, max_abs, projector,
    trace_product_re, ComplexMatrix,
};
use crate::quantum::{DensityMatrix, ParametrisedState, Povm};
use crate::tolerance::Tolerances;

const PRIOR_SUM_TOL: f64 = 1e-12;

/// Discrete prior: one weight per grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PriorRepr", into = "PriorRepr")]
pub struct Prior {
    weights: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct PriorRepr {
    weights: Vec<f64>,
}

impl TryFrom<PriorRepr> for Prior {
    type Error = Error;
    fn try_from(r: PriorRepr) -> Result<Self> {
        Prior::new(r.weights)
    }
}

impl From<Prior> for PriorRepr {
    fn from(p: Prior) -> Self {
        PriorRepr { weights: p.weights }
    }
}

impl Prior {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidPrior("no weights".into()));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidPrior("weights must be finite and nonnegative".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > PRIOR_SUM_TOL {
            return Err(Error::InvalidPrior(format!("weights sum to {total}")));
        }
        Ok(Prior { weights })
    }

    /// Normalises nonnegative weights with a positive total.
    pub fn from_unnormalised(weights: &[f64]) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total.is_finite() && total > 0.0) {
            return Err(Error::InvalidPrior(format!("weights sum to {total}")));
        }
        Prior::new(weights.iter().map(|w| w / total).collect())
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidPrior("no weights".into()));
        }
        Ok(Prior {
            weights: vec![1.0 / n as f64; n],
        })
    }

    pub fn point_mass(n: usize, index: usize) -> Result<Self> {
        if index >= n {
            return Err(Error::InvalidPrior(format!("index {index} outside {n} points")));
        }
        let mut weights = vec![0.0; n];
        weights[index] = 1.0;
        Ok(Prior { weights })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    fn check(&self, family: &ParametrisedState) -> Result<()> {
        if self.len() != family.len() {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }

    /// Prior mean of the parameter.
    pub fn mean(&self, family: &ParametrisedState) -> Result<Vec<f64>> {
        self.check(family)?;
        let mut mean = vec![0.0; family.param_dim()];
        for (w, p) in self.weights.iter().zip(family.grid()) {
            for (m, x) in mean.iter_mut().zip(p) {
                *m += w * x;
            }
        }
        Ok(mean)
    }
}

/// Prior-weighted risk `sum_j w_j R(estimator, theta_j)`.
pub fn bayes_risk(
    family: &ParametrisedState,
    povm: &Povm,
    estimator: &Estimator,
    loss: &LossFunction,
    prior: &Prior,
) -> Result<f64> {
    prior.check(family)?;
    let profile = risk_profile(family, povm, estimator, loss)?;
    Ok(prior
        .weights
        .iter()
        .zip(&profile.values)
        .map(|(w, r)| w * r)
        .sum())
}

/// Posterior-mean estimator together with the outcomes whose marginal
/// probability vanished. Those outcomes carry the prior mean.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PosteriorMean {
    pub estimator: Estimator,
    pub never_occurring: Vec<usize>,
}

impl PosteriorMean {
    /// Rejects the result if any outcome never occurs.
    pub fn strict(self) -> Result<Estimator> {
        if self.never_occurring.is_empty() {
            Ok(self.estimator)
        } else {
            Err(Error::OutcomeNeverOccurs {
                outcomes: self.never_occurring,
            })
        }
    }
}

/// `E[theta | k]` for each outcome `k`. Outcomes with marginal at most
/// `tol.prob` are flagged and receive the prior mean.
pub fn posterior_mean_estimator(
    family: &ParametrisedState,
    povm: &Povm,
    prior: &Prior,
    tol: &Tolerances,
) -> Result<PosteriorMean> {
    prior.check(family)?;
    let table = family.probability_table(povm)?;
    let prior_mean = prior.mean(family)?;
    let n = family.param_dim();
    let mut values = Vec::with_capacity(povm.len());
    let mut never_occurring = Vec::new();
    for k in 0..povm.len() {
        let mut marginal = 0.0;
        let mut moment = vec![0.0; n];
        for ((w, probs), theta) in prior.weights.iter().zip(&table).zip(family.grid()) {
            let joint = w * probs[k];
            marginal += joint;
            for (m, x) in moment.iter_mut().zip(theta) {
                *m += joint * x;
            }
        }
        if marginal <= tol.prob {
            never_occurring.push(k);
            values.push(prior_mean.clone());
        } else {
            values.push(moment.iter().map(|m| m / marginal).collect());
        }
    }
    Ok(PosteriorMean {
        estimator: Estimator::new(values)?,
        never_occurring,
    })
}

/// `rho_bar = sum_j w_j rho_j`.
pub fn average_state(family: &ParametrisedState, prior: &Prior) -> Result<DensityMatrix> {
    prior.check(family)?;
    let d = family.hilbert_dim();
    let mut acc = ComplexMatrix::zeros(d, d);
    for (w, s) in prior.weights.iter().zip(family.states()) {
        acc += s.matrix() * c(*w);
    }
    Ok(DensityMatrix::from_trusted(hermitian_part(&acc)))
}

/// `(rho_bar, rho_bar')` with `rho_bar' = sum_j w_j theta_j rho_j`.
pub fn average_state_moments(
    family: &ParametrisedState,
    prior: &Prior,
) -> Result<(DensityMatrix, ComplexMatrix)> {
    let points = scalar_points(family)?;
    let rho_bar = average_state(family, prior)?;
    let d = family.hilbert_dim();
    let mut first = ComplexMatrix::zeros(d, d);
    for ((w, s), t) in prior.weights.iter().zip(family.states()).zip(&points) {
        first += s.matrix() * c(w * t);
    }
    Ok((rho_bar, hermitian_part(&first)))
}

fn scalar_points(family: &ParametrisedState) -> Result<Vec<f64>> {
    if family.param_dim() != 1 {
        return Err(Error::MultiParameterUnsupported {
            param_dim: family.param_dim(),
        });
    }
    family.scalar_points()
}

/// Output of [`solve_bayes_measurement`].
#[derive(Debug, Clone, Serialize)]
pub struct BayesSolution {
    #[serde(with = "matrix_serde")]
    pub lambda: ComplexMatrix,
    pub measurement: Povm,
    pub estimator: Estimator,
    pub bayes_risk: f64,
    /// `max |Lambda rho_bar + rho_bar Lambda - 2 rho_bar'|`.
    pub anticommutator_residual: f64,
    /// `max |sum_k F_k - 1|` over the returned projectors.
    pub completeness_residual: f64,
}

/// Whether degenerate eigenvalues of `Lambda` share one outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Grouping {
    /// One projector per eigenspace; the canonical coarsest measurement.
    #[default]
    Coarsest,
    /// One rank-one projector per eigenvector.
    FineGrained,
}

/// Solves for the Bayes-optimal measurement under least-squares loss.
///
/// Requires a single real parameter and a full-rank `rho_bar`; the rank cut
/// is `tol.rank * lambda_max`.
pub fn solve_bayes_measurement(
    family: &ParametrisedState,
    prior: &Prior,
    tol: &Tolerances,
    grouping: Grouping,
) -> Result<BayesSolution> {
    let (rho_bar, rho_prime) = average_state_moments(family, prior)?;
    let eig = eigh(rho_bar.matrix());
    let cut = tol.rank * eig.max_value();
    let kernel_dim = eig.values.iter().filter(|v| **v <= cut).count();
    if kernel_dim > 0 {
        return Err(Error::RankDeficientAverage { kernel_dim });
    }

    let v = &eig.vectors;
    let rotated = v.adjoint() * &rho_prime * v;
    let d = rotated.nrows();
    let lambda_rot = ComplexMatrix::from_fn(d, d, |a, b| {
        rotated[(a, b)] * c(2.0 / (eig.values[a] + eig.values[b]))
    });
    let lambda = hermitian_part(&(v * lambda_rot * v.adjoint()));

    let lam_eig = eigh(&lambda);
    let groups = match grouping {
        Grouping::Coarsest => group_eigenvalues(&lam_eig.values, tol.eig_group),
        Grouping::FineGrained => (0..d).map(|i| i..i + 1).collect(),
    };
    let mut effects = Vec::with_capacity(groups.len());
    let mut estimates = Vec::with_capacity(groups.len());
    for g in &groups {
        effects.push(projector(&lam_eig.columns(g.clone())));
        estimates.push(lam_eig.values[g.clone()].iter().sum::<f64>() / g.len() as f64);
    }
    let completeness_residual = max_abs(&(effects.iter().sum::<ComplexMatrix>() - crate::linalg::identity(d)));
    let measurement = Povm::from_trusted(effects);
    let estimator = Estimator::scalar(&estimates)?;

    let anticommutator_residual =
        max_abs(&(anticommutator(&lambda, rho_bar.matrix()) - &rho_prime * c(2.0)));
    let points = family.scalar_points()?;
    let second: f64 = prior.weights.iter().zip(&points).map(|(w, t)| w * t * t).sum();
    let bayes_risk = (trace_product_re(&(&lambda * &lambda), rho_bar.matrix())
        - 2.0 * trace_product_re(&lambda, &rho_prime)
        + second)
        .max(0.0);

    Ok(BayesSolution {
        lambda,
        measurement,
        estimator,
        bayes_risk,
        anticommutator_residual,
        completeness_residual,
    })
}

/// Decomposition of the least-squares Bayes risk of `(F, estimator)` as
/// `quadratic - 2 linear + prior_second_moment`, where
/// `quadratic = Tr(Lambda_2 rho_bar)`, `linear = Tr(Lambda rho_bar')`,
/// `Lambda = sum_i F_i t_i` and `Lambda_2 = sum_i F_i t_i^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BayesRiskTerms {
    pub quadratic: f64,
    pub linear: f64,
    pub prior_second_moment: f64,
}

impl BayesRiskTerms {
    pub fn combined(&self) -> f64 {
        self.quadratic - 2.0 * self.linear + self.prior_second_moment
    }
}

/// `(Lambda, Lambda_2)` for a measurement and scalar estimator.
pub fn estimator_operators(povm: &Povm, estimator: &Estimator) -> Result<(ComplexMatrix, ComplexMatrix)> {
    estimator.check_outcomes(povm.len())?;
    let t = estimator.scalars()?;
    let d = povm.dim();
    let mut lambda = ComplexMatrix::zeros(d, d);
    let mut lambda2 = ComplexMatrix::zeros(d, d);
    for (f, t) in povm.effects().iter().zip(&t) {
        lambda += f * c(*t);
        lambda2 += f * c(t * t);
    }
    Ok((lambda, lambda2))
}

pub fn bayes_risk_terms(
    povm: &Povm,
    estimator: &Estimator,
    family: &ParametrisedState,
    prior: &Prior,
) -> Result<BayesRiskTerms> {
    let (rho_bar, rho_prime) = average_state_moments(family, prior)?;
    if povm.dim() != family.hilbert_dim() {
        return Err(Error::DimensionMismatch {
            expected: family.hilbert_dim(),
            found: povm.dim(),
        });
    }
    let (lambda, lambda2) = estimator_operators(povm, estimator)?;
    let points = family.scalar_points()?;
    Ok(BayesRiskTerms {
        quadratic: trace_product_re(&lambda2, rho_bar.matrix()),
        linear: trace_product_re(&lambda, &rho_prime),
        prior_second_moment: prior.weights.iter().zip(&points).map(|(w, t)| w * t * t).sum(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{ci, identity, Ket};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_6};

    fn classical_qubit(points: &[f64]) -> ParametrisedState {
        let states = points
            .iter()
            .map(|t| DensityMatrix::diagonal(&[*t, 1.0 - t]).unwrap())
            .collect();
        ParametrisedState::from_scalar_grid(points, states).unwrap()
    }

    fn interferometer(points: &[f64]) -> ParametrisedState {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let states = points
            .iter()
            .map(|t| {
                DensityMatrix::from_ket(&Ket::from_vec(vec![ci(s, 0.0), ci(s * t.cos(), s * t.sin())]))
                    .unwrap()
            })
            .collect();
        ParametrisedState::from_scalar_grid(points, states).unwrap()
    }

    fn plus_minus() -> Povm {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let basis = ComplexMatrix::from_row_slice(2, 2, &[c(s), c(s), c(s), c(-s)]);
        Povm::projective(&basis).unwrap()
    }

    fn computational() -> Povm {
        Povm::projective(&identity(2)).unwrap()
    }

    #[test]
    fn prior_validation() {
        assert!(Prior::new(vec![0.5, 0.5]).is_ok());
        assert!(Prior::new(vec![0.5, 0.6]).is_err());
        assert!(Prior::new(vec![1.5, -0.5]).is_err());
        let p: Prior = serde_json::from_str(r#"{"weights": [0.25, 0.75]}"#).unwrap();
        assert_eq!(p.weights(), &[0.25, 0.75]);
        assert!(serde_json::from_str::<Prior>(r#"{"weights": [0.2]}"#).is_err());
    }

    #[test]
    fn bayes_risk_interferometer() {
        let fam = interferometer(&[0.0, FRAC_PI_2]);
        let est = Estimator::scalar(&[FRAC_PI_6, FRAC_PI_2]).unwrap();
        let prior = Prior::uniform(2).unwrap();
        let ls = LossFunction::least_squares();
        let r = bayes_risk(&fam, &plus_minus(), &est, &ls, &prior).unwrap();
        let expected = 0.5 * FRAC_PI_6.powi(2) + 0.5 * 0.5 * (FRAC_PI_6 - FRAC_PI_2).powi(2);
        assert!((r - expected).abs() < 1e-12);
        assert!((r - 0.411234).abs() < 1e-6);
        let terms = bayes_risk_terms(&plus_minus(), &est, &fam, &prior).unwrap();
        assert!((terms.combined() - r).abs() < 1e-10);
    }

    #[test]
    fn point_mass_prior_is_pointwise_risk() {
        let fam = interferometer(&[0.0, 1.0, 2.0]);
        let est = Estimator::scalar(&[0.3, 1.7]).unwrap();
        let ls = LossFunction::least_squares();
        let prior = Prior::point_mass(3, 1).unwrap();
        let r = bayes_risk(&fam, &plus_minus(), &est, &ls, &prior).unwrap();
        let direct = crate::estimation::risk(&fam, &plus_minus(), &est, &ls, 1).unwrap();
        assert_eq!(r, direct);
        let pm = posterior_mean_estimator(&fam, &plus_minus(), &prior, &Tolerances::default())
            .unwrap()
            .strict()
            .unwrap();
        assert!(pm.scalars().unwrap().iter().all(|v| (v - 1.0).abs() < 1e-15));
    }

    #[test]
    fn posterior_means() {
        let tol = Tolerances::default();
        let prior = Prior::uniform(2).unwrap();
        let fam = classical_qubit(&[0.25, 0.75]);
        let pm = posterior_mean_estimator(&fam, &computational(), &prior, &tol).unwrap();
        assert_eq!(pm.never_occurring, Vec::<usize>::new());
        let v = pm.estimator.scalars().unwrap();
        assert!((v[0] - 0.625).abs() < 1e-15 && (v[1] - 0.375).abs() < 1e-15);

        let mz = interferometer(&[0.0, FRAC_PI_2]);
        let v = posterior_mean_estimator(&mz, &plus_minus(), &prior, &tol)
            .unwrap()
            .estimator
            .scalars()
            .unwrap();
        assert!((v[0] - FRAC_PI_6).abs() < 1e-12 && (v[1] - FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn never_occurring_outcome_is_flagged() {
        let fam = classical_qubit(&[1.0]);
        let prior = Prior::uniform(1).unwrap();
        let pm = posterior_mean_estimator(&fam, &computational(), &prior, &Tolerances::default())
            .unwrap();
        assert_eq!(pm.never_occurring, vec![1]);
        assert_eq!(pm.estimator.value(1), &[1.0]);
        assert!(matches!(pm.strict(), Err(Error::OutcomeNeverOccurs { .. })));
    }

    #[test]
    fn moments_classical_qubit() {
        let fam = classical_qubit(&[0.25, 0.75]);
        let (rho_bar, prime) = average_state_moments(&fam, &Prior::uniform(2).unwrap()).unwrap();
        assert!(max_abs(&(rho_bar.matrix() - crate::linalg::real_diagonal(&[0.5, 0.5]))) < 1e-15);
        assert!(max_abs(&(prime - crate::linalg::real_diagonal(&[0.3125, 0.1875]))) < 1e-15);
    }

    #[test]
    fn solver_classical_qubit() {
        let fam = classical_qubit(&[0.25, 0.75]);
        let sol = solve_bayes_measurement(&fam, &Prior::uniform(2).unwrap(), &Tolerances::default(), Grouping::Coarsest)
            .unwrap();
        assert!(max_abs(&(&sol.lambda - crate::linalg::real_diagonal(&[0.625, 0.375]))) < 1e-12);
        assert_eq!(sol.measurement.len(), 2);
        assert_eq!(sol.estimator.scalars().unwrap(), vec![0.375, 0.625]);
        assert!(sol.anticommutator_residual < 1e-12);
        let ls = LossFunction::least_squares();
        let direct = bayes_risk(&fam, &sol.measurement, &sol.estimator, &ls, &Prior::uniform(2).unwrap()).unwrap();
        assert!((direct - sol.bayes_risk).abs() < 1e-12);
    }

    #[test]
    fn solver_near_point_mass() {
        let fam = classical_qubit(&[0.25, 0.75]);
        let prior = Prior::new(vec![1.0 - 1e-6, 1e-6]).unwrap();
        let sol = solve_bayes_measurement(&fam, &prior, &Tolerances::default(), Grouping::Coarsest).unwrap();
        assert!(max_abs(&(&sol.lambda - identity(2) * c(0.25))) < 1e-5);
    }

    #[test]
    fn solver_constant_family() {
        let rho = DensityMatrix::diagonal(&[0.3, 0.7]).unwrap();
        let fam = ParametrisedState::from_scalar_grid(&[1.0, 2.0, 4.0], vec![rho.clone(), rho.clone(), rho]).unwrap();
        let prior = Prior::new(vec![0.5, 0.25, 0.25]).unwrap();
        let sol = solve_bayes_measurement(&fam, &prior, &Tolerances::default(), Grouping::Coarsest).unwrap();
        assert_eq!(sol.measurement.len(), 1);
        assert!((sol.estimator.value(0)[0] - 2.0).abs() < 1e-12);
        let fine = solve_bayes_measurement(&fam, &prior, &Tolerances::default(), Grouping::FineGrained).unwrap();
        assert_eq!(fine.measurement.len(), 2);
    }

    #[test]
    fn solver_rejects_rank_deficient_average() {
        let fam = classical_qubit(&[1.0]);
        let err = solve_bayes_measurement(&fam, &Prior::uniform(1).unwrap(), &Tolerances::default(), Grouping::Coarsest)
            .unwrap_err();
        assert_eq!(err, Error::RankDeficientAverage { kernel_dim: 1 });
    }

    #[test]
    fn single_outcome_terms() {
        let fam = interferometer(&[0.0, 1.0]);
        let prior = Prior::uniform(2).unwrap();
        let est = Estimator::scalar(&[0.7]).unwrap();
        let t = bayes_risk_terms(&Povm::trivial(2), &est, &fam, &prior).unwrap();
        assert!((t.quadratic - 0.49).abs() < 1e-14);
        assert!((t.linear - 0.35).abs() < 1e-14);
        assert!((t.prior_second_moment - 0.5).abs() < 1e-14);
    }
}
