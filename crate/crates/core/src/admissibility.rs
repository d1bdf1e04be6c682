//! Refineable and uninformative measurements, and the constructions that
//! dominate them.
//!
//! A measurement is refineable when some outcome leaves a post-measurement
//! state that still depends on the parameter: appending a Helstrom
//! measurement to that outcome extracts more information. A measurement is
//! uninformative when its outcome statistics do not depend on the parameter
//! at all; any estimator on it is beaten by a constant, which in turn is
//! beaten by a two-point Bayes estimator on a discriminating measurement.
//!
//! Evidence is computed on the two-point sub-grid used by each construction,
//! with the full-grid profile attached for inspection. Under least-squares
//! loss the posterior mean is the Bayes estimator, so the strict improvements
//! are guaranteed there; for other losses they are reported as computed.

use serde::Serialize;

use crate::bayes::{bayes_risk, posterior_mean_estimator, Prior};
use crate::error::{Error, Result};
use crate::estimation::{dominates_pair, risk_profile, Domination, Estimator, LossFunction, LossKind, RiskProfile};
use crate::quantum::{
    helstrom_measurement, outcome_distribution, post_measurement_state, trace_distance, KrausMeasurement,
    ParametrisedState, Povm,
};
use crate::tolerance::Tolerances;

/// An outcome whose post-measurement state differs between two grid points
/// that both produce it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RefinabilityWitness {
    pub outcome: usize,
    pub first: usize,
    pub second: usize,
    /// Trace distance of the two post-measurement states.
    pub post_state_gap: f64,
    pub probabilities: (f64, f64),
}

/// First witness in the order: outcomes ascending, then grid pairs
/// `(a, b)`, `a < b`, lexicographically. `None` if the measurement is not
/// refineable on this grid.
pub fn find_refinability(
    family: &ParametrisedState,
    f: &KrausMeasurement,
    tol: &Tolerances,
) -> Result<Option<RefinabilityWitness>> {
    if f.dim() != family.hilbert_dim() {
        return Err(Error::DimensionMismatch {
            expected: family.hilbert_dim(),
            found: f.dim(),
        });
    }
    let n = family.len();
    for outcome in 0..f.len() {
        let post: Vec<Option<(f64, _)>> = family
            .states()
            .iter()
            .map(|rho| {
                let p = outcome_distribution(rho, &f.povm()).ok()?[outcome];
                let state = post_measurement_state(rho, f, outcome, tol).ok()?;
                Some((p, state))
            })
            .collect();
        for a in 0..n {
            let Some((pa, sa)) = &post[a] else { continue };
            for b in a + 1..n {
                let Some((pb, sb)) = &post[b] else { continue };
                let gap = trace_distance(sa, sb);
                if gap > tol.eq {
                    return Ok(Some(RefinabilityWitness {
                        outcome,
                        first: a,
                        second: b,
                        post_state_gap: gap,
                        probabilities: (*pa, *pb),
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// Provenance of an outcome of a refined measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "label", rename_all = "snake_case")]
pub enum OutcomeLabel {
    /// Outcome `parent` of the original measurement followed by Helstrom
    /// outcome `sub`.
    Refined { parent: usize, sub: usize },
    Original { parent: usize },
}

impl OutcomeLabel {
    pub fn parent(&self) -> usize {
        match *self {
            OutcomeLabel::Refined { parent, .. } | OutcomeLabel::Original { parent } => parent,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Refinement {
    pub measurement: KrausMeasurement,
    pub labels: Vec<OutcomeLabel>,
}

/// Replaces outcome `w.outcome` of `f` by the two outcomes of the Helstrom
/// measurement of its post-measurement states at `w.first` and `w.second`.
/// The refined pair sits where the original outcome was.
pub fn refine_measurement(
    family: &ParametrisedState,
    f: &KrausMeasurement,
    w: &RefinabilityWitness,
    tol: &Tolerances,
) -> Result<Refinement> {
    let i = w.outcome;
    let s1 = post_measurement_state(family.state(w.first), f, i, tol)?;
    let s2 = post_measurement_state(family.state(w.second), f, i, tol)?;
    let helstrom = helstrom_measurement(&s1, &s2, tol)?;
    let mut ops = Vec::with_capacity(f.len() + 1);
    let mut labels = Vec::with_capacity(f.len() + 1);
    for (k, fk) in f.operators().iter().enumerate() {
        if k == i {
            for (sub, p) in helstrom.effects().iter().enumerate() {
                ops.push(p * fk);
                labels.push(OutcomeLabel::Refined { parent: k, sub });
            }
        } else {
            ops.push(fk.clone());
            labels.push(OutcomeLabel::Original { parent: k });
        }
    }
    Ok(Refinement {
        measurement: KrausMeasurement::new(ops, tol)?,
        labels,
    })
}

/// `lifted(k) = estimator(parent(k))`: the same decision rule on the refined
/// measurement, with identical risk.
pub fn lift_estimator(refinement: &Refinement, estimator: &Estimator) -> Result<Estimator> {
    let parents = refinement.labels.iter().map(|l| l.parent()).max().map_or(0, |m| m + 1);
    estimator.check_outcomes(parents)?;
    Estimator::new(
        refinement
            .labels
            .iter()
            .map(|l| estimator.value(l.parent()).to_vec())
            .collect(),
    )
}

fn is_constant(family: &ParametrisedState, tol: &Tolerances) -> bool {
    let first = family.state(0);
    family.states().iter().all(|s| trace_distance(first, s) <= tol.eq)
}

/// Evidence that a refineable measurement is inadmissible.
#[derive(Debug, Clone, Serialize)]
pub struct RefineableDomination {
    pub witness: RefinabilityWitness,
    pub refinement: Refinement,
    /// Two-point uniform-prior posterior mean on the refined measurement.
    pub estimator: Estimator,
    /// Largest `|R(lift(e)) - R(e)|` over the supplied estimators and grid.
    pub lift_max_deviation: f64,
    /// Two-point Bayes risk of `estimator`.
    pub bayes_risk_refined: f64,
    /// Two-point Bayes risk of the lift of the original measurement's
    /// posterior mean (the best lifted estimator under least squares).
    pub bayes_risk_best_lifted: f64,
    pub strict_improvement: bool,
    pub sub_grid_profile: RiskProfile,
    pub full_profile: RiskProfile,
    pub least_squares_certified: bool,
}

pub fn dominate_refineable(
    family: &ParametrisedState,
    f: &KrausMeasurement,
    loss: &LossFunction,
    f_estimators: &[Estimator],
    tol: &Tolerances,
) -> Result<RefineableDomination> {
    if is_constant(family, tol) {
        return Err(Error::StateConstant);
    }
    let witness = find_refinability(family, f, tol)?.ok_or(Error::NotRefineable)?;
    let refinement = refine_measurement(family, f, &witness, tol)?;
    let mf = refinement.measurement.povm();
    let fp = f.povm();

    let mut lift_max_deviation: f64 = 0.0;
    for e in f_estimators {
        let lifted = lift_estimator(&refinement, e)?;
        let a = risk_profile(family, &fp, e, loss)?;
        let b = risk_profile(family, &mf, &lifted, loss)?;
        lift_max_deviation = lift_max_deviation.max(a.max_abs_diff(&b));
    }

    let sub = family.restrict(&[witness.first, witness.second])?;
    let prior = Prior::uniform(2)?;
    let estimator = posterior_mean_estimator(&sub, &mf, &prior, tol)?.estimator;
    let f_best = posterior_mean_estimator(&sub, &fp, &prior, tol)?.estimator;
    let lifted_best = lift_estimator(&refinement, &f_best)?;
    let bayes_risk_refined = bayes_risk(&sub, &mf, &estimator, loss, &prior)?;
    let bayes_risk_best_lifted = bayes_risk(&sub, &mf, &lifted_best, loss, &prior)?;
    Ok(RefineableDomination {
        strict_improvement: bayes_risk_refined < bayes_risk_best_lifted - tol.dom,
        sub_grid_profile: risk_profile(&sub, &mf, &estimator, loss)?,
        full_profile: risk_profile(family, &mf, &estimator, loss)?,
        least_squares_certified: loss.kind() == LossKind::LeastSquares,
        witness,
        refinement,
        estimator,
        lift_max_deviation,
        bayes_risk_refined,
        bayes_risk_best_lifted,
    })
}

/// Whether every outcome probability varies by at most `tol` across the grid.
pub fn is_uninformative(family: &ParametrisedState, f: &Povm, tol: f64) -> Result<bool> {
    let table = family.probability_table(f)?;
    Ok((0..f.len()).all(|k| {
        let (lo, hi) = table
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), row| (lo.min(row[k]), hi.max(row[k])));
        hi - lo <= tol
    }))
}

/// `theta_0 = sum_k p_k estimator(k)` for parameter-independent `probs`.
pub fn constant_reduction(probs: &[f64], estimator: &Estimator) -> Result<Vec<f64>> {
    estimator.check_outcomes(probs.len())?;
    let mut out = vec![0.0; estimator.param_dim()];
    for (p, v) in probs.iter().zip(estimator.values()) {
        for (o, x) in out.iter_mut().zip(v) {
            *o += p * x;
        }
    }
    Ok(out)
}

/// An estimator on an uninformative measurement and its constant reduction.
#[derive(Debug, Clone, Serialize)]
pub struct ConstantReduction {
    pub theta0: Vec<f64>,
    /// `max_theta (L(theta0, theta) - R(estimator, theta))`; at most the
    /// tolerance when the reduction weakly improves.
    pub max_excess: f64,
    pub weakly_improves: bool,
}

/// Evidence that an uninformative measurement is inadmissible.
#[derive(Debug, Clone, Serialize)]
pub struct UninformativeDomination {
    pub first: usize,
    pub second: usize,
    pub measurement: Povm,
    /// Two-point uniform-prior posterior mean on `measurement`.
    pub estimator: Estimator,
    /// Best constant on the segment between the two points under the
    /// two-point uniform prior.
    pub best_constant: Vec<f64>,
    pub sub_grid_profile: RiskProfile,
    pub constant_profile: RiskProfile,
    pub domination: Domination,
    /// `min_theta (R_constant - R_estimator)` on the two-point sub-grid.
    pub margin: f64,
    pub reductions: Vec<ConstantReduction>,
    pub full_profile: RiskProfile,
    pub least_squares_certified: bool,
}

pub fn dominate_uninformative(
    family: &ParametrisedState,
    f: &Povm,
    loss: &LossFunction,
    f_estimators: &[Estimator],
    tol: &Tolerances,
) -> Result<UninformativeDomination> {
    if is_constant(family, tol) {
        return Err(Error::StateConstant);
    }
    if !is_uninformative(family, f, tol.eq)? {
        return Err(Error::MeasurementInformative);
    }
    let probs = outcome_distribution(family.state(0), f)?;
    let mut reductions = Vec::with_capacity(f_estimators.len());
    for e in f_estimators {
        let theta0 = constant_reduction(&probs, e)?;
        let c = Estimator::constant(&theta0, 1)?;
        let rc = risk_profile(family, &Povm::trivial(family.hilbert_dim()), &c, loss)?;
        let re = risk_profile(family, f, e, loss)?;
        let max_excess = rc
            .values
            .iter()
            .zip(&re.values)
            .map(|(a, b)| a - b)
            .fold(f64::NEG_INFINITY, f64::max);
        reductions.push(ConstantReduction {
            theta0,
            weakly_improves: max_excess <= tol.dom,
            max_excess,
        });
    }

    let (first, second) = most_distinct_pair(family);
    let sub = family.restrict(&[first, second])?;
    let measurement = helstrom_measurement(sub.state(0), sub.state(1), tol)?;
    let prior = Prior::uniform(2)?;
    let estimator = posterior_mean_estimator(&sub, &measurement, &prior, tol)?.estimator;
    let best_constant = best_segment_constant(family.point(first), family.point(second), loss)?;
    let constant = Estimator::constant(&best_constant, 1)?;
    let trivial = Povm::trivial(family.hilbert_dim());
    let sub_grid_profile = risk_profile(&sub, &measurement, &estimator, loss)?;
    let constant_profile = risk_profile(&sub, &trivial, &constant, loss)?;
    let margin = constant_profile
        .values
        .iter()
        .zip(&sub_grid_profile.values)
        .map(|(c, m)| c - m)
        .fold(f64::INFINITY, f64::min);
    Ok(UninformativeDomination {
        domination: dominates_pair(&sub_grid_profile, &constant_profile, tol.dom)?,
        full_profile: risk_profile(family, &measurement, &estimator, loss)?,
        least_squares_certified: loss.kind() == LossKind::LeastSquares,
        first,
        second,
        measurement,
        estimator,
        best_constant,
        sub_grid_profile,
        constant_profile,
        margin,
        reductions,
    })
}

/// Grid pair with the largest trace distance; first pair on ties.
fn most_distinct_pair(family: &ParametrisedState) -> (usize, usize) {
    let n = family.len();
    let mut best = (0, 0, f64::NEG_INFINITY);
    for a in 0..n {
        for b in a + 1..n {
            let d = trace_distance(family.state(a), family.state(b));
            if d > best.2 {
                best = (a, b, d);
            }
        }
    }
    (best.0, best.1)
}

/// Minimiser of `L(c, a) + L(c, b)` over `c` on the segment from `a` to `b`.
/// Exact midpoint for least squares, golden-section search otherwise.
fn best_segment_constant(a: &[f64], b: &[f64], loss: &LossFunction) -> Result<Vec<f64>> {
    let at = |t: f64| -> Vec<f64> { a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect() };
    if loss.kind() == LossKind::LeastSquares {
        return Ok(at(0.5));
    }
    let cost = |t: f64| -> Result<f64> {
        let c = at(t);
        Ok(loss.loss(&c, a)? + loss.loss(&c, b)?)
    };
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (0.0, 1.0);
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let (mut f1, mut f2) = (cost(x1)?, cost(x2)?);
    for _ in 0..200 {
        if hi - lo < 1e-14 {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = cost(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = cost(x2)?;
        }
    }
    Ok(at(0.5 * (lo + hi)))
}

/// Result of averaging two estimators with the same risk profile.
#[derive(Debug, Clone, Serialize)]
pub struct AverageImprovement {
    pub estimator: Estimator,
    pub profile: RiskProfile,
    pub shared_profile: RiskProfile,
    /// Grid indices where the average is strictly better (by more than
    /// `tol.dom`).
    pub strict_points: Vec<usize>,
}

/// Coordinate-wise midpoint of two distinct estimators with equal risk
/// profiles (within `tol.eq`).
pub fn bregman_average_improvement(
    a: &Estimator,
    b: &Estimator,
    povm: &Povm,
    family: &ParametrisedState,
    loss: &LossFunction,
    tol: &Tolerances,
) -> Result<AverageImprovement> {
    b.check_outcomes(a.len())?;
    let differ = a
        .values()
        .iter()
        .zip(b.values())
        .flat_map(|(x, y)| x.iter().zip(y).map(|(p, q)| (p - q).abs()))
        .fold(0.0, f64::max);
    if differ <= tol.eq {
        return Err(Error::EstimatorsEqual);
    }
    let pa = risk_profile(family, povm, a, loss)?;
    let pb = risk_profile(family, povm, b, loss)?;
    let deviation = pa.max_abs_diff(&pb);
    if deviation > tol.eq {
        return Err(Error::ProfilesDiffer {
            max_deviation: deviation,
        });
    }
    let mid = Estimator::new(
        a.values()
            .iter()
            .zip(b.values())
            .map(|(x, y)| x.iter().zip(y).map(|(p, q)| 0.5 * (p + q)).collect())
            .collect(),
    )?;
    let profile = risk_profile(family, povm, &mid, loss)?;
    let strict_points = profile
        .values
        .iter()
        .zip(&pa.values)
        .enumerate()
        .filter(|(_, (m, s))| **m < **s - tol.dom)
        .map(|(i, _)| i)
        .collect();
    Ok(AverageImprovement {
        estimator: mid,
        profile,
        shared_profile: pa,
        strict_points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{self, c, kron, max_abs};
    use crate::quantum::DensityMatrix;
    use crate::scenarios::{diagonal_classical, mach_zehnder};
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn sigma_x_basis() -> Povm {
        let s = FRAC_1_SQRT_2;
        Povm::projective(&linalg::ComplexMatrix::from_row_slice(2, 2, &[c(s), c(s), c(s), c(-s)])).unwrap()
    }

    #[test]
    fn identity_is_refineable_projective_is_not() {
        let fam = mach_zehnder(&[0.0, 1.0, 2.0]).unwrap();
        let w = find_refinability(&fam, &KrausMeasurement::identity(2), &tol()).unwrap().unwrap();
        assert_eq!((w.outcome, w.first, w.second), (0, 0, 1));
        let proj = KrausMeasurement::projective(&linalg::identity(2)).unwrap();
        assert_eq!(find_refinability(&fam, &proj, &tol()).unwrap(), None);
    }

    #[test]
    fn product_family_refines_on_second_factor() {
        let single = mach_zehnder(&[0.0, FRAC_PI_2]).unwrap();
        let states = single
            .states()
            .iter()
            .map(|s| DensityMatrix::from_trusted(kron(s.matrix(), s.matrix())))
            .collect();
        let fam = single.with_states(states).unwrap();
        let first_factor = KrausMeasurement::new(
            vec![
                kron(&linalg::real_diagonal(&[1.0, 0.0]), &linalg::identity(2)),
                kron(&linalg::real_diagonal(&[0.0, 1.0]), &linalg::identity(2)),
            ],
            &tol(),
        )
        .unwrap();
        let w = find_refinability(&fam, &first_factor, &tol()).unwrap().unwrap();
        assert_eq!(w.outcome, 0);
        let r = refine_measurement(&fam, &first_factor, &w, &tol()).unwrap();
        assert_eq!(r.measurement.len(), 3);
        assert_eq!(r.labels[1], OutcomeLabel::Refined { parent: 0, sub: 1 });
        assert_eq!(r.labels[2], OutcomeLabel::Original { parent: 1 });
    }

    #[test]
    fn identity_refinement_is_helstrom() {
        let fam = mach_zehnder(&[0.0, FRAC_PI_2]).unwrap();
        let id = KrausMeasurement::identity(2);
        let w = find_refinability(&fam, &id, &tol()).unwrap().unwrap();
        let r = refine_measurement(&fam, &id, &w, &tol()).unwrap();
        let h = helstrom_measurement(fam.state(0), fam.state(1), &tol()).unwrap();
        for (a, b) in r.measurement.povm().effects().iter().zip(h.effects()) {
            assert!(max_abs(&(a - b)) < 1e-12);
        }
    }

    #[test]
    fn refineable_domination_interferometer() {
        let fam = mach_zehnder(&[0.0, FRAC_PI_2]).unwrap();
        let ls = LossFunction::least_squares();
        let consts: Vec<Estimator> = (0..=20)
            .map(|i| Estimator::scalar(&[FRAC_PI_2 * i as f64 / 20.0]).unwrap())
            .collect();
        let d = dominate_refineable(&fam, &KrausMeasurement::identity(2), &ls, &consts, &tol()).unwrap();
        assert!(d.lift_max_deviation < 1e-12);
        assert!(d.strict_improvement);
        // brute force over constants: the best two-point Bayes risk
        let best_const = consts
            .iter()
            .map(|e| bayes_risk(&fam, &Povm::trivial(2), e, &ls, &Prior::uniform(2).unwrap()).unwrap())
            .fold(f64::INFINITY, f64::min);
        assert!(d.bayes_risk_refined < best_const);
        let v = d.estimator.scalars().unwrap();
        assert!(v[0] != v[1]);
    }

    #[test]
    fn constant_family_is_rejected() {
        let rho = DensityMatrix::diagonal(&[0.4, 0.6]).unwrap();
        let fam = ParametrisedState::from_scalar_grid(&[0.0, 1.0], vec![rho.clone(), rho]).unwrap();
        let ls = LossFunction::least_squares();
        assert_eq!(
            dominate_refineable(&fam, &KrausMeasurement::identity(2), &ls, &[], &tol()).unwrap_err(),
            Error::StateConstant
        );
        assert_eq!(
            dominate_uninformative(&fam, &Povm::trivial(2), &ls, &[], &tol()).unwrap_err(),
            Error::StateConstant
        );
    }

    #[test]
    fn uninformative_detection() {
        let mz = mach_zehnder(&[0.0, 1.0, 2.0]).unwrap();
        assert!(is_uninformative(&mz, &Povm::trivial(2), 1e-12).unwrap());
        assert!(!is_uninformative(&mz, &sigma_x_basis(), 1e-12).unwrap());
        let diag = diagonal_classical(&[0.1, 0.5, 0.8]).unwrap();
        assert!(is_uninformative(&diag, &sigma_x_basis(), 1e-12).unwrap());
        let p = outcome_distribution(diag.state(0), &sigma_x_basis()).unwrap();
        assert!((p[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn uninformative_domination_interferometer() {
        let fam = mach_zehnder(&[0.0, FRAC_PI_2]).unwrap();
        let ls = LossFunction::least_squares();
        let d = dominate_uninformative(&fam, &Povm::trivial(2), &ls, &[], &tol()).unwrap();
        assert_eq!(d.domination, Domination::Dominates);
        assert!(d.margin > tol().dom);
        let v = d.estimator.scalars().unwrap();
        let probs = fam.probability_table(&d.measurement).unwrap();
        for k in 0..2 {
            let expected = FRAC_PI_2 * probs[1][k] / (probs[0][k] + probs[1][k]);
            assert!((v[k] - expected).abs() < 1e-12);
        }
        assert!(v[0] != v[1]);
        // no constant on a fine lattice beats the construction at both points
        for i in 0..=1000 {
            let c = FRAC_PI_2 * i as f64 / 1000.0;
            let (r0, r1) = (c * c, (c - FRAC_PI_2).powi(2));
            assert!(r0 > d.sub_grid_profile.values[0] || r1 > d.sub_grid_profile.values[1]);
        }
    }

    #[test]
    fn uninformative_domination_diagonal() {
        let fam = diagonal_classical(&[0.2, 0.9]).unwrap();
        let ls = LossFunction::least_squares();
        let ests = vec![Estimator::scalar(&[0.1, 0.7]).unwrap()];
        let d = dominate_uninformative(&fam, &sigma_x_basis(), &ls, &ests, &tol()).unwrap();
        assert!(d.reductions[0].weakly_improves);
        assert!((d.reductions[0].theta0[0] - 0.4).abs() < 1e-12);
        assert!(d.measurement.effects().iter().any(|e| max_abs(&(e - linalg::real_diagonal(&[1.0, 0.0]))) < 1e-12));
        assert_eq!(d.domination, Domination::Dominates);
        assert_eq!(
            dominate_uninformative(&mach_zehnder(&[0.0, 1.0]).unwrap(), &sigma_x_basis(), &ls, &[], &tol())
                .unwrap_err(),
            Error::MeasurementInformative
        );
    }

    #[test]
    fn averaging_symmetric_estimators() {
        let fam = diagonal_classical(&[0.2, 0.5, 0.9]).unwrap();
        let ls = LossFunction::least_squares();
        let a = Estimator::scalar(&[0.1, 0.7]).unwrap();
        let b = Estimator::scalar(&[0.7, 0.1]).unwrap();
        let r = bregman_average_improvement(&a, &b, &sigma_x_basis(), &fam, &ls, &tol()).unwrap();
        assert!(r.estimator.scalars().unwrap().iter().all(|v| (v - 0.4).abs() < 1e-15));
        assert_eq!(r.strict_points, vec![0, 1, 2]);
        assert_eq!(
            bregman_average_improvement(&a, &a, &sigma_x_basis(), &fam, &ls, &tol()).unwrap_err(),
            Error::EstimatorsEqual
        );
        let far = Estimator::scalar(&[0.1, 0.9]).unwrap();
        assert!(matches!(
            bregman_average_improvement(&a, &far, &sigma_x_basis(), &fam, &ls, &tol()),
            Err(Error::ProfilesDiffer { .. })
        ));
    }

    #[test]
    fn segment_constant_for_kl() {
        let kl = LossFunction::kullback_leibler();
        let c = best_segment_constant(&[0.2, 0.8], &[0.6, 0.4], &kl).unwrap();
        let cost = |c: &[f64]| kl.loss(c, &[0.2, 0.8]).unwrap() + kl.loss(c, &[0.6, 0.4]).unwrap();
        for t in 0..=100 {
            let x = 0.2 + 0.4 * t as f64 / 100.0;
            assert!(cost(&c) <= cost(&[x, 1.0 - x]) + 1e-12);
        }
    }
}
