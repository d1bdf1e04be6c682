use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::estimation::risk::profile_from_table;
use crate::estimation::{Estimator, LossFunction, RiskProfile};
use crate::quantum::{ParametrisedState, Povm};

/// Finite search space for the brute-force `M <= F` check.
///
/// Estimators for `F` range over `f_lattice^|F|`, estimators for `M` over
/// `m_lattice^|M|`. Restricting to a lattice under-approximates the
/// universal quantifier: a counterexample is only lattice-relative, and
/// "holds" only covers lattice-valued `F` estimators.
#[derive(Debug, Clone)]
pub struct PreorderSearch {
    pub f_lattice: Vec<Vec<f64>>,
    pub m_lattice: Vec<Vec<f64>>,
    /// Maximum number of (F-estimator, M-estimator) pairs.
    pub cap: u64,
    pub tol_dom: f64,
}

impl PreorderSearch {
    pub const DEFAULT_CAP: u64 = 10_000_000;

    /// Both lattices equal to the grid points of the family.
    pub fn on_grid(family: &ParametrisedState) -> Self {
        PreorderSearch {
            f_lattice: family.grid().to_vec(),
            m_lattice: family.grid().to_vec(),
            cap: Self::DEFAULT_CAP,
            tol_dom: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PreorderOutcome {
    /// Every lattice estimator for `F` is matched pointwise by some lattice
    /// estimator for `M`.
    Holds { f_estimators_checked: usize },
    /// The first `F` estimator (lexicographic lattice order, outcome 0 most
    /// significant) with no matching `M` estimator.
    Counterexample {
        f_estimator: Estimator,
        f_profile: RiskProfile,
    },
}

pub(crate) fn lattice_size(lattice_len: usize, outcomes: usize) -> f64 {
    (lattice_len as f64).powi(outcomes as i32)
}

/// Writes the `index`-th lattice tuple (base `base`, most significant first).
pub(crate) fn decode(mut index: usize, base: usize, digits: &mut [usize]) {
    for d in digits.iter_mut().rev() {
        *d = index % base;
        index /= base;
    }
}

/// Precomputed `loss[lattice][grid]`.
pub(crate) fn loss_table(
    lattice: &[Vec<f64>],
    family: &ParametrisedState,
    loss: &LossFunction,
) -> Result<Vec<Vec<f64>>> {
    lattice
        .iter()
        .map(|x| {
            family
                .grid()
                .iter()
                .map(|theta| loss.loss(x, theta))
                .collect()
        })
        .collect()
}

/// Brute-force check of `M <= F`: for every lattice estimator on `F`, look for
/// a lattice estimator on `M` whose risk is pointwise at most as large
/// (within `tol_dom`).
pub fn measurement_preorder_bruteforce(
    family: &ParametrisedState,
    m: &Povm,
    f: &Povm,
    loss: &LossFunction,
    search: &PreorderSearch,
) -> Result<PreorderOutcome> {
    if search.f_lattice.is_empty() || search.m_lattice.is_empty() {
        return Err(Error::InvalidEstimator("empty estimator lattice".into()));
    }
    let size = lattice_size(search.f_lattice.len(), f.len())
        * lattice_size(search.m_lattice.len(), m.len());
    if size > search.cap as f64 {
        return Err(Error::SearchSpaceTooLarge {
            size,
            cap: search.cap,
        });
    }
    let pm = family.probability_table(m)?;
    let pf = family.probability_table(f)?;
    let loss_m = loss_table(&search.m_lattice, family, loss)?;
    let loss_f = loss_table(&search.f_lattice, family, loss)?;
    let n_grid = family.len();
    let n_f = lattice_size(search.f_lattice.len(), f.len()) as usize;
    let n_m = lattice_size(search.m_lattice.len(), m.len()) as usize;

    let f_risk = |digits: &[usize]| -> Vec<f64> {
        (0..n_grid)
            .map(|t| digits.iter().enumerate().map(|(k, &d)| pf[t][k] * loss_f[d][t]).sum())
            .collect()
    };
    let matched = |target: &[f64]| -> bool {
        let mut digits = vec![0usize; m.len()];
        (0..n_m).any(|idx| {
            decode(idx, search.m_lattice.len(), &mut digits);
            (0..n_grid).all(|t| {
                let r: f64 = digits.iter().enumerate().map(|(k, &d)| pm[t][k] * loss_m[d][t]).sum();
                r <= target[t] + search.tol_dom
            })
        })
    };

    let hit = (0..n_f).into_par_iter().find_map_first(|idx| {
        let mut digits = vec![0usize; f.len()];
        decode(idx, search.f_lattice.len(), &mut digits);
        let target = f_risk(&digits);
        if matched(&target) {
            None
        } else {
            Some(digits)
        }
    });

    match hit {
        None => Ok(PreorderOutcome::Holds {
            f_estimators_checked: n_f,
        }),
        Some(digits) => {
            let est = Estimator::new(digits.iter().map(|&d| search.f_lattice[d].clone()).collect())?;
            let profile = profile_from_table(family, &pf, &est, loss)?;
            Ok(PreorderOutcome::Counterexample {
                f_estimator: est,
                f_profile: profile,
            })
        }
    }
}
