use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::bayes::Prior;
use crate::error::{Error, Result};
use crate::estimation::preorder::{lattice_size, loss_table};
use crate::estimation::{
    measurement_preorder_bruteforce, Estimator, LossFunction, PreorderOutcome, PreorderSearch,
    RiskProfile,
};
use crate::linalg::{self, c, ci, Ket};
use crate::quantum::{ParametrisedState, Povm};

/// Rank-one projective qubit measurements on a Bloch-angle grid
/// (polar `pi a / res`, azimuth `2 pi b / res` for `a, b < res`), followed by
/// the single-outcome measurement. `res^2 + 1` entries in total.
pub fn oracle_measurement_grid(dim: usize, resolution: usize) -> Result<Vec<Povm>> {
    if dim != 2 {
        return Err(Error::UnsupportedDimension(dim));
    }
    if resolution == 0 {
        return Err(Error::InvalidRange("resolution must be positive".into()));
    }
    let mut out = Vec::with_capacity(resolution * resolution + 1);
    for a in 0..resolution {
        let polar = PI * a as f64 / resolution as f64;
        for b in 0..resolution {
            let azim = 2.0 * PI * b as f64 / resolution as f64;
            let (h, s) = ((polar / 2.0).cos(), (polar / 2.0).sin());
            let up = Ket::from_vec(vec![c(h), ci(s * azim.cos(), s * azim.sin())]);
            let p = linalg::outer(&up);
            let q = linalg::identity(2) - &p;
            out.push(Povm::from_trusted(vec![p, q]));
        }
    }
    out.push(Povm::trivial(2));
    Ok(out)
}

/// Search criterion for [`oracle_best_pair`].
#[derive(Debug, Clone)]
pub enum OracleCriterion {
    /// Minimise the prior-weighted risk.
    BayesRisk(Prior),
    /// Find the first candidate pair that no `reference` estimator from
    /// `reference_lattice` matches pointwise, i.e. a witness that the
    /// reference measurement is not below the candidate.
    Pointwise {
        reference: Povm,
        reference_lattice: Vec<Vec<f64>>,
        tol_dom: f64,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct BayesRow {
    pub measurement_index: usize,
    pub bayes_risk: f64,
    pub estimator: Estimator,
}

#[derive(Debug, Clone, Serialize)]
pub struct PointwiseWitness {
    pub measurement_index: usize,
    pub measurement: Povm,
    pub estimator: Estimator,
    pub profile: RiskProfile,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "criterion", rename_all = "snake_case")]
pub enum OracleReport {
    /// One row per measurement with its best lattice estimator, sorted by
    /// Bayes risk (ties keep enumeration order).
    BayesRisk {
        search_space: f64,
        ranking: Vec<BayesRow>,
    },
    Pointwise {
        search_space: f64,
        measurements_checked: usize,
        witness: Option<PointwiseWitness>,
    },
}

impl OracleReport {
    /// Best row of a Bayes ranking.
    pub fn best(&self) -> Option<&BayesRow> {
        match self {
            OracleReport::BayesRisk { ranking, .. } => ranking.first(),
            OracleReport::Pointwise { .. } => None,
        }
    }

    /// Ranking as CSV: `rank,measurement,bayes_risk,estimate_1..`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        match self {
            OracleReport::BayesRisk { ranking, .. } => {
                let k = ranking.iter().map(|r| r.estimator.len()).max().unwrap_or(0);
                out.push_str("rank,measurement,bayes_risk");
                for i in 1..=k {
                    out.push_str(&format!(",estimate_{i}"));
                }
                out.push('\n');
                for (rank, row) in ranking.iter().enumerate() {
                    out.push_str(&format!("{},{},{}", rank + 1, row.measurement_index, row.bayes_risk));
                    for v in row.estimator.values() {
                        out.push_str(&format!(",{}", v[0]));
                    }
                    out.push('\n');
                }
            }
            OracleReport::Pointwise { witness, .. } => match witness {
                Some(w) => out.push_str(&w.profile.to_csv()),
                None => out.push_str("theta_1,risk\n"),
            },
        }
        out
    }
}

/// Exhaustive search over `measurements` x `lattice^outcomes`.
///
/// The search space is the total number of candidate pairs (times the
/// reference lattice size for the pointwise criterion) and must not exceed
/// `cap`. Bayes risk is additive over outcomes, so the best lattice estimator
/// of each measurement is found outcome by outcome; this is the same minimum
/// as full enumeration.
pub fn oracle_best_pair(
    family: &ParametrisedState,
    loss: &LossFunction,
    measurements: &[Povm],
    lattice: &[Vec<f64>],
    criterion: &OracleCriterion,
    cap: u64,
) -> Result<OracleReport> {
    if lattice.is_empty() {
        return Err(Error::InvalidEstimator("empty estimator lattice".into()));
    }
    let candidates: f64 = measurements.iter().map(|m| lattice_size(lattice.len(), m.len())).sum();
    match criterion {
        OracleCriterion::BayesRisk(prior) => {
            if prior.len() != family.len() {
                return Err(Error::GridMismatch);
            }
            if candidates > cap as f64 {
                return Err(Error::SearchSpaceTooLarge { size: candidates, cap });
            }
            let losses = loss_table(lattice, family, loss)?;
            let w = prior.weights();
            let mut rows = measurements
                .par_iter()
                .enumerate()
                .map(|(idx, m)| {
                    let table = family.probability_table(m)?;
                    let mut total = 0.0;
                    let mut values = Vec::with_capacity(m.len());
                    for k in 0..m.len() {
                        let mut best = (f64::INFINITY, 0usize);
                        for (l, row) in losses.iter().enumerate() {
                            let cost: f64 = (0..family.len()).map(|t| w[t] * table[t][k] * row[t]).sum();
                            if cost < best.0 {
                                best = (cost, l);
                            }
                        }
                        total += best.0;
                        values.push(lattice[best.1].clone());
                    }
                    Ok(BayesRow {
                        measurement_index: idx,
                        bayes_risk: total,
                        estimator: Estimator::new(values)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            rows.sort_by(|a, b| {
                a.bayes_risk
                    .total_cmp(&b.bayes_risk)
                    .then(a.measurement_index.cmp(&b.measurement_index))
            });
            Ok(OracleReport::BayesRisk {
                search_space: candidates,
                ranking: rows,
            })
        }
        OracleCriterion::Pointwise {
            reference,
            reference_lattice,
            tol_dom,
        } => {
            let size = candidates * lattice_size(reference_lattice.len(), reference.len());
            if size > cap as f64 {
                return Err(Error::SearchSpaceTooLarge { size, cap });
            }
            let search = PreorderSearch {
                f_lattice: lattice.to_vec(),
                m_lattice: reference_lattice.clone(),
                cap: u64::MAX,
                tol_dom: *tol_dom,
            };
            for (idx, f) in measurements.iter().enumerate() {
                if let PreorderOutcome::Counterexample { f_estimator, f_profile } =
                    measurement_preorder_bruteforce(family, reference, f, loss, &search)?
                {
                    return Ok(OracleReport::Pointwise {
                        search_space: size,
                        measurements_checked: idx + 1,
                        witness: Some(PointwiseWitness {
                            measurement_index: idx,
                            measurement: f.clone(),
                            estimator: f_estimator,
                            profile: f_profile,
                        }),
                    });
                }
            }
            Ok(OracleReport::Pointwise {
                search_space: size,
                measurements_checked: measurements.len(),
                witness: None,
            })
        }
    }
}
