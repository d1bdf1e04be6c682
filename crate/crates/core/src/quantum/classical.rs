use rayon::prelude::*;

use crate::error::Result;
use crate::linalg::{self, ComplexMatrix};
use crate::quantum::{DensityMatrix, ParametrisedState};
use crate::tolerance::Tolerances;

/// A grid pair whose states fail to commute.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct CommutatorWitness {
    pub first: usize,
    pub second: usize,
    pub first_point: Vec<f64>,
    pub second_point: Vec<f64>,
    pub commutator_norm: f64,
}

/// Outcome of [`classicality_certificate`].
#[derive(Debug, Clone, PartialEq)]
pub enum Classicality {
    /// Every state is diagonal in `basis` (columns are the basis vectors).
    Classical {
        basis: ComplexMatrix,
        max_commutator: f64,
    },
    NotClassical(CommutatorWitness),
}

impl Classicality {
    pub fn is_classical(&self) -> bool {
        matches!(self, Classicality::Classical { .. })
    }
}

/// Largest commutator operator norm over grid pairs `i < j`. Ties go to the
/// lexicographically first pair. `None` for single-point grids.
pub fn max_commutator_pair(family: &ParametrisedState) -> Option<CommutatorWitness> {
    let n = family.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let norms: Vec<f64> = pairs
        .par_iter()
        .map(|&(i, j)| {
            linalg::operator_norm(&linalg::commutator(
                family.state(i).matrix(),
                family.state(j).matrix(),
            ))
        })
        .collect();
    let mut best: Option<(usize, f64)> = None;
    for (k, &v) in norms.iter().enumerate() {
        if best.is_none_or(|(_, b)| v > b) {
            best = Some((k, v));
        }
    }
    best.map(|(k, v)| {
        let (i, j) = pairs[k];
        CommutatorWitness {
            first: i,
            second: j,
            first_point: family.point(i).to_vec(),
            second_point: family.point(j).to_vec(),
            commutator_norm: v,
        }
    })
}

/// Decides whether the family is classical on its grid.
///
/// The family is classical iff every pairwise commutator has operator norm at
/// most `tol.comm`. The common basis is then built by joint eigenspace
/// refinement: start from the whole space, and for each state split every
/// current block into the eigenspaces of the state restricted to that block.
pub fn classicality_certificate(family: &ParametrisedState, tol: &Tolerances) -> Classicality {
    let max_commutator = match max_commutator_pair(family) {
        Some(w) if w.commutator_norm > tol.comm => return Classicality::NotClassical(w),
        Some(w) => w.commutator_norm,
        None => 0.0,
    };
    let mats: Vec<&ComplexMatrix> = family.states().iter().map(|s| s.matrix()).collect();
    Classicality::Classical {
        basis: common_eigenbasis(&mats, tol.eig_group),
        max_commutator,
    }
}

/// Joint eigenbasis of (approximately) commuting Hermitian matrices, as the
/// columns of a unitary. Eigenvalues within `rel_gap` are grouped before
/// splitting.
pub fn common_eigenbasis(mats: &[&ComplexMatrix], rel_gap: f64) -> ComplexMatrix {
    let dim = mats.first().map(|m| m.nrows()).unwrap_or(0);
    let mut blocks = vec![linalg::identity(dim)];
    for m in mats {
        let mut next = Vec::with_capacity(dim);
        for block in blocks {
            if block.ncols() == 1 {
                next.push(block);
                continue;
            }
            let restricted = block.adjoint() * *m * &block;
            let eig = linalg::eigh(&restricted);
            for g in linalg::group_eigenvalues(&eig.values, rel_gap) {
                next.push(&block * eig.columns(g));
            }
        }
        blocks = next;
        if blocks.len() == dim {
            break;
        }
    }
    let cols: Vec<_> = blocks.iter().flat_map(|b| b.column_iter().map(|c| c.into_owned())).collect();
    ComplexMatrix::from_columns(&cols)
}

/// Restricts the family to the joint support of its states.
///
/// Returns the compressed family together with the isometry `V` (columns span
/// the support) so that each new state is `V^dagger rho V`. Measurements on
/// the compressed space lift back as `V E V^dagger` plus the kernel projector.
pub fn restrict_to_joint_support(
    family: &ParametrisedState,
    tol: &Tolerances,
) -> Result<(ParametrisedState, ComplexMatrix)> {
    let dim = family.hilbert_dim();
    let mut sum = ComplexMatrix::zeros(dim, dim);
    for s in family.states() {
        sum += s.matrix();
    }
    let eig = linalg::eigh(&sum);
    let cut = tol.rank * eig.max_value();
    let keep: Vec<usize> = (0..dim).filter(|&i| eig.values[i] > cut).collect();
    let v = eig.columns(keep);
    let states = family
        .states()
        .iter()
        .map(|s| {
            let m = v.adjoint() * s.matrix() * &v;
            let t = linalg::trace(&m).re;
            DensityMatrix::from_trusted(m * linalg::c(1.0 / t))
        })
        .collect();
    Ok((family.with_states(states)?, v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_family_is_classical() {
        let states = (0..3).map(|_| DensityMatrix::maximally_mixed(2)).collect();
        let fam = ParametrisedState::from_scalar_grid(&[0.0, 1.0, 2.0], states).unwrap();
        let cert = classicality_certificate(&fam, &Tolerances::default());
        match cert {
            Classicality::Classical { basis, .. } => {
                let u = &basis * basis.adjoint();
                assert!(linalg::max_abs(&(u - linalg::identity(2))) < 1e-12);
            }
            _ => panic!("expected classical"),
        }
    }

    #[test]
    fn single_point_has_no_pair() {
        let fam = ParametrisedState::from_scalar_grid(&[0.0], vec![DensityMatrix::maximally_mixed(2)])
            .unwrap();
        assert!(max_commutator_pair(&fam).is_none());
        assert!(classicality_certificate(&fam, &Tolerances::default()).is_classical());
    }

    #[test]
    fn support_restriction_drops_shared_kernel() {
        let a = DensityMatrix::diagonal(&[0.3, 0.7, 0.0]).unwrap();
        let b = DensityMatrix::diagonal(&[0.6, 0.4, 0.0]).unwrap();
        let fam = ParametrisedState::from_scalar_grid(&[0.0, 1.0], vec![a, b]).unwrap();
        let (small, v) = restrict_to_joint_support(&fam, &Tolerances::default()).unwrap();
        assert_eq!(small.hilbert_dim(), 2);
        assert_eq!(v.shape(), (3, 2));
    }
}
