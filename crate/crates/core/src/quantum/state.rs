use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, Ket};
use crate::tolerance::Tolerances;

/// A Hermitian, positive semi-definite, unit-trace matrix.
///
/// The stored matrix is the Hermitian part of whatever was validated, so
/// downstream code can rely on exact Hermiticity.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

/// Checks the three density-matrix invariants in the order Hermitian, PSD,
/// unit trace, reporting the residual of the first one that fails.
pub fn validate_state(mat: &ComplexMatrix, tol: &Tolerances) -> Result<DensityMatrix> {
    linalg::check_square(mat)?;
    let residual = linalg::hermitian_residual(mat);
    if residual > tol.herm {
        return Err(Error::NotHermitian { residual });
    }
    let herm = linalg::hermitian_part(mat);
    let min_eigenvalue = linalg::eigh(&herm).min_value();
    if min_eigenvalue < -tol.psd {
        return Err(Error::NotPsd { min_eigenvalue });
    }
    let trace = linalg::trace(&herm).re;
    if (trace - 1.0).abs() > tol.trace {
        return Err(Error::TraceNotOne { trace });
    }
    Ok(DensityMatrix { mat: herm })
}

impl DensityMatrix {
    pub fn new(mat: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        validate_state(&mat, tol)
    }

    /// Pure state `|psi><psi|`; the ket is normalised first.
    pub fn from_ket(ket: &Ket) -> Result<Self> {
        let norm = ket.norm();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::InvalidRange("ket has zero or non-finite norm".into()));
        }
        let v = ket.unscale(norm);
        Ok(DensityMatrix {
            mat: linalg::hermitian_part(&linalg::outer(&v)),
        })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix {
            mat: linalg::identity(dim) * linalg::c(1.0 / dim as f64),
        }
    }

    /// Diagonal state from a probability vector.
    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        validate_state(&linalg::real_diagonal(probs), &Tolerances::default())
    }

    /// Wraps a matrix already known to be a state (e.g. a convex combination
    /// of states). Only the Hermitian part is kept.
    pub(crate) fn from_trusted(mat: ComplexMatrix) -> Self {
        DensityMatrix {
            mat: linalg::hermitian_part(&mat),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }
}
