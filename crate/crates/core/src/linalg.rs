//! Small dense complex linear algebra on top of `nalgebra`.
//!
//! Everything here works on `DMatrix<Complex64>`; the Hilbert spaces in this
//! crate are tiny, so nothing tries to be clever about allocation.

use std::ops::Range;

use nalgebra::{DMatrix, DVector, SymmetricEigen, SVD};

use crate::error::{Error, Result};

pub use nalgebra::Complex;

pub type Complex64 = Complex<f64>;
pub type ComplexMatrix = DMatrix<Complex64>;
pub type Ket = DVector<Complex64>;

#[inline]
pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

#[inline]
pub fn ci(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(dim: usize) -> ComplexMatrix {
    ComplexMatrix::identity(dim, dim)
}

pub fn real_diagonal(diag: &[f64]) -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&DVector::from_iterator(diag.len(), diag.iter().map(|&x| c(x))))
}

/// Checks the matrix is square with finite entries and returns its dimension.
pub fn check_square(a: &ComplexMatrix) -> Result<usize> {
    if a.nrows() != a.ncols() {
        return Err(Error::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    if a.nrows() == 0 {
        return Err(Error::NotSquare { rows: 0, cols: 0 });
    }
    if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(a.nrows())
}

/// Largest entry modulus.
pub fn max_abs(a: &ComplexMatrix) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Max-entry residual `|A - A^dagger|`.
pub fn hermitian_residual(a: &ComplexMatrix) -> f64 {
    max_abs(&(a - a.adjoint()))
}

pub fn hermitian_part(a: &ComplexMatrix) -> ComplexMatrix {
    (a + a.adjoint()) * c(0.5)
}

/// Largest singular value.
pub fn operator_norm(a: &ComplexMatrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    SVD::new(a.clone(), false, false).singular_values.max()
}

/// Sum of singular values.
pub fn singular_value_sum(a: &ComplexMatrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    SVD::new(a.clone(), false, false).singular_values.sum()
}

pub fn trace(a: &ComplexMatrix) -> Complex64 {
    a.diagonal().iter().copied().sum()
}

/// `Re Tr(AB)` without forming the product.
pub fn trace_product_re(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            let x = a[(i, j)] * b[(j, i)];
            acc += x.re;
        }
    }
    acc
}

pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a * b - b * a
}

pub fn anticommutator(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a * b + b * a
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// `|v><v|`.
pub fn outer(v: &Ket) -> ComplexMatrix {
    v * v.adjoint()
}

/// `V V^dagger` for a matrix whose columns are orthonormal.
pub fn projector(columns: &ComplexMatrix) -> ComplexMatrix {
    columns * columns.adjoint()
}

/// Eigendecomposition of a Hermitian matrix with ascending eigenvalues.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Eigenvectors as columns, in the order of `values`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn max_value(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn min_value(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    /// Columns of `vectors` for the given eigenvalue indices.
    pub fn columns(&self, idx: impl IntoIterator<Item = usize>) -> ComplexMatrix {
        let idx: Vec<usize> = idx.into_iter().collect();
        self.vectors.select_columns(idx.iter())
    }
}

/// Hermitian eigendecomposition; the input is symmetrised first.
pub fn eigh(a: &ComplexMatrix) -> HermitianEigen {
    let n = a.nrows();
    let eig = SymmetricEigen::new(hermitian_part(a));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    HermitianEigen {
        values: order.iter().map(|&i| eig.eigenvalues[i]).collect(),
        vectors: eig.eigenvectors.select_columns(order.iter()),
    }
}

/// Rebuilds `V diag(values) V^dagger`.
pub fn from_spectrum(values: &[f64], vectors: &ComplexMatrix) -> ComplexMatrix {
    vectors * real_diagonal(values) * vectors.adjoint()
}

/// Splits ascending eigenvalues into runs whose neighbouring gaps are at most
/// `rel_gap * max(1, max |lambda|)`.
pub fn group_eigenvalues(values: &[f64], rel_gap: f64) -> Vec<Range<usize>> {
    if values.is_empty() {
        return Vec::new();
    }
    let scale = values.iter().map(|v| v.abs()).fold(1.0, f64::max);
    let mut groups = Vec::new();
    let mut start = 0;
    for i in 1..values.len() {
        if values[i] - values[i - 1] > rel_gap * scale {
            groups.push(start..i);
            start = i;
        }
    }
    groups.push(start..values.len());
    groups
}

/// Matrix exponential of a Hermitian matrix scaled by a real factor, `exp(t H)`.
pub fn hermitian_exp(h: &ComplexMatrix, t: f64) -> ComplexMatrix {
    let eig = eigh(h);
    let vals: Vec<f64> = eig.values.iter().map(|v| (t * v).exp()).collect();
    from_spectrum(&vals, &eig.vectors)
}

/// Orthonormal basis (as columns) of the span of the given columns.
pub fn orthonormal_columns(a: &ComplexMatrix, rank_tol: f64) -> ComplexMatrix {
    let gram = a * a.adjoint();
    let eig = eigh(&gram);
    let cut = rank_tol * eig.max_value().max(f64::MIN_POSITIVE);
    let keep: Vec<usize> = (0..eig.values.len()).filter(|&i| eig.values[i] > cut).collect();
    eig.columns(keep)
}
