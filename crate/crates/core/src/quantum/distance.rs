use crate::linalg::{self, ComplexMatrix};
use crate::quantum::DensityMatrix;
use crate::tolerance::Tolerances;

/// `Tr sqrt(A^dagger A)`, the sum of singular values. Hermitian input takes
/// the eigenvalue route (sum of absolute eigenvalues).
pub fn trace_norm(a: &ComplexMatrix) -> f64 {
    if a.is_square() && linalg::hermitian_residual(a) <= 1e-14 * linalg::max_abs(a).max(1.0) {
        linalg::eigh(a).values.iter().map(|v| v.abs()).sum()
    } else {
        linalg::singular_value_sum(a)
    }
}

/// `||rho - sigma||_1 / 2`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> f64 {
    0.5 * trace_norm(&(rho.matrix() - sigma.matrix()))
}

/// Max-relative entropy `inf { gamma : rho <= e^gamma sigma }` (natural log).
///
/// Returns `+inf` when `rho` has weight above `tol.psd` on the kernel of
/// `sigma`, where the kernel is every eigenvector with eigenvalue at most
/// `tol.rank * lambda_max(sigma)`. Otherwise the result is
/// `ln lambda_max(sigma^{-1/2} rho sigma^{-1/2})` on the support of `sigma`,
/// floored at zero.
pub fn d_max(rho: &DensityMatrix, sigma: &DensityMatrix, tol: &Tolerances) -> f64 {
    let eig = linalg::eigh(sigma.matrix());
    let cut = tol.rank * eig.max_value();
    let (support, kernel): (Vec<usize>, Vec<usize>) =
        (0..eig.values.len()).partition(|&i| eig.values[i] > cut);
    if !kernel.is_empty() {
        let k = eig.columns(kernel.iter().copied());
        let leak = linalg::trace(&(k.adjoint() * rho.matrix() * &k)).re;
        if leak > tol.psd {
            return f64::INFINITY;
        }
    }
    let v = eig.columns(support.iter().copied());
    let inv_sqrt: Vec<f64> = support.iter().map(|&i| eig.values[i].powf(-0.5)).collect();
    let d = linalg::real_diagonal(&inv_sqrt);
    let w = &d * v.adjoint() * rho.matrix() * &v * &d;
    let lmax = linalg::eigh(&w).max_value();
    if lmax <= 0.0 {
        return 0.0;
    }
    lmax.ln().max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, real_diagonal};
    use std::f64::consts::LN_2;

    #[test]
    fn trace_norm_of_signature_matrix() {
        assert!((trace_norm(&real_diagonal(&[1.0, -1.0])) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn trace_norm_of_non_hermitian_uses_singular_values() {
        // [[0, 2], [0, 0]] has singular values 2 and 0
        let a = ComplexMatrix::from_row_slice(2, 2, &[c(0.0), c(2.0), c(0.0), c(0.0)]);
        assert!((trace_norm(&a) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn d_max_of_equal_states_is_zero() {
        let tol = Tolerances::default();
        let rho = DensityMatrix::diagonal(&[0.3, 0.7]).unwrap();
        assert!(d_max(&rho, &rho, &tol).abs() < 1e-12);
    }

    #[test]
    fn d_max_diagonal_ratio() {
        let tol = Tolerances::default();
        let mixed = DensityMatrix::maximally_mixed(2);
        let sigma = DensityMatrix::diagonal(&[0.75, 0.25]).unwrap();
        // need e^gamma >= max(0.5/0.75, 0.5/0.25) = 2
        assert!((d_max(&mixed, &sigma, &tol) - LN_2).abs() < 1e-12);
        let zero = DensityMatrix::diagonal(&[1.0, 0.0]).unwrap();
        assert!((d_max(&zero, &mixed, &tol) - LN_2).abs() < 1e-12);
    }

    #[test]
    fn d_max_support_violation_is_infinite() {
        let tol = Tolerances::default();
        let mixed = DensityMatrix::maximally_mixed(2);
        let zero = DensityMatrix::diagonal(&[1.0, 0.0]).unwrap();
        assert_eq!(d_max(&mixed, &zero, &tol), f64::INFINITY);
    }
}
