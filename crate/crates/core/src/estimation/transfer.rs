use crate::error::{Error, Result};
use crate::estimation::Estimator;
use crate::linalg::{self, ComplexMatrix};
use crate::quantum::Povm;

/// `m[k][i] = <i| F_k |i>` for the columns `|i>` of `basis`.
///
/// Each column of `m` (fixed `i`) is a probability vector over the outcomes
/// of `F`.
pub fn transfer_weights(basis: &ComplexMatrix, povm: &Povm) -> Result<Vec<Vec<f64>>> {
    if basis.nrows() != povm.dim() {
        return Err(Error::DimensionMismatch {
            expected: povm.dim(),
            found: basis.nrows(),
        });
    }
    Ok(povm
        .effects()
        .iter()
        .map(|e| {
            (0..basis.ncols())
                .map(|i| {
                    let v = basis.column(i);
                    (v.adjoint() * e * v)[(0, 0)].re.max(0.0)
                })
                .collect()
        })
        .collect())
}

/// Estimator for the projective measurement in `basis` that matches or beats
/// the given estimator on `povm` whenever the family is diagonal in `basis`
/// and the loss is convex in its first argument:
/// `estimate(i) = sum_k m[k][i] * other(k)`, coordinate-wise.
pub fn transfer_estimator(
    basis: &ComplexMatrix,
    povm: &Povm,
    other: &Estimator,
) -> Result<Estimator> {
    other.check_outcomes(povm.len())?;
    linalg::check_square(basis)?;
    let m = transfer_weights(basis, povm)?;
    let n = other.param_dim();
    let values = (0..basis.ncols())
        .map(|i| {
            let total: f64 = m.iter().map(|row| row[i]).sum();
            let mut v = vec![0.0; n];
            for (k, row) in m.iter().enumerate() {
                for (slot, x) in v.iter_mut().zip(other.value(k)) {
                    *slot += row[i] * x;
                }
            }
            // renormalise away roundoff in sum_k m[k][i] = 1
            v.iter_mut().for_each(|x| *x /= total);
            v
        })
        .collect();
    Estimator::new(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    #[test]
    fn same_basis_copies_estimator() {
        let basis = linalg::identity(2);
        let f = Povm::projective(&basis).unwrap();
        let est = Estimator::scalar(&[0.3, 1.7]).unwrap();
        let t = transfer_estimator(&basis, &f, &est).unwrap();
        assert_eq!(t, est);
    }

    #[test]
    fn trivial_measurement_gives_constant() {
        let basis = linalg::identity(3);
        let est = Estimator::new(vec![vec![0.4, -1.0]]).unwrap();
        let t = transfer_estimator(&basis, &Povm::trivial(3), &est).unwrap();
        assert!(t.values().iter().all(|v| v == &vec![0.4, -1.0]));
    }

    #[test]
    fn unbiased_basis_averages() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let pm = ComplexMatrix::from_row_slice(2, 2, &[c(s), c(s), c(s), c(-s)]);
        let f = Povm::projective(&pm).unwrap();
        let t = transfer_estimator(&linalg::identity(2), &f, &Estimator::scalar(&[1.0, 4.0]).unwrap())
            .unwrap();
        for v in t.scalars().unwrap() {
            assert!((v - 2.5).abs() < 1e-14);
        }
    }
}
