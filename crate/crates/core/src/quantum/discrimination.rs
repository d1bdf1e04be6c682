use crate::error::{Error, Result};
use crate::linalg;
use crate::quantum::{trace_norm, DensityMatrix, KrausMeasurement, Povm};
use crate::tolerance::Tolerances;

/// Optimal two-outcome measurement for telling `rho1` from `rho2`.
///
/// Outcome 0 projects onto the nonnegative eigenspace of `rho1 - rho2`
/// (eigenvalues down to `-tol.psd` count as zero and land here), outcome 1
/// onto its complement. The gap `p_0(rho1) - p_0(rho2)` equals half the trace
/// norm of the difference.
pub fn helstrom_measurement(
    rho1: &DensityMatrix,
    rho2: &DensityMatrix,
    tol: &Tolerances,
) -> Result<Povm> {
    if rho1.dim() != rho2.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho1.dim(),
            found: rho2.dim(),
        });
    }
    let diff = rho1.matrix() - rho2.matrix();
    let norm = trace_norm(&diff);
    if norm <= tol.eq {
        return Err(Error::StatesEqual { trace_norm: norm });
    }
    let eig = linalg::eigh(&diff);
    let (nonneg, neg): (Vec<usize>, Vec<usize>) =
        (0..eig.values.len()).partition(|&i| eig.values[i] >= -tol.psd);
    let p0 = linalg::projector(&eig.columns(nonneg));
    let p1 = linalg::projector(&eig.columns(neg));
    Ok(Povm::from_trusted(vec![p0, p1]))
}

/// `F_i rho F_i^dagger / Tr(F_i rho F_i^dagger)`.
pub fn post_measurement_state(
    rho: &DensityMatrix,
    kraus: &KrausMeasurement,
    outcome: usize,
    tol: &Tolerances,
) -> Result<DensityMatrix> {
    if rho.dim() != kraus.dim() {
        return Err(Error::DimensionMismatch {
            expected: kraus.dim(),
            found: rho.dim(),
        });
    }
    let f = kraus
        .operators()
        .get(outcome)
        .ok_or(Error::DimensionMismatch {
            expected: kraus.len(),
            found: outcome + 1,
        })?;
    let unnormalised = f * rho.matrix() * f.adjoint();
    let probability = linalg::trace(&unnormalised).re;
    if probability <= tol.prob {
        return Err(Error::OutcomeImpossible {
            outcome,
            probability,
        });
    }
    Ok(DensityMatrix::from_trusted(
        unnormalised * linalg::c(1.0 / probability),
    ))
}
