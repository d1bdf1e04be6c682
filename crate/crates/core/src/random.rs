//! Seeded random instances: states, measurements, estimators, families.
//!
//! Everything draws from a caller-supplied [`rand::Rng`], so a single
//! `ChaCha8Rng::seed_from_u64(seed)` reproduces a whole sweep.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::bayes::Prior;
use crate::error::Result;
use crate::estimation::Estimator;
use crate::linalg::{self, ci, eigh, from_spectrum, ComplexMatrix};
use crate::quantum::{DensityMatrix, KrausMeasurement, ParametrisedState, Povm};

/// Generator used by every seeded sweep.
pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        ci(re, im)
    })
}

/// Mixed state `G G^dagger / Tr(G G^dagger)` with `G` a `dim x rank` Ginibre
/// matrix.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> DensityMatrix {
    let g = ginibre(rng, dim, rank.max(1));
    let m = &g * g.adjoint();
    let t = linalg::trace(&m).re;
    DensityMatrix::from_trusted(linalg::hermitian_part(&(m / linalg::c(t))))
}

pub fn random_pure_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DensityMatrix {
    random_state(rng, dim, 1)
}

/// Haar-random unitary via QR of a Ginibre matrix with the phases of `R`'s
/// diagonal removed.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let qr = ginibre(rng, dim, dim).qr();
    let (q, r) = qr.unpack();
    let phases = ComplexMatrix::from_fn(dim, dim, |i, j| {
        if i == j {
            let z = r[(i, i)];
            if z.norm() > 0.0 {
                z / z.norm()
            } else {
                linalg::c(1.0)
            }
        } else {
            linalg::c(0.0)
        }
    });
    q * phases
}

/// Kraus measurement `K_k = G_k S^{-1/2}` with `S = sum_k G_k^dagger G_k`.
pub fn random_kraus<R: Rng + ?Sized>(rng: &mut R, dim: usize, outcomes: usize) -> KrausMeasurement {
    let gs: Vec<ComplexMatrix> = (0..outcomes.max(1)).map(|_| ginibre(rng, dim, dim)).collect();
    let s: ComplexMatrix = gs.iter().map(|g| g.adjoint() * g).sum();
    let eig = eigh(&s);
    let inv_sqrt: Vec<f64> = eig.values.iter().map(|v| 1.0 / v.sqrt()).collect();
    let s_inv_sqrt = from_spectrum(&inv_sqrt, &eig.vectors);
    let ops = gs.iter().map(|g| g * &s_inv_sqrt).collect();
    KrausMeasurement::from_trusted(ops)
}

pub fn random_povm<R: Rng + ?Sized>(rng: &mut R, dim: usize, outcomes: usize) -> Povm {
    random_kraus(rng, dim, outcomes).povm()
}

/// Rank-one projective measurement in a Haar-random basis.
pub fn random_projective<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Povm {
    Povm::projective(&random_unitary(rng, dim)).expect("unitary columns are a basis")
}

/// Scalar estimator with values uniform in `[lo, hi)`.
pub fn random_estimator<R: Rng + ?Sized>(rng: &mut R, outcomes: usize, lo: f64, hi: f64) -> Estimator {
    let v: Vec<f64> = (0..outcomes).map(|_| rng.random_range(lo..hi)).collect();
    Estimator::scalar(&v).expect("finite nonempty values")
}

/// Flat-Dirichlet prior over `n` points.
pub fn random_prior<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Prior {
    let w: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
    Prior::from_unnormalised(&w).expect("positive weights")
}

/// Strictly increasing scalar grid of `n` points in `[0, n)`.
pub fn random_scalar_grid<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|i| i as f64 + rng.random_range(0.05..0.95)).collect()
}

/// Family diagonal in a random (or given) basis with random spectra.
pub fn random_classical_family<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    points: usize,
    basis: Option<&ComplexMatrix>,
) -> ParametrisedState {
    let u = basis.cloned().unwrap_or_else(|| random_unitary(rng, dim));
    let grid = random_scalar_grid(rng, points);
    let states = (0..points)
        .map(|_| {
            let w: Vec<f64> = (0..dim).map(|_| Exp1.sample(rng)).collect();
            let total: f64 = w.iter().sum();
            let p: Vec<f64> = w.iter().map(|x| x / total).collect();
            DensityMatrix::from_trusted(linalg::hermitian_part(&from_spectrum(&p, &u)))
        })
        .collect();
    ParametrisedState::from_scalar_grid(&grid, states).expect("valid random family")
}

/// Family of independent random states (generically non-commuting).
pub fn random_family<R: Rng + ?Sized>(rng: &mut R, dim: usize, points: usize, rank: usize) -> ParametrisedState {
    let grid = random_scalar_grid(rng, points);
    let states = (0..points).map(|_| random_state(rng, dim, rank)).collect();
    ParametrisedState::from_scalar_grid(&grid, states).expect("valid random family")
}

/// `(1 - eps) sigma(theta) + eps tau(theta)` with random full-rank `tau`.
pub fn perturb_family<R: Rng + ?Sized>(rng: &mut R, family: &ParametrisedState, eps: f64) -> Result<ParametrisedState> {
    let d = family.hilbert_dim();
    let states = family
        .states()
        .iter()
        .map(|s| {
            let tau = random_state(rng, d, d);
            let m = s.matrix() * linalg::c(1.0 - eps) + tau.matrix() * linalg::c(eps);
            DensityMatrix::from_trusted(linalg::hermitian_part(&m))
        })
        .collect();
    family.with_states(states)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;
    use crate::tolerance::Tolerances;

    #[test]
    fn generators_respect_invariants() {
        let tol = Tolerances::default();
        let mut rng = seeded(7);
        for dim in 1..=4 {
            let s = random_state(&mut rng, dim, dim);
            assert!(DensityMatrix::new(s.matrix().clone(), &tol).is_ok());
            let u = random_unitary(&mut rng, dim);
            assert!(max_abs(&(u.adjoint() * &u - linalg::identity(dim))) < 1e-12);
            let k = random_kraus(&mut rng, dim, 3);
            assert!(KrausMeasurement::new(k.operators().to_vec(), &tol).is_ok());
            let p = random_povm(&mut rng, dim, 3);
            assert!(Povm::new(p.effects().to_vec(), &tol).is_ok());
        }
    }

    #[test]
    fn seeding_is_reproducible() {
        let a = random_family(&mut seeded(3), 2, 4, 2);
        let b = random_family(&mut seeded(3), 2, 4, 2);
        assert_eq!(a, b);
    }

    #[test]
    fn classical_family_is_classical() {
        let fam = random_classical_family(&mut seeded(11), 3, 5, None);
        assert!(crate::quantum::classicality_certificate(&fam, &Tolerances::default()).is_classical());
    }
}
