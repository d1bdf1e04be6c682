use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix};
use crate::quantum::DensityMatrix;
use crate::tolerance::Tolerances;

/// A POVM: positive effects, one per outcome, summing to the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    effects: Vec<ComplexMatrix>,
}

impl Povm {
    pub fn new(effects: Vec<ComplexMatrix>, tol: &Tolerances) -> Result<Self> {
        let first = effects.first().ok_or(Error::EmptyMeasurement)?;
        let dim = linalg::check_square(first)?;
        let mut sum = ComplexMatrix::zeros(dim, dim);
        let mut checked = Vec::with_capacity(effects.len());
        for e in effects {
            let d = linalg::check_square(&e)?;
            if d != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: d,
                });
            }
            let residual = linalg::hermitian_residual(&e);
            if residual > tol.herm.max(tol.povm) {
                return Err(Error::NotHermitian { residual });
            }
            let e = linalg::hermitian_part(&e);
            let min_eigenvalue = linalg::eigh(&e).min_value();
            if min_eigenvalue < -tol.psd {
                return Err(Error::NotPsd { min_eigenvalue });
            }
            sum += &e;
            checked.push(e);
        }
        let residual = linalg::max_abs(&(sum - linalg::identity(dim)));
        if residual > tol.povm {
            return Err(Error::IncompleteMeasurement { residual });
        }
        Ok(Povm { effects: checked })
    }

    /// Rank-one projective measurement onto the columns of a unitary.
    pub fn projective(basis: &ComplexMatrix) -> Result<Self> {
        let effects = (0..basis.ncols())
            .map(|i| linalg::projector(&basis.columns(i, 1).into_owned()))
            .collect();
        Povm::new(effects, &Tolerances::default())
    }

    /// Projective measurement onto the spans of several blocks of
    /// orthonormal columns.
    pub fn from_blocks(blocks: &[ComplexMatrix]) -> Result<Self> {
        let effects = blocks.iter().map(linalg::projector).collect();
        Povm::new(effects, &Tolerances::default())
    }

    /// The single-outcome measurement `{1}`.
    pub fn trivial(dim: usize) -> Self {
        Povm {
            effects: vec![linalg::identity(dim)],
        }
    }

    pub fn effects(&self) -> &[ComplexMatrix] {
        &self.effects
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.effects[0].nrows()
    }

    pub(crate) fn from_trusted(effects: Vec<ComplexMatrix>) -> Self {
        Povm {
            effects: effects.iter().map(linalg::hermitian_part).collect(),
        }
    }
}

/// A measurement given by Kraus operators `F_i` with `sum F_i^dagger F_i = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausMeasurement {
    kraus: Vec<ComplexMatrix>,
}

impl KrausMeasurement {
    pub fn new(kraus: Vec<ComplexMatrix>, tol: &Tolerances) -> Result<Self> {
        let first = kraus.first().ok_or(Error::EmptyMeasurement)?;
        let dim = linalg::check_square(first)?;
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for k in &kraus {
            let d = linalg::check_square(k)?;
            if d != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: d,
                });
            }
            sum += k.adjoint() * k;
        }
        let residual = linalg::max_abs(&(sum - linalg::identity(dim)));
        if residual > tol.povm {
            return Err(Error::IncompleteMeasurement { residual });
        }
        Ok(KrausMeasurement { kraus })
    }

    /// `{1}`: do nothing, learn nothing.
    pub fn identity(dim: usize) -> Self {
        KrausMeasurement {
            kraus: vec![linalg::identity(dim)],
        }
    }

    /// Kraus operators equal to the rank-one projectors onto a basis.
    pub fn projective(basis: &ComplexMatrix) -> Result<Self> {
        let kraus = (0..basis.ncols())
            .map(|i| linalg::projector(&basis.columns(i, 1).into_owned()))
            .collect();
        KrausMeasurement::new(kraus, &Tolerances::default())
    }

    pub(crate) fn from_trusted(kraus: Vec<ComplexMatrix>) -> Self {
        KrausMeasurement { kraus }
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn len(&self) -> usize {
        self.kraus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kraus.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.kraus[0].nrows()
    }

    /// The induced POVM `{F_i^dagger F_i}`.
    pub fn povm(&self) -> Povm {
        Povm::from_trusted(self.kraus.iter().map(|k| k.adjoint() * k).collect())
    }
}

/// Outcome probabilities `p_k = Tr(rho M_k)`, clipped into `[0, 1]`.
pub fn outcome_distribution(rho: &DensityMatrix, povm: &Povm) -> Result<Vec<f64>> {
    if rho.dim() != povm.dim() {
        return Err(Error::DimensionMismatch {
            expected: povm.dim(),
            found: rho.dim(),
        });
    }
    Ok(povm
        .effects()
        .iter()
        .map(|e| linalg::trace_product_re(rho.matrix(), e).clamp(0.0, 1.0))
        .collect())
}
