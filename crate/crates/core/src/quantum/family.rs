use crate::error::{Error, Result};
use crate::quantum::{outcome_distribution, DensityMatrix, Povm};

/// A family of states `rho(theta)` sampled on a finite grid of parameter
/// points, each carrying a cell volume used wherever the continuum would need
/// a measure.
#[derive(Debug, Clone, PartialEq)]
pub struct ParametrisedState {
    param_dim: usize,
    grid: Vec<Vec<f64>>,
    states: Vec<DensityMatrix>,
    cell_volumes: Vec<f64>,
}

impl ParametrisedState {
    pub fn new(
        param_dim: usize,
        grid: Vec<Vec<f64>>,
        states: Vec<DensityMatrix>,
        cell_volumes: Vec<f64>,
    ) -> Result<Self> {
        if param_dim == 0 {
            return Err(Error::InvalidGrid("param_dim must be positive".into()));
        }
        if grid.is_empty() {
            return Err(Error::InvalidGrid("grid is empty".into()));
        }
        if states.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                found: states.len(),
            });
        }
        if cell_volumes.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                found: cell_volumes.len(),
            });
        }
        for p in &grid {
            if p.len() != param_dim {
                return Err(Error::DimensionMismatch {
                    expected: param_dim,
                    found: p.len(),
                });
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidGrid("non-finite grid coordinate".into()));
            }
        }
        if cell_volumes.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidGrid("cell volumes must be finite and nonnegative".into()));
        }
        let dim = states[0].dim();
        if let Some(s) = states.iter().find(|s| s.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: s.dim(),
            });
        }
        for i in 0..grid.len() {
            for j in i + 1..grid.len() {
                if grid[i] == grid[j] {
                    return Err(Error::InvalidGrid(format!(
                        "grid points {i} and {j} coincide"
                    )));
                }
            }
        }
        Ok(ParametrisedState {
            param_dim,
            grid,
            states,
            cell_volumes,
        })
    }

    /// Single-parameter family with unit cell volumes.
    pub fn from_scalar_grid(points: &[f64], states: Vec<DensityMatrix>) -> Result<Self> {
        let volumes = vec![1.0; points.len()];
        Self::new(1, points.iter().map(|&t| vec![t]).collect(), states, volumes)
    }

    pub fn param_dim(&self) -> usize {
        self.param_dim
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn hilbert_dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn grid(&self) -> &[Vec<f64>] {
        &self.grid
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.grid[i]
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn state(&self, i: usize) -> &DensityMatrix {
        &self.states[i]
    }

    pub fn cell_volumes(&self) -> &[f64] {
        &self.cell_volumes
    }

    pub fn total_volume(&self) -> f64 {
        self.cell_volumes.iter().sum()
    }

    /// Scalar grid values for a single-parameter family.
    pub fn scalar_points(&self) -> Result<Vec<f64>> {
        if self.param_dim != 1 {
            return Err(Error::MultiParameterUnsupported {
                param_dim: self.param_dim,
            });
        }
        Ok(self.grid.iter().map(|p| p[0]).collect())
    }

    /// Sub-family on the given grid indices, in the given order.
    pub fn restrict(&self, indices: &[usize]) -> Result<Self> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= self.len()) {
            return Err(Error::InvalidGrid(format!("grid index {bad} out of range")));
        }
        Self::new(
            self.param_dim,
            indices.iter().map(|&i| self.grid[i].clone()).collect(),
            indices.iter().map(|&i| self.states[i].clone()).collect(),
            indices.iter().map(|&i| self.cell_volumes[i]).collect(),
        )
    }

    /// `p[theta][k] = Tr(rho(theta) M_k)` for every grid point.
    pub fn probability_table(&self, povm: &Povm) -> Result<Vec<Vec<f64>>> {
        self.states
            .iter()
            .map(|s| outcome_distribution(s, povm))
            .collect()
    }

    /// Same grid and cell volumes, new states.
    pub fn with_states(&self, states: Vec<DensityMatrix>) -> Result<Self> {
        Self::new(
            self.param_dim,
            self.grid.clone(),
            states,
            self.cell_volumes.clone(),
        )
    }
}
