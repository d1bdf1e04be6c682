//! Canonical state families and brute-force oracles.
//!
//! * `MachZehnder`: `|psi(theta)> = (|0> + e^{i theta}|1>)/sqrt(2)`.
//! * `Thermal`: `rho(beta) = exp(-beta H) / Tr exp(-beta H)`.
//! * `Depolarizing`: `rho(p) = (1 - p)|psi><psi| + p 1/d`, `p` in `[0, 1]`.
//! * `DiagonalClassical`: `rho(theta) = diag(theta, 1 - theta)`, `theta` in `[0, 1]`.
//! * `Custom`: a family file.

mod oracle;

pub use oracle::{
    oracle_best_pair, oracle_measurement_grid, BayesRow, OracleCriterion, OracleReport,
    PointwiseWitness,
};

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimation::Estimator;
use crate::io::{family_from_json, matrix_serde};
use crate::linalg::{self, c, ci, ComplexMatrix, Ket};
use crate::quantum::{DensityMatrix, ParametrisedState, Povm};
use crate::tolerance::Tolerances;

/// Parameter grid: an evenly spaced range or explicit points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    Range {
        start: f64,
        end: f64,
        count: usize,
        /// Whether `end` itself is a grid point. Periodic grids leave it out.
        #[serde(default = "default_true")]
        endpoint: bool,
    },
    Points {
        points: Vec<f64>,
    },
}

fn default_true() -> bool {
    true
}

impl GridSpec {
    pub fn range(start: f64, end: f64, count: usize, endpoint: bool) -> Self {
        GridSpec::Range {
            start,
            end,
            count,
            endpoint,
        }
    }

    pub fn points(points: &[f64]) -> Self {
        GridSpec::Points {
            points: points.to_vec(),
        }
    }

    /// Grid points and their cell volumes.
    ///
    /// Periodic ranges give every point the spacing `h`; closed ranges use
    /// trapezoid weights (`h/2` at both ends). Explicit points own the
    /// interval between the midpoints to their neighbours, with end cells
    /// mirrored; a single point gets volume one.
    pub fn resolve(&self) -> Result<(Vec<f64>, Vec<f64>)> {
        match *self {
            GridSpec::Range {
                start,
                end,
                count,
                endpoint,
            } => {
                if count == 0 || !start.is_finite() || !end.is_finite() || end < start {
                    return Err(Error::InvalidRange(format!(
                        "range [{start}, {end}] with {count} points"
                    )));
                }
                if count == 1 {
                    return Ok((vec![start], vec![1.0]));
                }
                let steps = if endpoint { count - 1 } else { count };
                let h = (end - start) / steps as f64;
                if h <= 0.0 {
                    return Err(Error::InvalidRange("zero-width range".into()));
                }
                let pts = (0..count).map(|i| start + h * i as f64).collect();
                let mut vols = vec![h; count];
                if endpoint {
                    vols[0] = h / 2.0;
                    vols[count - 1] = h / 2.0;
                }
                Ok((pts, vols))
            }
            GridSpec::Points { ref points } => {
                if points.is_empty() || points.iter().any(|p| !p.is_finite()) {
                    return Err(Error::InvalidRange("explicit grid must be finite and nonempty".into()));
                }
                Ok((points.clone(), voronoi_volumes(points)))
            }
        }
    }
}

fn voronoi_volumes(points: &[f64]) -> Vec<f64> {
    let n = points.len();
    if n == 1 {
        return vec![1.0];
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| points[a].total_cmp(&points[b]));
    let mut vols = vec![0.0; n];
    for (r, &i) in order.iter().enumerate() {
        let left = if r > 0 { points[i] - points[order[r - 1]] } else { points[order[1]] - points[i] };
        let right = if r + 1 < n { points[order[r + 1]] - points[i] } else { left };
        let left = if r == 0 { right } else { left };
        vols[i] = 0.5 * (left + right);
    }
    vols
}

/// Family kind with its kind-specific parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScenarioKind {
    MachZehnder,
    Thermal {
        #[serde(with = "matrix_serde")]
        hamiltonian: ComplexMatrix,
    },
    Depolarizing {
        /// Real parts of `|psi>`; normalised on use.
        psi_re: Vec<f64>,
        #[serde(default)]
        psi_im: Vec<f64>,
    },
    DiagonalClassical,
    Custom {
        path: String,
    },
}

/// A scenario file: `{"kind": ..., "grid": {...}, ...}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    #[serde(flatten)]
    pub kind: ScenarioKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
}

impl ScenarioSpec {
    pub fn new(kind: ScenarioKind, grid: Option<GridSpec>) -> Self {
        ScenarioSpec { kind, grid }
    }

    /// Built-in shorthand: `mz`, `thermal`, `depol` or `diag`.
    pub fn shorthand(name: &str) -> Result<Self> {
        let kind = match name {
            "mz" => ScenarioKind::MachZehnder,
            "thermal" => ScenarioKind::Thermal {
                hamiltonian: linalg::real_diagonal(&[0.0, 1.0]),
            },
            "depol" => ScenarioKind::Depolarizing {
                psi_re: vec![FRAC_1_SQRT_2, FRAC_1_SQRT_2],
                psi_im: vec![],
            },
            "diag" => ScenarioKind::DiagonalClassical,
            other => {
                return Err(Error::Format(format!(
                    "unknown scenario `{other}` (expected mz, thermal, depol or diag)"
                )))
            }
        };
        Ok(ScenarioSpec { kind, grid: None })
    }

    pub fn with_grid(mut self, grid: GridSpec) -> Self {
        self.grid = Some(grid);
        self
    }

    /// Grid used when none is given.
    pub fn default_grid(&self) -> GridSpec {
        match self.kind {
            ScenarioKind::MachZehnder => GridSpec::range(0.0, 2.0 * PI, 64, false),
            ScenarioKind::Thermal { .. } => GridSpec::range(0.0, 4.0, 17, true),
            ScenarioKind::Depolarizing { .. } | ScenarioKind::DiagonalClassical => {
                GridSpec::range(0.0, 1.0, 11, true)
            }
            ScenarioKind::Custom { .. } => GridSpec::Points { points: vec![] },
        }
    }
}

/// `(|0> + e^{i theta}|1>)/sqrt(2)`.
pub fn mz_ket(theta: f64) -> Ket {
    Ket::from_vec(vec![
        c(FRAC_1_SQRT_2),
        ci(FRAC_1_SQRT_2 * theta.cos(), FRAC_1_SQRT_2 * theta.sin()),
    ])
}

pub fn mach_zehnder(points: &[f64]) -> Result<ParametrisedState> {
    scalar_family(points, |t| Ok(DensityMatrix::from_trusted(linalg::outer(&mz_ket(t)))))
}

/// Interferometer family on the default 64-point periodic grid.
pub fn mach_zehnder_default() -> ParametrisedState {
    build_scenario(&ScenarioSpec::new(ScenarioKind::MachZehnder, None), &Tolerances::default())
        .expect("default grid is valid")
}

pub fn thermal(hamiltonian: &ComplexMatrix, betas: &[f64], tol: &Tolerances) -> Result<ParametrisedState> {
    linalg::check_square(hamiltonian)?;
    let r = linalg::hermitian_residual(hamiltonian);
    if r > tol.herm {
        return Err(Error::NotHermitian { residual: r });
    }
    let h = linalg::hermitian_part(hamiltonian);
    scalar_family(betas, |beta| {
        // shift by the ground energy so large beta does not underflow
        let eig = linalg::eigh(&h);
        let e0 = eig.min_value();
        let w: Vec<f64> = eig.values.iter().map(|e| (-beta * (e - e0)).exp()).collect();
        let z: f64 = w.iter().sum();
        let p: Vec<f64> = w.iter().map(|x| x / z).collect();
        Ok(DensityMatrix::from_trusted(linalg::hermitian_part(&linalg::from_spectrum(&p, &eig.vectors))))
    })
}

pub fn depolarizing(psi: &Ket, ps: &[f64]) -> Result<ParametrisedState> {
    let norm = psi.norm();
    if !(norm.is_finite() && norm > 0.0) {
        return Err(Error::InvalidRange("|psi> must be a nonzero finite vector".into()));
    }
    if let Some(p) = ps.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::InvalidRange(format!("depolarizing strength {p} outside [0, 1]")));
    }
    let d = psi.len();
    let pure = linalg::outer(&(psi / c(norm)));
    scalar_family(ps, |p| {
        let m = &pure * c(1.0 - p) + linalg::identity(d) * c(p / d as f64);
        Ok(DensityMatrix::from_trusted(linalg::hermitian_part(&m)))
    })
}

pub fn diagonal_classical(thetas: &[f64]) -> Result<ParametrisedState> {
    if let Some(t) = thetas.iter().find(|t| !(0.0..=1.0).contains(*t)) {
        return Err(Error::InvalidRange(format!("theta {t} outside [0, 1]")));
    }
    scalar_family(thetas, |t| DensityMatrix::diagonal(&[t, 1.0 - t]))
}

fn scalar_family(
    points: &[f64],
    mut state: impl FnMut(f64) -> Result<DensityMatrix>,
) -> Result<ParametrisedState> {
    let states = points.iter().map(|&t| state(t)).collect::<Result<Vec<_>>>()?;
    ParametrisedState::new(1, points.iter().map(|t| vec![*t]).collect(), states, voronoi_volumes(points))
}

/// Builds and validates the family described by `spec`.
pub fn build_scenario(spec: &ScenarioSpec, tol: &Tolerances) -> Result<ParametrisedState> {
    if let ScenarioKind::Custom { path } = &spec.kind {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Format(format!("cannot read `{path}`: {e}")))?;
        return family_from_json(&text, tol);
    }
    let (points, volumes) = spec.grid.clone().unwrap_or_else(|| spec.default_grid()).resolve()?;
    let fam = match &spec.kind {
        ScenarioKind::MachZehnder => mach_zehnder(&points)?,
        ScenarioKind::Thermal { hamiltonian } => thermal(hamiltonian, &points, tol)?,
        ScenarioKind::Depolarizing { psi_re, psi_im } => {
            if !psi_im.is_empty() && psi_im.len() != psi_re.len() {
                return Err(Error::DimensionMismatch {
                    expected: psi_re.len(),
                    found: psi_im.len(),
                });
            }
            let psi = Ket::from_fn(psi_re.len(), |i, _| ci(psi_re[i], psi_im.get(i).copied().unwrap_or(0.0)));
            depolarizing(&psi, &points)?
        }
        ScenarioKind::DiagonalClassical => diagonal_classical(&points)?,
        ScenarioKind::Custom { .. } => unreachable!(),
    };
    let states = fam
        .states()
        .iter()
        .map(|s| DensityMatrix::new(s.matrix().clone(), tol))
        .collect::<Result<Vec<_>>>()?;
    ParametrisedState::new(1, fam.grid().to_vec(), states, volumes)
}

/// The interferometer worked example: the `+/-` basis `m`, the tilted basis
/// `f` with `|e1> = (|0> + e^{i pi/4}|1>)/sqrt(2)` and
/// `|e2> = (e^{-i pi/4}|0> - |1>)/sqrt(2)`, and the estimator
/// `f_estimator = (pi/4, pi/2)` on `f`.
#[derive(Debug, Clone)]
pub struct MzMeasurements {
    pub m: Povm,
    pub f: Povm,
    pub f_estimator: Estimator,
}

pub fn mz_measurements() -> MzMeasurements {
    let s = FRAC_1_SQRT_2;
    let pm = ComplexMatrix::from_row_slice(2, 2, &[c(s), c(s), c(s), c(-s)]);
    let (cq, sq) = (FRAC_PI_4.cos(), FRAC_PI_4.sin());
    // columns e1, e2
    let e = ComplexMatrix::from_row_slice(
        2,
        2,
        &[c(s), ci(s * cq, -s * sq), ci(s * cq, s * sq), c(-s)],
    );
    MzMeasurements {
        m: Povm::projective(&pm).expect("orthonormal"),
        f: Povm::projective(&e).expect("orthonormal"),
        f_estimator: Estimator::scalar(&[FRAC_PI_4, FRAC_PI_2]).expect("finite"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;
    use crate::quantum::outcome_distribution;

    #[test]
    fn mz_at_pi_is_minus() {
        let fam = mach_zehnder(&[PI]).unwrap();
        let minus = ComplexMatrix::from_row_slice(2, 2, &[c(0.5), c(-0.5), c(-0.5), c(0.5)]);
        assert!(max_abs(&(fam.state(0).matrix() - minus)) < 1e-15);
    }

    #[test]
    fn thermal_infinite_temperature() {
        let fam = thermal(&linalg::real_diagonal(&[0.0, 1.0]), &[0.0], &Tolerances::default()).unwrap();
        assert!(max_abs(&(fam.state(0).matrix() - linalg::identity(2) * c(0.5))) < 1e-15);
    }

    #[test]
    fn depolarizing_full_strength_is_mixed() {
        let psi = Ket::from_vec(vec![c(1.0), c(2.0), c(0.0)]);
        let fam = depolarizing(&psi, &[1.0]).unwrap();
        assert!(max_abs(&(fam.state(0).matrix() - linalg::identity(3) * c(1.0 / 3.0))) < 1e-15);
        assert!(matches!(depolarizing(&psi, &[1.2]), Err(Error::InvalidRange(_))));
    }

    #[test]
    fn default_mz_grid() {
        let fam = mach_zehnder_default();
        assert_eq!(fam.len(), 64);
        assert!((fam.total_volume() - 2.0 * PI).abs() < 1e-12);
        assert_eq!(fam.point(0), &[0.0]);
    }

    #[test]
    fn mz_measurement_probabilities() {
        let mz = mz_measurements();
        let fam = mach_zehnder_default();
        for (rho, theta) in fam.states().iter().zip(fam.grid()) {
            let t = theta[0];
            let pm = outcome_distribution(rho, &mz.m).unwrap();
            assert!((pm[0] - (t / 2.0).cos().powi(2)).abs() < 1e-12);
            let pf = outcome_distribution(rho, &mz.f).unwrap();
            assert!((pf[0] - ((t - FRAC_PI_4) / 2.0).cos().powi(2)).abs() < 1e-12);
            assert!((pf[1] - ((t - FRAC_PI_4) / 2.0).sin().powi(2)).abs() < 1e-12);
        }
    }

    #[test]
    fn spec_round_trip() {
        let spec: ScenarioSpec = serde_json::from_str(
            r#"{"kind": "depolarizing", "psi_re": [1, 0], "grid": {"points": [0, 0.5, 1]}}"#,
        )
        .unwrap();
        let fam = build_scenario(&spec, &Tolerances::default()).unwrap();
        assert_eq!(fam.len(), 3);
        assert_eq!(fam.cell_volumes(), &[0.5, 0.5, 0.5]);
        let spec: ScenarioSpec =
            serde_json::from_str(r#"{"kind": "mach_zehnder", "grid": {"start": 0, "end": 1, "count": 3}}"#).unwrap();
        let fam = build_scenario(&spec, &Tolerances::default()).unwrap();
        assert_eq!(fam.cell_volumes(), &[0.25, 0.5, 0.25]);
        assert!(ScenarioSpec::shorthand("nope").is_err());
    }

    #[test]
    fn out_of_range_grid_is_rejected() {
        let spec = ScenarioSpec::shorthand("diag").unwrap().with_grid(GridSpec::range(-0.5, 1.0, 4, true));
        assert!(matches!(build_scenario(&spec, &Tolerances::default()), Err(Error::InvalidRange(_))));
    }
}
