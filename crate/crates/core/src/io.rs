//! JSON exchange formats.
//!
//! Matrices travel as `{"dim": n, "re": [[...]], "im": [[...]]}` (row-major,
//! `im` optional on input). Families travel as
//! `{"param_dim": N, "grid": [[...]], "cell_volumes": [...], "states": [...]}`.
//! Floats are written with shortest round-trip formatting.

use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ci, ComplexMatrix};
use crate::quantum::{DensityMatrix, KrausMeasurement, ParametrisedState, Povm};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default)]
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let rows = |f: fn(&crate::linalg::Complex64) -> f64| {
            (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| f(&m[(i, j)])).collect())
                .collect()
        };
        MatrixJson {
            dim: m.nrows(),
            re: rows(|z| z.re),
            im: rows(|z| z.im),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let n = self.dim;
        if n == 0 {
            return Err(Error::Format("matrix dim must be positive".into()));
        }
        let shape_ok = |rows: &Vec<Vec<f64>>| rows.len() == n && rows.iter().all(|r| r.len() == n);
        if !shape_ok(&self.re) {
            return Err(Error::Format(format!("`re` is not {n}x{n}")));
        }
        if !self.im.is_empty() && !shape_ok(&self.im) {
            return Err(Error::Format(format!("`im` is not {n}x{n}")));
        }
        Ok(ComplexMatrix::from_fn(n, n, |i, j| {
            let im = if self.im.is_empty() { 0.0 } else { self.im[i][j] };
            ci(self.re[i][j], im)
        }))
    }
}

/// `serde(with = ...)` adaptor for a single matrix.
pub mod matrix_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &ComplexMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson::from_matrix(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<ComplexMatrix, D::Error> {
        MatrixJson::deserialize(d)?
            .to_matrix()
            .map_err(serde::de::Error::custom)
    }
}

/// Serialises `f64` values, writing non-finite ones as the strings
/// `"Infinity"`, `"-Infinity"` or `"NaN"`.
pub mod extended_f64 {
    use serde::Serializer;

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if v.is_nan() {
            s.serialize_str("NaN")
        } else if *v > 0.0 {
            s.serialize_str("Infinity")
        } else {
            s.serialize_str("-Infinity")
        }
    }
}

impl Serialize for DensityMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson::from_matrix(self.matrix()).serialize(s)
    }
}

impl Serialize for Povm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Povm", 1)?;
        let effects: Vec<MatrixJson> = self.effects().iter().map(MatrixJson::from_matrix).collect();
        st.serialize_field("effects", &effects)?;
        st.end()
    }
}

impl Serialize for KrausMeasurement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("KrausMeasurement", 1)?;
        let kraus: Vec<MatrixJson> = self.operators().iter().map(MatrixJson::from_matrix).collect();
        st.serialize_field("kraus", &kraus)?;
        st.end()
    }
}

impl Serialize for ParametrisedState {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ParametrisedState", 4)?;
        st.serialize_field("param_dim", &self.param_dim())?;
        st.serialize_field("grid", self.grid())?;
        st.serialize_field("cell_volumes", self.cell_volumes())?;
        st.serialize_field("states", self.states())?;
        st.end()
    }
}

#[derive(Deserialize)]
struct StateFile {
    param_dim: usize,
    grid: Vec<Vec<f64>>,
    #[serde(default)]
    cell_volumes: Option<Vec<f64>>,
    states: Vec<MatrixJson>,
}

#[derive(Deserialize)]
struct PovmFile {
    effects: Vec<MatrixJson>,
}

#[derive(Deserialize)]
struct KrausFile {
    kraus: Vec<MatrixJson>,
}

fn parse<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
}

pub fn matrix_from_json(text: &str) -> Result<ComplexMatrix> {
    parse::<MatrixJson>(text)?.to_matrix()
}

/// Parses and validates a family file. Missing `cell_volumes` default to one.
pub fn family_from_json(text: &str, tol: &Tolerances) -> Result<ParametrisedState> {
    let f: StateFile = parse(text)?;
    let states = f
        .states
        .iter()
        .map(|m| DensityMatrix::new(m.to_matrix()?, tol))
        .collect::<Result<Vec<_>>>()?;
    let volumes = f.cell_volumes.unwrap_or_else(|| vec![1.0; f.grid.len()]);
    ParametrisedState::new(f.param_dim, f.grid, states, volumes)
}

pub fn povm_from_json(text: &str, tol: &Tolerances) -> Result<Povm> {
    let f: PovmFile = parse(text)?;
    let effects = f.effects.iter().map(MatrixJson::to_matrix).collect::<Result<Vec<_>>>()?;
    Povm::new(effects, tol)
}

pub fn kraus_from_json(text: &str, tol: &Tolerances) -> Result<KrausMeasurement> {
    let f: KrausFile = parse(text)?;
    let ops = f.kraus.iter().map(MatrixJson::to_matrix).collect::<Result<Vec<_>>>()?;
    KrausMeasurement::new(ops, tol)
}

/// Pretty JSON for any serialisable report.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialise infallibly")
}
