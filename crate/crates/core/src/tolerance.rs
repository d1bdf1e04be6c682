use serde::{Deserialize, Serialize};

/// Numerical tolerances shared by every check in the crate.
///
/// The defaults are sized for double-precision eigensolvers on matrices of
/// dimension at most 64.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Max-entry residual of `A - A^dagger`.
    pub herm: f64,
    /// Allowed `|Tr(rho) - 1|`.
    pub trace: f64,
    /// Most negative eigenvalue accepted as zero.
    pub psd: f64,
    /// Max-entry residual of `sum_k M_k - 1`.
    pub povm: f64,
    /// Operator norm below which two states are treated as commuting.
    pub comm: f64,
    /// Probabilities at or below this are treated as zero.
    pub prob: f64,
    /// Eigenvalues below `rank * lambda_max` are kernel.
    pub rank: f64,
    /// Trace-norm distance below which two states are equal.
    pub eq: f64,
    /// Risk comparison slack for domination checks.
    pub dom: f64,
    /// Relative gap below which eigenvalues are grouped into one eigenspace.
    pub eig_group: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            herm: 1e-10,
            trace: 1e-10,
            psd: 1e-9,
            povm: 1e-9,
            comm: 1e-8,
            prob: 1e-12,
            rank: 1e-10,
            eq: 1e-8,
            dom: 1e-9,
            eig_group: 1e-8,
        }
    }
}

impl Tolerances {
    /// Overrides one tolerance by name. Returns `false` for an unknown key.
    pub fn set(&mut self, key: &str, value: f64) -> bool {
        let slot = match key {
            "herm" => &mut self.herm,
            "trace" => &mut self.trace,
            "psd" => &mut self.psd,
            "povm" => &mut self.povm,
            "comm" => &mut self.comm,
            "prob" => &mut self.prob,
            "rank" => &mut self.rank,
            "eq" => &mut self.eq,
            "dom" => &mut self.dom,
            "eig_group" | "eig-group" => &mut self.eig_group,
            _ => return false,
        };
        *slot = value;
        true
    }
}
