use std::f64::consts::PI;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qrisk::Tolerances;

use crate::error::CliError;

/// Risk, optimality, Bayes and admissibility analyses for quantum
/// measurements on finite parameter grids.
///
/// Tolerances are overridden with `--tol-KEY=VALUE`, where KEY is one of
/// herm, trace, psd, povm, comm, prob, rank, eq, dom, eig_group.
#[derive(Debug, Parser)]
#[command(name = "qrisk", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Family file (JSON with param_dim, grid, states).
    #[arg(long, global = true, conflicts_with = "scenario")]
    pub state: Option<PathBuf>,

    /// Built-in scenario (mz, thermal, depol, diag) or a scenario JSON file.
    #[arg(long, global = true)]
    pub scenario: Option<String>,

    /// Grid for a scenario, as a comma list; accepts forms like pi/4 or 3pi/2.
    #[arg(long, global = true, requires = "scenario")]
    pub grid: Option<String>,

    /// Measurement file with POVM effects.
    #[arg(long, global = true)]
    pub povm: Option<PathBuf>,

    /// Measurement file with Kraus operators.
    #[arg(long, global = true)]
    pub kraus: Option<PathBuf>,

    /// Estimator file; repeat to pass several.
    #[arg(long, global = true)]
    pub estimator: Vec<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = LossArg::Ls)]
    pub loss: LossArg,

    /// Prior file (`{"weights": [...]}`); uniform when omitted.
    #[arg(long, global = true)]
    pub prior: Option<PathBuf>,

    /// Seed for every random sweep.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Output path, or `json` / `csv` to print in that format.
    #[arg(long, global = true)]
    pub out: Option<String>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LossArg {
    Ls,
    Kl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Risk profile of a measurement and estimator.
    Risk,
    /// Optimal measurement for a classical family, or a no-go witness.
    Certify,
    /// Least-squares Bayes measurement and estimator under a prior.
    Bayes {
        /// Keep every eigenvector of the estimator operator as its own outcome.
        #[arg(long)]
        fine_grained: bool,
        /// Number of seeded random competitors to compare against.
        #[arg(long, default_value_t = 0)]
        competitors: usize,
    },
    /// Approximate-optimality bound against a classical reference.
    Bounds {
        #[arg(long, value_enum, default_value_t = BoundKind::Additive)]
        kind: BoundKind,
        /// Classical reference family (additive and multiplicative bounds).
        #[arg(long)]
        reference: Option<PathBuf>,
        /// Loss diameter of the estimate range; the grid diameter by default.
        #[arg(long)]
        diameter: Option<f64>,
        /// Number of seeded random competitors used to check the bound.
        #[arg(long, default_value_t = 0)]
        competitors: usize,
    },
    /// Dominating construction for a refineable or uninformative measurement.
    Admissibility,
    /// Brute-force search over a qubit measurement grid and estimator lattice.
    Oracle {
        #[arg(long, value_enum, default_value_t = Criterion::Bayes)]
        criterion: Criterion,
        /// Measurement-grid resolution (polar and azimuthal steps).
        #[arg(long, default_value_t = 20)]
        resolution: usize,
        /// Estimator lattice as `lo:hi:n`; the grid hull with 21 points by default.
        #[arg(long)]
        lattice: Option<String>,
        /// Lattice for the reference estimators in the pointwise search.
        #[arg(long)]
        reference_lattice: Option<String>,
        /// Largest search space accepted.
        #[arg(long, default_value_t = 1_000_000_000)]
        cap: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundKind {
    Additive,
    Multiplicative,
    Local,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Criterion {
    Bayes,
    Pointwise,
}

/// Removes `--tol-KEY=VALUE` arguments from `argv` and applies them.
pub fn extract_tolerances(argv: Vec<String>) -> Result<(Vec<String>, Tolerances), CliError> {
    let mut tol = Tolerances::default();
    let mut rest = Vec::with_capacity(argv.len());
    for arg in argv {
        let Some(spec) = arg.strip_prefix("--tol-") else {
            rest.push(arg);
            continue;
        };
        let (key, value) = spec
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("`{arg}` must have the form --tol-KEY=VALUE")))?;
        let value: f64 = value
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite() && *v >= 0.0)
            .ok_or_else(|| CliError::Usage(format!("tolerance `{key}` needs a nonnegative number")))?;
        if !tol.set(key, value) {
            return Err(CliError::Usage(format!("unknown tolerance `{key}`")));
        }
    }
    Ok((rest, tol))
}

/// Parses `1.5`, `pi`, `-pi/2`, `3pi/4` or `2*pi`.
pub fn parse_angle(text: &str) -> Result<f64, CliError> {
    let bad = || CliError::Usage(format!("cannot parse grid value `{text}`"));
    let t = text.trim().to_ascii_lowercase();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim().parse::<f64>().map_err(|_| bad())?),
        None => (t.as_str(), 1.0),
    };
    let value = match num.strip_suffix("pi") {
        Some(coef) => {
            let coef = coef.trim_end_matches('*').trim();
            let c = match coef {
                "" | "+" => 1.0,
                "-" => -1.0,
                c => c.parse::<f64>().map_err(|_| bad())?,
            };
            c * PI
        }
        None => num.parse::<f64>().map_err(|_| bad())?,
    };
    let v = value / den;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

pub fn parse_grid(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',').map(parse_angle).collect()
}

/// `lo:hi:n` with `n >= 2`.
pub fn parse_lattice(text: &str) -> Result<Vec<Vec<f64>>, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    let [lo, hi, n] = parts[..] else {
        return Err(CliError::Usage(format!("lattice `{text}` must be lo:hi:n")));
    };
    let (lo, hi) = (parse_angle(lo)?, parse_angle(hi)?);
    let n: usize = n
        .parse()
        .ok()
        .filter(|&n| n >= 2)
        .ok_or_else(|| CliError::Usage(format!("lattice `{text}` needs at least two points")))?;
    Ok(linspace(lo, hi, n))
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<Vec<f64>> {
    (0..n).map(|i| vec![lo + (hi - lo) * i as f64 / (n - 1) as f64]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("0.5").unwrap(), 0.5);
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert_eq!(parse_angle("pi/4").unwrap(), PI / 4.0);
        assert_eq!(parse_angle("-pi/2").unwrap(), -PI / 2.0);
        assert_eq!(parse_angle("3pi/2").unwrap(), 3.0 * PI / 2.0);
        assert_eq!(parse_angle("2*pi").unwrap(), 2.0 * PI);
        assert!(parse_angle("tau").is_err());
        assert!(parse_angle("1/0").is_err());
    }

    #[test]
    fn tolerance_flags_are_removed() {
        let argv = ["qrisk", "--tol-comm=1e-6", "certify", "--tol-eig_group=0.01"]
            .map(String::from)
            .to_vec();
        let (rest, tol) = extract_tolerances(argv).unwrap();
        assert_eq!(rest, vec!["qrisk", "certify"]);
        assert_eq!(tol.comm, 1e-6);
        assert_eq!(tol.eig_group, 0.01);
    }

    #[test]
    fn bad_tolerances_rejected() {
        for arg in ["--tol-nope=1", "--tol-comm", "--tol-comm=-1", "--tol-comm=x"] {
            let argv = vec!["qrisk".to_string(), arg.to_string()];
            assert!(extract_tolerances(argv).is_err(), "{arg}");
        }
    }

    #[test]
    fn lattice_spec() {
        let l = parse_lattice("0:pi/2:3").unwrap();
        assert_eq!(l, vec![vec![0.0], vec![PI / 4.0], vec![PI / 2.0]]);
        assert!(parse_lattice("0:1").is_err());
        assert!(parse_lattice("0:1:1").is_err());
    }
}
