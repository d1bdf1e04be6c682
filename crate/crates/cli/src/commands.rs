use std::path::{Path, PathBuf};

use qrisk::admissibility::{bregman_average_improvement, dominate_refineable, dominate_uninformative, is_uninformative};
use qrisk::bayes::{bayes_risk, posterior_mean_estimator, solve_bayes_measurement, Grouping, Prior};
use qrisk::estimation::{risk_profile, Estimator, LossFunction};
use qrisk::io::{family_from_json, kraus_from_json, povm_from_json};
use qrisk::optimality::{additive_bound, certify, compare_with_transfer, local_bound, multiplicative_bound};
use qrisk::quantum::{KrausMeasurement, ParametrisedState, Povm};
use qrisk::random::{random_estimator, random_povm, seeded, SeededRng};
use qrisk::scenarios::{build_scenario, oracle_best_pair, oracle_measurement_grid, GridSpec, OracleCriterion, ScenarioSpec};
use qrisk::Tolerances;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{linspace, parse_grid, parse_lattice, BoundKind, Command, Common, Criterion, LossArg};
use crate::error::CliError;

/// Result of a command before it is written out.
pub struct Output {
    pub result: Value,
    pub csv: Option<String>,
}

impl Output {
    fn json<T: Serialize>(value: &T) -> Self {
        Output {
            result: to_value(value),
            csv: None,
        }
    }

    fn with_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }
}

fn to_value<T: Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("report types serialise infallibly")
}

pub struct Context<'a> {
    pub common: &'a Common,
    pub tol: Tolerances,
}

impl Context<'_> {
    fn loss(&self) -> LossFunction {
        match self.common.loss {
            LossArg::Ls => LossFunction::least_squares(),
            LossArg::Kl => LossFunction::kullback_leibler(),
        }
    }

    fn family(&self) -> Result<ParametrisedState, CliError> {
        let c = self.common;
        match (&c.state, &c.scenario) {
            (Some(path), None) => Ok(family_from_json(&read(path)?, &self.tol)?),
            (None, Some(name)) => {
                let mut spec = match ScenarioSpec::shorthand(name) {
                    Ok(spec) => spec,
                    Err(_) if Path::new(name).exists() => {
                        let path = PathBuf::from(name);
                        serde_json::from_str(&read(&path)?)
                            .map_err(|e| CliError::Usage(format!("invalid scenario file `{name}`: {e}")))?
                    }
                    Err(e) => return Err(e.into()),
                };
                if let Some(grid) = &c.grid {
                    spec = spec.with_grid(GridSpec::points(&parse_grid(grid)?));
                }
                Ok(build_scenario(&spec, &self.tol)?)
            }
            _ => Err(CliError::Usage("exactly one of --state or --scenario is required".into())),
        }
    }

    fn povm(&self) -> Result<Option<Povm>, CliError> {
        self.common
            .povm
            .as_ref()
            .map(|p| Ok(povm_from_json(&read(p)?, &self.tol)?))
            .transpose()
    }

    fn kraus(&self) -> Result<Option<KrausMeasurement>, CliError> {
        self.common
            .kraus
            .as_ref()
            .map(|p| Ok(kraus_from_json(&read(p)?, &self.tol)?))
            .transpose()
    }

    /// The measurement given by exactly one of `--povm` or `--kraus`.
    fn measurement(&self) -> Result<Povm, CliError> {
        match (self.povm()?, self.kraus()?) {
            (Some(p), None) => Ok(p),
            (None, Some(k)) => Ok(k.povm()),
            _ => Err(CliError::Usage("exactly one of --povm or --kraus is required".into())),
        }
    }

    fn estimators(&self) -> Result<Vec<Estimator>, CliError> {
        self.common
            .estimator
            .iter()
            .map(|p| {
                serde_json::from_str(&read(p)?)
                    .map_err(|e| CliError::Usage(format!("invalid estimator file `{}`: {e}", p.display())))
            })
            .collect()
    }

    fn prior(&self, family: &ParametrisedState) -> Result<Prior, CliError> {
        match &self.common.prior {
            Some(p) => {
                let prior: Prior = serde_json::from_str(&read(p)?)
                    .map_err(|e| CliError::Usage(format!("invalid prior file `{}`: {e}", p.display())))?;
                if prior.len() != family.len() {
                    return Err(qrisk::Error::GridMismatch.into());
                }
                Ok(prior)
            }
            None => Ok(Prior::uniform(family.len())?),
        }
    }
}

pub fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

pub fn run(command: &Command, ctx: &Context) -> Result<Output, CliError> {
    match command {
        Command::Risk => risk(ctx),
        Command::Certify => Ok(Output::json(&certify(&ctx.family()?, &ctx.loss(), &ctx.tol)?)),
        Command::Bayes {
            fine_grained,
            competitors,
        } => bayes(ctx, *fine_grained, *competitors),
        Command::Bounds {
            kind,
            reference,
            diameter,
            competitors,
        } => bounds(ctx, *kind, reference.as_deref(), *diameter, *competitors),
        Command::Admissibility => admissibility(ctx),
        Command::Oracle {
            criterion,
            resolution,
            lattice,
            reference_lattice,
            cap,
        } => oracle(ctx, *criterion, *resolution, lattice.as_deref(), reference_lattice.as_deref(), *cap),
    }
}

fn risk(ctx: &Context) -> Result<Output, CliError> {
    let family = ctx.family()?;
    let povm = ctx.measurement()?;
    let [estimator] = &ctx.estimators()?[..] else {
        return Err(CliError::Usage("risk needs exactly one --estimator".into()));
    };
    let profile = risk_profile(&family, &povm, estimator, &ctx.loss())?;
    Ok(Output::json(&profile).with_csv(profile.to_csv()))
}

/// Seeded generator for the `index`-th competitor of a sweep.
fn competitor_rng(seed: u64, index: usize) -> SeededRng {
    seeded(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(index as u64))
}

fn grid_hull(family: &ParametrisedState) -> Result<(f64, f64), CliError> {
    let points = family.scalar_points()?;
    let lo = points.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = points.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok((lo, hi))
}

#[derive(Serialize)]
struct CompetitorSweep {
    count: usize,
    seed: u64,
    min_competitor_risk: f64,
    solver_beaten: bool,
}

fn bayes(ctx: &Context, fine_grained: bool, competitors: usize) -> Result<Output, CliError> {
    if ctx.common.loss != LossArg::Ls {
        return Err(qrisk::Error::WrongLoss.into());
    }
    let family = ctx.family()?;
    let prior = ctx.prior(&family)?;
    let grouping = if fine_grained { Grouping::FineGrained } else { Grouping::Coarsest };
    let solution = solve_bayes_measurement(&family, &prior, &ctx.tol, grouping)?;
    let mut result = json!({ "solution": to_value(&solution) });
    if competitors > 0 {
        let (lo, hi) = grid_hull(&family)?;
        let loss = ctx.loss();
        let risks = (0..competitors)
            .into_par_iter()
            .map(|i| {
                let mut rng = competitor_rng(ctx.common.seed, i);
                let k = 2 + i % 3;
                let f = random_povm(&mut rng, family.hilbert_dim(), k);
                let e = if i % 2 == 0 {
                    random_estimator(&mut rng, k, lo, hi)
                } else {
                    posterior_mean_estimator(&family, &f, &prior, &ctx.tol)?.estimator
                };
                bayes_risk(&family, &f, &e, &loss, &prior)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let min = risks.iter().copied().fold(f64::INFINITY, f64::min);
        result["competitors"] = to_value(&CompetitorSweep {
            count: competitors,
            seed: ctx.common.seed,
            min_competitor_risk: min,
            solver_beaten: min < solution.bayes_risk - ctx.tol.dom,
        });
    }
    let mut csv = String::from("outcome,estimate\n");
    for (k, v) in solution.estimator.values().iter().enumerate() {
        csv.push_str(&format!("{k},{}\n", v[0]));
    }
    Ok(Output { result, csv: Some(csv) })
}

#[derive(Serialize)]
struct BoundSweep {
    count: usize,
    seed: u64,
    max_additive_gap: f64,
    max_risk_ratio: f64,
}

fn bounds(
    ctx: &Context,
    kind: BoundKind,
    reference: Option<&Path>,
    diameter: Option<f64>,
    competitors: usize,
) -> Result<Output, CliError> {
    let family = ctx.family()?;
    let loss = ctx.loss();
    let reference = reference
        .map(|p| Ok::<_, CliError>(family_from_json(&read(p)?, &ctx.tol)?))
        .transpose()?;
    let need_reference = || CliError::Usage("this bound needs --reference".into());
    let bound = match kind {
        BoundKind::Additive => additive_bound(&family, reference.as_ref().ok_or_else(need_reference)?, &loss, diameter, &ctx.tol)?,
        BoundKind::Multiplicative => multiplicative_bound(&family, reference.as_ref().ok_or_else(need_reference)?, &ctx.tol)?,
        BoundKind::Local => local_bound(&family, &ctx.tol)?,
    };
    let mut result = json!({ "bound": to_value(&bound), "value": bound.value() });
    if competitors > 0 {
        let reference = reference
            .as_ref()
            .ok_or_else(|| CliError::Usage("a competitor sweep needs --reference".into()))?;
        let (lo, hi) = grid_hull(&family)?;
        let rows = (0..competitors)
            .into_par_iter()
            .map(|i| {
                let mut rng = competitor_rng(ctx.common.seed, i);
                let k = 1 + i % 4;
                let f = random_povm(&mut rng, family.hilbert_dim(), k);
                let e = random_estimator(&mut rng, k, lo, hi);
                let cmp = compare_with_transfer(&family, reference, &f, &e, &loss, &ctx.tol)?;
                let ratio = cmp
                    .transferred_profile
                    .values
                    .iter()
                    .zip(&cmp.competitor_profile.values)
                    .filter(|(_, r)| **r > 0.0)
                    .map(|(m, r)| m / r)
                    .fold(0.0, f64::max);
                Ok((cmp.additive_gap(), ratio))
            })
            .collect::<Result<Vec<_>, qrisk::Error>>()?;
        result["competitors"] = to_value(&BoundSweep {
            count: competitors,
            seed: ctx.common.seed,
            max_additive_gap: rows.iter().map(|r| r.0).fold(f64::NEG_INFINITY, f64::max),
            max_risk_ratio: rows.iter().map(|r| r.1).fold(0.0, f64::max),
        });
    }
    Ok(Output { result, csv: None })
}

fn admissibility(ctx: &Context) -> Result<Output, CliError> {
    let family = ctx.family()?;
    let loss = ctx.loss();
    let estimators = ctx.estimators()?;
    let result = match (ctx.kraus()?, ctx.povm()?) {
        (Some(kraus), None) => {
            let report = dominate_refineable(&family, &kraus, &loss, &estimators, &ctx.tol)?;
            json!({ "construction": "refineable", "report": to_value(&report) })
        }
        (None, Some(povm)) if is_uninformative(&family, &povm, ctx.tol.eq)? => {
            let report = dominate_uninformative(&family, &povm, &loss, &estimators, &ctx.tol)?;
            json!({ "construction": "uninformative", "report": to_value(&report) })
        }
        (None, Some(povm)) => {
            let [a, b] = &estimators[..] else {
                return Err(CliError::Usage(
                    "the measurement is informative; averaging needs exactly two --estimator files".into(),
                ));
            };
            let report = bregman_average_improvement(a, b, &povm, &family, &loss, &ctx.tol)?;
            json!({ "construction": "average", "report": to_value(&report) })
        }
        _ => return Err(CliError::Usage("exactly one of --povm or --kraus is required".into())),
    };
    Ok(Output { result, csv: None })
}

fn oracle(
    ctx: &Context,
    criterion: Criterion,
    resolution: usize,
    lattice: Option<&str>,
    reference_lattice: Option<&str>,
    cap: u64,
) -> Result<Output, CliError> {
    let family = ctx.family()?;
    let measurements = oracle_measurement_grid(family.hilbert_dim(), resolution)?;
    let (lo, hi) = grid_hull(&family)?;
    let lattice = match lattice {
        Some(text) => parse_lattice(text)?,
        None => linspace(lo, hi, 21),
    };
    let criterion = match criterion {
        Criterion::Bayes => OracleCriterion::BayesRisk(ctx.prior(&family)?),
        Criterion::Pointwise => OracleCriterion::Pointwise {
            reference: ctx
                .povm()?
                .ok_or_else(|| CliError::Usage("the pointwise oracle needs a reference --povm".into()))?,
            reference_lattice: match reference_lattice {
                Some(text) => parse_lattice(text)?,
                None => linspace(lo, hi, 65),
            },
            tol_dom: ctx.tol.dom,
        },
    };
    let report = oracle_best_pair(&family, &ctx.loss(), &measurements, &lattice, &criterion, cap)?;
    Ok(Output::json(&report).with_csv(report.to_csv()))
}
