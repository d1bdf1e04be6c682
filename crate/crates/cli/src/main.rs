mod args;
mod commands;
mod error;

use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use qrisk::Tolerances;
use serde::Serialize;
use serde_json::Value;

use args::{Cli, Common, Format};
use commands::{Context, Output};
use error::CliError;

#[derive(Serialize)]
struct Versions {
    qrisk: &'static str,
    qrisk_cli: &'static str,
}

#[derive(Serialize)]
struct Inputs<'a> {
    state: Option<&'a Path>,
    scenario: Option<&'a str>,
    grid: Option<&'a str>,
    povm: Option<&'a Path>,
    kraus: Option<&'a Path>,
    estimators: &'a [std::path::PathBuf],
    prior: Option<&'a Path>,
    loss: &'static str,
}

#[derive(Serialize)]
struct Metadata<'a> {
    command: &'a str,
    seed: u64,
    tolerances: Tolerances,
    versions: Versions,
    inputs: Inputs<'a>,
}

#[derive(Serialize)]
struct Report<'a> {
    metadata: Metadata<'a>,
    result: Value,
}

fn metadata<'a>(command: &'a str, common: &'a Common, tol: Tolerances) -> Metadata<'a> {
    Metadata {
        command,
        seed: common.seed,
        tolerances: tol,
        versions: Versions {
            qrisk: qrisk::VERSION,
            qrisk_cli: env!("CARGO_PKG_VERSION"),
        },
        inputs: Inputs {
            state: common.state.as_deref(),
            scenario: common.scenario.as_deref(),
            grid: common.grid.as_deref(),
            povm: common.povm.as_deref(),
            kraus: common.kraus.as_deref(),
            estimators: &common.estimator,
            prior: common.prior.as_deref(),
            loss: match common.loss {
                args::LossArg::Ls => "ls",
                args::LossArg::Kl => "kl",
            },
        },
    }
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialise infallibly");
    s.push('\n');
    s
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes the report to stdout or a file. A CSV file gets its metadata in a
/// `<path>.meta.json` sidecar.
fn emit(name: &str, common: &Common, tol: Tolerances, output: Output) -> Result<(), CliError> {
    let (path, format) = match common.out.as_deref() {
        None => (None, common.format.unwrap_or(Format::Json)),
        Some("json") => (None, Format::Json),
        Some("csv") => (None, Format::Csv),
        Some(p) => {
            let path = Path::new(p);
            let by_ext = match path.extension().and_then(|e| e.to_str()) {
                Some("csv") => Format::Csv,
                _ => Format::Json,
            };
            (Some(path), common.format.unwrap_or(by_ext))
        }
    };
    let meta = metadata(name, common, tol);
    match format {
        Format::Json => {
            let text = pretty(&Report {
                metadata: meta,
                result: output.result,
            });
            match path {
                Some(p) => write_file(p, &text),
                None => {
                    print!("{text}");
                    Ok(())
                }
            }
        }
        Format::Csv => {
            let csv = output
                .csv
                .ok_or_else(|| CliError::Usage(format!("`{name}` has no CSV output; use json")))?;
            match path {
                Some(p) => {
                    write_file(p, &csv)?;
                    let mut sidecar = p.as_os_str().to_owned();
                    sidecar.push(".meta.json");
                    write_file(Path::new(&sidecar), &pretty(&meta))
                }
                None => {
                    print!("{csv}");
                    Ok(())
                }
            }
        }
    }
}

fn command_name(command: &args::Command) -> &'static str {
    match command {
        args::Command::Risk => "risk",
        args::Command::Certify => "certify",
        args::Command::Bayes { .. } => "bayes",
        args::Command::Bounds { .. } => "bounds",
        args::Command::Admissibility => "admissibility",
        args::Command::Oracle { .. } => "oracle",
    }
}

fn try_main() -> Result<(), CliError> {
    let (argv, tol) = args::extract_tolerances(std::env::args().collect())?;
    let cli = Cli::try_parse_from(argv).unwrap_or_else(|e| e.exit());
    let ctx = Context {
        common: &cli.common,
        tol,
    };
    let output = commands::run(&cli.command, &ctx)?;
    emit(command_name(&cli.command), &cli.common, tol, output)
}

fn main() -> ExitCode {
    match try_main() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
