//! Batch verification harness, adjoint calculator and experiment runner
//! over the symplectic truncation library.
//!
//! Exit codes: 0 when every asserted check passes, 1 when a check fails,
//! 2 on usage or configuration errors.

mod config;
mod experiments;
mod report;
mod suites;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rochsym::{adjoint_oracle, sharp_adjoint, FormDescriptor, LinearOperator, SymplecticForm};

use config::{ConfigError, ReportFormat, SuiteConfig, SuiteId, Tolerances};
use report::Report;

#[derive(Parser)]
#[command(name = "rochsym", version, about = "Symplectic truncation verification harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and emit a structured report.
    Run(RunArgs),
    /// Compute the adjoint of an operator with respect to a form.
    Adjoint(AdjointArgs),
    /// Run a named measurement experiment and emit CSV.
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Truncation size N (even when twisted suites are selected).
    #[arg(long = "dim", default_value_t = 16)]
    dim: usize,

    /// Largest tuple order exercised.
    #[arg(long = "order", default_value_t = 5)]
    order: usize,

    /// Seed for all randomized cases.
    #[arg(long = "seed", default_value_t = 0)]
    seed: u64,

    /// Tolerance override, name=value; repeatable.
    #[arg(long = "tol", value_name = "NAME=VALUE")]
    tol: Vec<String>,

    /// Suite to run (adjoint, forms, blocks, transvections, subspaces,
    /// repair, experiments); repeatable, default all.
    #[arg(long = "suite", value_name = "NAME")]
    suite: Vec<String>,

    /// Report format.
    #[arg(long = "format", value_name = "json|md", default_value = "json")]
    format: String,

    /// Write the report to a file instead of standard output.
    #[arg(long = "out", value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AdjointArgs {
    /// Operator JSON file ({"rows": r, "cols": c, "entries": [[..], ..]}).
    #[arg(long = "input", value_name = "PATH")]
    input: PathBuf,

    /// Form descriptor JSON file ({"n": n, "N": N, "twisted": bool});
    /// alternative to the individual flags.
    #[arg(long = "form", value_name = "PATH", conflicts_with_all = ["order", "dim"])]
    form: Option<PathBuf>,

    /// Form order n.
    #[arg(long = "order", required_unless_present = "form")]
    order: Option<usize>,

    /// Truncation size N.
    #[arg(long = "dim", required_unless_present = "form")]
    dim: Option<usize>,

    /// Take the adjoint with respect to the rotation-twisted form
    /// (odd order, even truncation only).
    #[arg(long = "twisted", default_value_t = false)]
    twisted: bool,

    /// Write the result to a file instead of standard output.
    #[arg(long = "out", value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Experiment name: unbounded-L, isotropic-projection, dbound-sampling.
    name: String,

    /// Truncation size N.
    #[arg(long = "dim", default_value_t = 16)]
    dim: usize,

    /// Seed for sampled quantities.
    #[arg(long = "seed", default_value_t = 0)]
    seed: u64,

    /// Write the CSV to a file instead of standard output.
    #[arg(long = "out", value_name = "PATH")]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run(args) => match run_command(args) {
            Ok(all_passed) => {
                if all_passed {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(1)
                }
            }
            Err(e) => usage_error(e),
        },
        Command::Adjoint(args) => match adjoint_command(args) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => usage_error(e),
        },
        Command::Experiment(args) => match experiment_command(args) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => usage_error(e),
        },
    }
}

fn usage_error(e: ConfigError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(2)
}

fn run_command(args: RunArgs) -> Result<bool, ConfigError> {
    let mut tolerances = Tolerances::default();
    for spec in &args.tol {
        let (name, value) = spec
            .split_once('=')
            .ok_or_else(|| ConfigError(format!("expected NAME=VALUE, got '{spec}'")))?;
        let value: f64 = value
            .parse()
            .map_err(|_| ConfigError(format!("tolerance value '{value}' is not a number")))?;
        tolerances.set(name, value)?;
    }

    let suites = if args.suite.is_empty() {
        SuiteId::ALL.to_vec()
    } else {
        let mut selected = Vec::new();
        for name in &args.suite {
            let id = SuiteId::parse(name)
                .ok_or_else(|| ConfigError(format!("unknown suite: {name}")))?;
            if !selected.contains(&id) {
                selected.push(id);
            }
        }
        selected
    };

    let format = match args.format.as_str() {
        "json" => ReportFormat::Json,
        "md" => ReportFormat::Markdown,
        other => return Err(ConfigError(format!("unknown format: {other}"))),
    };

    let config = SuiteConfig {
        truncation: args.dim,
        max_order: args.order,
        seed: args.seed,
        tolerances,
        suites,
        format,
    };
    config.validate()?;

    let mut checks = Vec::new();
    for id in &config.suites {
        checks.extend(suites::run_suite(*id, &config));
    }
    let report = Report::new(&config, checks);
    let rendered = report.render(config.format);
    write_output(args.out.as_deref(), &rendered)?;
    Ok(report.all_passed())
}

fn adjoint_command(args: AdjointArgs) -> Result<(), ConfigError> {
    let raw = fs::read_to_string(&args.input)
        .map_err(|e| ConfigError(format!("cannot read {}: {e}", args.input.display())))?;
    let operator: LinearOperator = serde_json::from_str(&raw)
        .map_err(|e| ConfigError(format!("malformed operator JSON: {e}")))?;
    let descriptor = match &args.form {
        Some(path) => {
            let raw = fs::read_to_string(path)
                .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str::<FormDescriptor>(&raw)
                .map_err(|e| ConfigError(format!("malformed form descriptor JSON: {e}")))?
        }
        None => FormDescriptor {
            n: args.order.expect("required by clap"),
            truncation: args.dim.expect("required by clap"),
            twisted: args.twisted,
        },
    };
    let form = SymplecticForm::from_descriptor(&descriptor)
        .map_err(|e| ConfigError(e.to_string()))?;
    let plus = adjoint_oracle(&operator, &form).map_err(|e| ConfigError(e.to_string()))?;

    // odd orders carry the twisted-adjoint residual table alongside
    let rendered = if descriptor.n % 2 == 1 && descriptor.truncation % 2 == 0 {
        let twisted_form = SymplecticForm::new(descriptor.n, descriptor.truncation, true)
            .map_err(|e| ConfigError(e.to_string()))?;
        let sharp =
            sharp_adjoint(&operator, &twisted_form).map_err(|e| ConfigError(e.to_string()))?;
        let payload = serde_json::json!({
            "form": descriptor,
            "adjoint": plus,
            "sharp": {
                "operator": sharp.sharp,
                "definition_defect": sharp.definition_defect,
                "closed_form_residuals": {
                    "neg_plus_tau": sharp.residual_neg_tau,
                    "conjugated_plus": sharp.residual_conjugated,
                },
            },
        });
        serde_json::to_string_pretty(&payload).expect("serializable") + "\n"
    } else {
        serde_json::to_string_pretty(&plus).expect("serializable") + "\n"
    };
    write_output(args.out.as_deref(), &rendered)
}

fn experiment_command(args: ExperimentArgs) -> Result<(), ConfigError> {
    let csv = experiments::run(&args.name, args.dim, args.seed).ok_or_else(|| {
        ConfigError(format!(
            "unknown experiment '{}'; known: {}",
            args.name,
            experiments::EXPERIMENTS.join(", ")
        ))
    })?;
    write_output(args.out.as_deref(), &csv)
}

fn write_output(path: Option<&std::path::Path>, content: &str) -> Result<(), ConfigError> {
    match path {
        Some(p) => fs::write(p, content)
            .map_err(|e| ConfigError(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}
