//! `presym`: run verification suites, execute instance files, generate inputs.
//!
//! Exit codes: 0 when every check passes, 1 when some check fails, 2 on
//! usage, parse or io errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use presym::harness::{self, GenerateConfig, HarnessError, Report, Suite, SuiteConfig};

/// Default directory for reports when `--report` is not given.
const REPORT_DIR_ENV: &str = "PRESYM_REPORT_DIR";

#[derive(Parser)]
#[command(name = "presym", version, about = "Exact checks for deformations of pre-symplectic forms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a randomized suite: exterior, koszul, linf-jacobi, linalg, mc, dirac, presymplectic or all.
    Verify {
        suite: Suite,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        max_form_degree: Option<usize>,
        #[arg(long)]
        max_coef_degree: Option<u32>,
        /// Comma-separated grid coordinates, e.g. "0,1/2,-1/3".
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<String>>,
        /// Bound on random numerators and denominators.
        #[arg(long, default_value_t = 100)]
        coef_bound: i64,
        #[command(flatten)]
        out: ReportArgs,
    },
    /// Execute an instance file (or a counterexample copied from a report).
    Run {
        instance: PathBuf,
        #[command(flatten)]
        out: ReportArgs,
    },
    /// Print a random input: skew-form, bivector-field, horizontal-form or presymplectic-instance.
    Generate {
        kind: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        dim: usize,
        /// Coefficient degree for fields, shear degree for instances.
        #[arg(long, default_value_t = 1)]
        degree: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(clap::Args)]
struct ReportArgs {
    /// Where to write the JSON report. Defaults to $PRESYM_REPORT_DIR/<name>.json, else stdout.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Leave wall times out of the report.
    #[arg(long)]
    no_timing: bool,
}

fn write(path: &Path, text: &str) -> Result<(), HarnessError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| HarnessError::Io(format!("{}: {e}", dir.display())))?;
    }
    std::fs::write(path, text).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))
}

fn emit(report: &Report, args: &ReportArgs, default_name: &str) -> Result<(), HarnessError> {
    let json = report.to_json(!args.no_timing);
    let target = args.report.clone().or_else(|| {
        std::env::var_os(REPORT_DIR_ENV).map(|dir| PathBuf::from(dir).join(format!("{default_name}.json")))
    });
    for f in report.failures() {
        eprintln!("FAIL {} {}: {}", f.name, f.id.as_deref().unwrap_or(""), f.detail.as_deref().unwrap_or(""));
    }
    let s = &report.summary;
    eprintln!("{} passed, {} failed, {} skipped", s.passed, s.failed, s.skipped);
    match target {
        Some(path) => {
            write(&path, &json)?;
            eprintln!("report written to {}", path.display());
        }
        None => println!("{json}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<i32, HarnessError> {
    match cli.command {
        Command::Verify { suite, dim, trials, seed, max_form_degree, max_coef_degree, grid, coef_bound, out } => {
            let config = SuiteConfig { suite, dim, max_form_degree, max_coef_degree, trials, seed, grid, coef_bound };
            let report = harness::run_suite(&config)?;
            emit(&report, &out, &format!("{}-seed{seed}", suite.name()))?;
            Ok(report.exit_code())
        }
        Command::Run { instance, out } => {
            let report = harness::run_instance_file(&instance)?;
            let stem = instance.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "instance".into());
            emit(&report, &out, &format!("{stem}-report"))?;
            Ok(report.exit_code())
        }
        Command::Generate { kind, seed, dim, degree, out } => {
            let text = harness::generate(&kind, &GenerateConfig { seed, dim, degree })?;
            match out {
                Some(path) => write(&path, &text)?,
                None => println!("{text}"),
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
