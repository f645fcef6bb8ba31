//! Command-line front end: configuration-driven verification runs and
//! single-check subcommands, with machine-readable JSON reports and CSV
//! spectra.
//!
//! Exit codes: 0 all asserted checks pass, 2 at least one asserted check
//! failed, 3 configuration error, 4 numerical error.

mod checks;
mod config;
mod report;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{ConfigError, Experiment, RawChecks, RawConfig, RawGeometry, RawSpec, RawSweep};
use report::CheckStatus;

#[derive(Parser)]
#[command(
    name = "loopbraid",
    about = "Verify loop-braid-group chain representations and build their integrable models",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every check named in a config file and write report.json
    Run {
        /// Path to the TOML experiment configuration
        config: PathBuf,
        /// Output directory for report.json (and spectrum.csv if requested)
        #[arg(default_value = ".")]
        out_dir: PathBuf,
    },
    /// Check the braid/permutation/mixed presentation relations and classify
    VerifyRelations(CommonArgs),
    /// Sweep the Yang-Baxter residual in the ansatz's convention
    CheckYbe(CommonArgs),
    /// Build the local Hamiltonian and compare against closed forms
    BuildHamiltonian(CommonArgs),
    /// Sweep the transfer-matrix commutator [T(u), T(v)]
    TransferCommute(CommonArgs),
    /// Extract the commuting-charge family and its worst pair commutator
    Charges(CommonArgs),
    /// Diagonalize the local Hamiltonian and write spectrum.csv
    Spectrum(CommonArgs),
    /// Integrability diagnostics ([H, T(v)] and the discrepancy protocol)
    Diagnose(CommonArgs),
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// R-matrix ansatz: rational, a1, a2, or a3
    #[arg(long, default_value = "a3")]
    ansatz: String,
    /// Braid coupling alpha (complex, e.g. "0.5" or "0.5+0.2i")
    #[arg(long)]
    alpha: Option<String>,
    /// B-operator: zz-half | product:l,m,n | custom:FILE
    #[arg(long)]
    b_choice: Option<String>,
    /// Coefficients of a(u), low order first, comma-separated
    #[arg(long)]
    a_poly: Option<String>,
    /// Coefficients of b(u), low order first, comma-separated
    #[arg(long)]
    b_poly: Option<String>,
    /// Constant c of the rational ansatz
    #[arg(long)]
    c_const: Option<String>,
    /// Expansion / evaluation point u0 (default: c/2 rational, else 0)
    #[arg(long)]
    u0: Option<String>,
    /// Number of chain sites
    #[arg(long, default_value_t = 4)]
    n_sites: usize,
    /// Tolerance override for this subcommand's check
    #[arg(long)]
    tol: Option<f64>,
    /// Seed of the deterministic sweep generator
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Number of sweep samples
    #[arg(long, default_value_t = 5)]
    samples: usize,
    /// Output location: directory for report.json (file path for spectrum)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // help and version are not errors; anything else is exit 3
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("{err}");
            ExitCode::from(err.exit_code())
        }
    }
}

#[derive(Debug)]
enum CliError {
    Config(ConfigError),
    Core(loopbraid::Error),
    Io(std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(e) => write!(f, "{e}"),
            CliError::Core(e) => write!(f, "error: {e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 3,
            CliError::Core(e) => match e {
                loopbraid::Error::SingularMatrix { .. }
                | loopbraid::Error::EigenConvergence { .. }
                | loopbraid::Error::NonFinite { .. }
                | loopbraid::Error::InconsistentSamples { .. }
                | loopbraid::Error::Inconsistent(_) => 4,
                _ => 3,
            },
            CliError::Io(_) => 4,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

impl From<loopbraid::Error> for CliError {
    fn from(e: loopbraid::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Run { config, out_dir } => {
            let experiment = config::load(&config)?;
            execute(&experiment, Some(&out_dir), None)
        }
        Command::VerifyRelations(args) => single_check(args, "relations"),
        Command::CheckYbe(args) => single_check(args, "ybe"),
        Command::BuildHamiltonian(args) => single_check(args, "hamiltonian"),
        Command::TransferCommute(args) => single_check(args, "transfer-commute"),
        Command::Charges(args) => single_check(args, "charges"),
        Command::Spectrum(args) => {
            let csv_path = args
                .out
                .clone()
                .unwrap_or_else(|| PathBuf::from("spectrum.csv"));
            let experiment = experiment_from_args(&args, "spectrum")?;
            execute(&experiment, None, Some(&csv_path))
        }
        Command::Diagnose(args) => single_check(args, "diagnostic"),
    }
}

fn single_check(args: CommonArgs, check: &str) -> Result<ExitCode, CliError> {
    let out_dir = args.out.clone();
    let experiment = experiment_from_args(&args, check)?;
    execute(&experiment, out_dir.as_deref(), None)
}

fn split_poly(text: &Option<String>) -> Option<Vec<String>> {
    text.as_ref()
        .map(|t| t.split(',').map(|s| s.trim().to_string()).collect())
}

fn experiment_from_args(args: &CommonArgs, check: &str) -> Result<Experiment, ConfigError> {
    let mut tolerances = BTreeMap::new();
    if let Some(tol) = args.tol {
        tolerances.insert(check.to_string(), tol);
    }
    let raw = RawConfig {
        seed: args.seed,
        spec: RawSpec {
            ansatz: args.ansatz.clone(),
            c_const: args.c_const.clone(),
            alpha: args.alpha.clone(),
            b_choice: args.b_choice.clone(),
            a_poly: split_poly(&args.a_poly),
            b_poly: split_poly(&args.b_poly),
        },
        geometry: RawGeometry {
            n_sites: args.n_sites,
        },
        checks: RawChecks {
            names: vec![check.to_string()],
            u0: args.u0.clone(),
            samples: Some(args.samples),
        },
        tolerances,
        sweep: RawSweep::default(),
    };
    config::resolve(raw)
}

fn execute(
    experiment: &Experiment,
    out_dir: Option<&Path>,
    spectrum_path: Option<&Path>,
) -> Result<ExitCode, CliError> {
    let output = checks::run_checks(experiment)?;
    print_summary(&output.report);

    if let Some(dir) = out_dir {
        let report_path = dir.join("report.json");
        report::write_atomic(&report_path, &output.report.to_json())?;
        println!("report written to {}", report_path.display());
        if let Some(csv) = &output.spectrum_csv {
            let csv_path = dir.join("spectrum.csv");
            report::write_atomic(&csv_path, csv)?;
            println!("spectrum written to {}", csv_path.display());
        }
    } else if let (Some(path), Some(csv)) = (spectrum_path, &output.spectrum_csv) {
        report::write_atomic(path, csv)?;
        println!("spectrum written to {}", path.display());
    }

    Ok(if output.report.any_failed() {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    })
}

fn print_summary(report: &report::Report) {
    for check in &report.checks {
        let status = match check.status {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Measured => "MEAS",
        };
        let conv = check
            .convention
            .as_deref()
            .map(|c| format!(" [{c}]"))
            .unwrap_or_default();
        let tol = check
            .tolerance
            .map(|t| format!(" tol={t:.1e}"))
            .unwrap_or_default();
        println!(
            "[{status}] {}{conv} residual={:.3e}{tol}",
            check.name, check.residual
        );
    }
    if let Some(class) = &report.classification {
        println!("classification: {class}");
    }
    if let Some(h) = &report.hamiltonian {
        println!(
            "hamiltonian: u0={} hermitian={} closed_form={}",
            h.u0,
            h.hermitian,
            h.closed_form.as_deref().unwrap_or("none")
        );
    }
}
