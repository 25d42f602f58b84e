use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fivefold_cli::scenarios::{dispersion_rows, run_evolution, write_dispersion_csv};
use fivefold_cli::{run_suite, Report, ScenarioConfig, EXIT_CONFIG, EXIT_FAILURE, EXIT_PASS};

#[derive(Parser)]
#[command(
    name = "fivefold",
    version,
    about = "Verification harness for five-vector bivector geometry"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and report every check.
    Verify {
        /// TOML (or JSON) scenario file.
        #[arg(long)]
        config: PathBuf,
        /// Restrict to these suites (repeatable); overrides the config list.
        #[arg(long = "suite")]
        suites: Vec<String>,
        /// Directory for report.json and report.csv.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Plane-wave dispersion branches as CSV.
    Dispersion {
        #[arg(long)]
        kappa: f64,
        /// Propagation direction `x,y,z`.
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        kvec: Vec<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evolve one plane wave in 1+1D and measure its frequency (JSON output).
    Evolve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Convert a JSON report.
    Report {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// Either a configuration problem (exit 2) or a failed run (exit 1).
enum Failure {
    Config(String),
    Run(String),
}

fn config_err(e: impl std::fmt::Display) -> Failure {
    Failure::Config(e.to_string())
}

fn io_err(e: impl std::fmt::Display) -> Failure {
    Failure::Run(e.to_string())
}

fn load(
    path: &Path,
    suites: Vec<String>,
) -> Result<(ScenarioConfig, fivefold_cli::Settings), Failure> {
    let mut cfg = ScenarioConfig::load(path).map_err(config_err)?;
    if !suites.is_empty() {
        cfg.suites = Some(suites);
    }
    let settings = cfg.settings().map_err(config_err)?;
    Ok((cfg, settings))
}

fn verify(config: PathBuf, suites: Vec<String>, out: Option<PathBuf>) -> Result<bool, Failure> {
    let (cfg, settings) = load(&config, suites)?;
    let report = run_suite(&settings);
    for c in &report.checks {
        let order = c
            .order
            .map(|o| format!(" order {o:.2}"))
            .unwrap_or_default();
        let last = c.residuals.last().copied().unwrap_or(f64::NAN);
        println!(
            "{} {}/{}: {:.3e}{} ({:.2}s)",
            if c.pass { "PASS" } else { "FAIL" },
            c.suite,
            c.id,
            last,
            order,
            c.wall_time
        );
    }
    let failed = report.failures().count();
    println!("{} checks, {} failed", report.checks.len(), failed);
    if let Some(dir) = out.or(cfg.output.dir.map(PathBuf::from)) {
        report.write_dir(&dir).map_err(io_err)?;
    }
    Ok(report.pass)
}

fn dispersion(kappa: f64, kvec: Vec<f64>, out: PathBuf) -> Result<bool, Failure> {
    let k: [f64; 3] = kvec
        .try_into()
        .map_err(|_| Failure::Config("--kvec needs three components".into()))?;
    let rows = dispersion_rows(kappa, k).map_err(config_err)?;
    let file = std::fs::File::create(&out).map_err(io_err)?;
    write_dispersion_csv(&rows, file).map_err(io_err)?;
    Ok(true)
}

fn evolve(config: PathBuf, out: PathBuf) -> Result<bool, Failure> {
    let (_, settings) = load(&config, vec![])?;
    let rep = run_evolution(&settings).map_err(|e| match e {
        fivefold::Error::Precondition(m) => Failure::Run(m),
        other => Failure::Config(other.to_string()),
    })?;
    println!(
        "{}: measured {:.6} expected {:.6} (relative error {:.2e})",
        rep.branch, rep.measured_frequency, rep.expected_frequency, rep.relative_error
    );
    let text = serde_json::to_string_pretty(&rep).map_err(io_err)?;
    std::fs::write(&out, text).map_err(io_err)?;
    Ok(true)
}

fn report(input: PathBuf, format: Format, out: Option<PathBuf>) -> Result<bool, Failure> {
    let text = std::fs::read_to_string(&input).map_err(config_err)?;
    let rep = Report::from_json(&text).map_err(config_err)?;
    let body = match format {
        Format::Csv => rep.csv_string(),
        Format::Json => rep.to_json(),
    };
    match out {
        Some(p) => std::fs::write(p, body).map_err(io_err)?,
        None => print!("{body}"),
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify {
            config,
            suites,
            out,
        } => verify(config, suites, out),
        Command::Dispersion { kappa, kvec, out } => dispersion(kappa, kvec, out),
        Command::Evolve { config, out } => evolve(config, out),
        Command::Report { input, format, out } => report(input, format, out),
    };
    let code = match result {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_FAILURE,
        Err(Failure::Config(m)) => {
            eprintln!("{m}");
            EXIT_CONFIG
        }
        Err(Failure::Run(m)) => {
            eprintln!("error: {m}");
            EXIT_FAILURE
        }
    };
    ExitCode::from(code as u8)
}
