//! Experiment runner for the compact-scheme library.
//!
//! Every subcommand resolves an [`ExperimentConfig`] from its defaults, an
//! optional `--config` file and the command-line flags (in that order), runs
//! it, writes a CSV table and prints a summary.

pub mod config;
mod error;
pub mod experiments;
pub mod output;
mod parallel;
pub mod reference;

pub use config::{Courant, Experiment, ExperimentConfig, Solution};
pub use error::CliError;
pub use experiments::{CheckLine, Outcome};

use clap::{Args, Parser, Subcommand};
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "cpde", version, about = "Compact implicit schemes: convergence, spectra and conservation experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Errors and observed order over a sequence of grids.
    Convergence(Flags),
    /// Richardson extrapolation from grids N and 2N.
    Richardson(Flags),
    /// Convergence with the coefficient polynomials truncated at h⁵..h⁹.
    Cut(Flags),
    /// Departure of the one-step operators from self-adjointness.
    Asymmetry(Flags),
    /// Eigenvalues of the transition matrix.
    Spectrum(Flags),
    /// Oscillation of the quadrature of |Ψ|² for the homogeneous Schrödinger-type problem.
    FirstIntegral(Flags),
    /// Error against multiplications per step for two schemes.
    Efficiency(Flags),
    /// Coefficients of one interior row, closed form against the oracle.
    DeriveRow(Flags),
    /// Run the experiment named in a configuration file.
    Run {
        #[arg(value_name = "CONFIG")]
        file: PathBuf,
        #[command(flatten)]
        flags: Flags,
    },
}

#[derive(Args, Debug, Default)]
struct Flags {
    /// `key = value` configuration file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// s1, s2:k=2, s3:a=1,b=2,omega=10, sn, snll, dirichlet-demo or neumann-demo.
    #[arg(long)]
    solution: Option<String>,
    /// compact, compact:h5 .. compact:h9, classic:pointwise, classic:three-point, classic:five-point.
    #[arg(long)]
    scheme: Option<String>,
    /// Neumann rows: compact, reduced, leading, classic or classic:<ε>.
    #[arg(long)]
    neumann: Option<String>,
    /// Reference scheme for `efficiency`.
    #[arg(long)]
    baseline: Option<String>,
    /// Comma-separated grid sizes.
    #[arg(long)]
    ns: Option<String>,
    /// Single grid size (same as --ns N).
    #[arg(long, conflicts_with = "ns")]
    n: Option<usize>,
    /// Courant parameter ν*; a trailing `i` (e.g. 100i) selects the Schrödinger-type equation.
    #[arg(long, allow_hyphen_values = true)]
    courant: Option<String>,
    #[arg(long)]
    t_final: Option<String>,
    /// Courant values scanned for the sign change of the spectrum.
    #[arg(long)]
    nu_grid: Option<String>,
    /// Interior node index for `derive-row`.
    #[arg(long)]
    node: Option<String>,
    /// CSV destination; standard output if omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Evaluate the published acceptance thresholds; exit 4 if one is missed.
    #[arg(long)]
    check: bool,
    /// Print the resolved configuration and exit.
    #[arg(long)]
    print_config: bool,
}

fn resolve(experiment: Option<Experiment>, flags: &Flags, config: Option<&PathBuf>) -> Result<ExperimentConfig, CliError> {
    let mut cfg = match config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            let mut cfg = match experiment {
                Some(e) => ExperimentConfig::defaults(e),
                None => ExperimentConfig::parse(&text)?,
            };
            cfg.apply_text(&text)?;
            if let Some(e) = experiment.filter(|&e| e != cfg.experiment) {
                return Err(CliError::Config(format!(
                    "{} describes `{}`, not `{e}`",
                    path.display(),
                    cfg.experiment
                )));
            }
            cfg
        }
        None => ExperimentConfig::defaults(experiment.expect("subcommand names the experiment")),
    };
    let overrides = [
        ("solution", &flags.solution),
        ("scheme", &flags.scheme),
        ("neumann", &flags.neumann),
        ("baseline", &flags.baseline),
        ("ns", &flags.ns),
        ("courant", &flags.courant),
        ("t_final", &flags.t_final),
        ("nu_grid", &flags.nu_grid),
        ("node", &flags.node),
    ];
    for (key, value) in overrides {
        if let Some(v) = value {
            cfg.set(key, v).map_err(|e| CliError::Config(format!("--{}: {e}", key.replace('_', "-"))))?;
        }
    }
    if let Some(n) = flags.n {
        cfg.ns = vec![n];
    }
    if let Some(p) = &flags.output {
        cfg.output = Some(p.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn execute(cfg: &ExperimentConfig, check: bool, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    let outcome = experiments::run(cfg)?;
    let csv = outcome.table.to_csv();
    match &cfg.output {
        Some(path) => {
            std::fs::write(path, csv)?;
            stdout.write_all(outcome.summary.as_bytes())?;
        }
        None => {
            stdout.write_all(csv.as_bytes())?;
            stderr.write_all(outcome.summary.as_bytes())?;
        }
    }
    if !check {
        return Ok(());
    }
    if outcome.checks.is_empty() {
        writeln!(stderr, "check: no published threshold applies to this configuration")?;
        return Ok(());
    }
    let mut failed = Vec::new();
    for c in &outcome.checks {
        let status = match (c.ok, c.known) {
            (true, _) => "ok  ",
            (false, Some(_)) => "FAIL (known)",
            (false, None) => "FAIL",
        };
        write!(stderr, "check {status} {}", c.what)?;
        match c.known.filter(|_| !c.ok) {
            Some(reason) => writeln!(stderr, "  -- {reason}")?,
            None => writeln!(stderr)?,
        }
        if !c.ok && c.known.is_none() {
            failed.push(c.what.clone());
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Check(failed.join("; ")))
    }
}

/// Parses `argv` (including the program name), runs, and returns the exit code.
pub fn run_cli<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let (experiment, flags, config) = match &cli.command {
        Command::Convergence(f) => (Some(Experiment::Convergence), f, f.config.as_ref()),
        Command::Richardson(f) => (Some(Experiment::Richardson), f, f.config.as_ref()),
        Command::Cut(f) => (Some(Experiment::Cut), f, f.config.as_ref()),
        Command::Asymmetry(f) => (Some(Experiment::Asymmetry), f, f.config.as_ref()),
        Command::Spectrum(f) => (Some(Experiment::Spectrum), f, f.config.as_ref()),
        Command::FirstIntegral(f) => (Some(Experiment::FirstIntegral), f, f.config.as_ref()),
        Command::Efficiency(f) => (Some(Experiment::Efficiency), f, f.config.as_ref()),
        Command::DeriveRow(f) => (Some(Experiment::DeriveRow), f, f.config.as_ref()),
        Command::Run { file, flags } => {
            if flags.config.is_some() {
                let _ = writeln!(stderr, "cpde: configuration error: `run` takes the file as its argument, not --config");
                return 2;
            }
            (None, flags, Some(file))
        }
    };
    let result = resolve(experiment, flags, config).and_then(|cfg| {
        if flags.print_config {
            stdout.write_all(cfg.serialize().as_bytes())?;
            Ok(())
        } else {
            execute(&cfg, flags.check, stdout, stderr)
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "cpde: {e}");
            e.exit_code()
        }
    }
}
