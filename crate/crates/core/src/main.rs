use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use lofeed::commands::{self, RunOptions, Syndrome};
use lofeed::optimize::OptimizerConfig;
use lofeed::report::{Format, Report};
use lofeed::{Error, FockState, NetworkSpec};

/// Simulate and optimize post-selected linear-optical sign-shift gates.
#[derive(Debug, Parser)]
#[command(name = "lofeed", version)]
struct Cli {
    /// Largest signal photon number in amplitude and outcome tables.
    #[arg(long, global = true, default_value_t = lofeed::DEFAULT_CUTOFF)]
    cutoff: usize,
    /// Override every check's tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Random starts per optimization.
    #[arg(long, global = true, default_value_t = 64)]
    restarts: usize,
    /// Extra optimizer option as key=value (penalty, max_evals, grid_step, ...).
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    settings: Vec<String>,
    /// text, json or csv.
    #[arg(long, global = true, default_value = "text")]
    format: String,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Network file replacing the canonical gate.
    #[arg(long, global = true)]
    network: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Success branch of the gate.
    Ns,
    /// Failure statistics and recovery ceilings.
    Bounds,
    /// Classified table of every detection pattern.
    Syndromes {
        #[arg(long)]
        ancilla: Option<FockState>,
    },
    /// Optimize a correction network for one syndrome.
    Correct {
        /// 00 (photon added) or 01 (photon number preserved).
        #[arg(long)]
        syndrome: Syndrome,
    },
    /// Jointly optimized gate and correction networks.
    Chain {
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
        rounds: u8,
    },
    /// Optimize the gate for a given ancilla.
    Optimize {
        #[arg(long, default_value = "1,0")]
        ancilla: FockState,
    },
    /// Scan the success/syndrome trade-off along the last splitter angle.
    Tradeoff,
    /// Run every check.
    All,
}

fn options(cli: &Cli) -> lofeed::Result<RunOptions> {
    let mut optimizer = OptimizerConfig { seed: cli.seed, restarts: cli.restarts, ..Default::default() };
    for s in &cli.settings {
        let (k, v) = s.split_once('=').ok_or_else(|| Error::Config(format!("expected key=value, got '{s}'")))?;
        optimizer.set(k.trim(), v.trim())?;
    }
    let network = match &cli.network {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            Some(NetworkSpec::from_text(&text)?)
        }
        None => None,
    };
    let opts = RunOptions { cutoff: cli.cutoff, tol: cli.tol, optimizer, network };
    opts.validate()?;
    Ok(opts)
}

fn run(cli: &Cli, opts: &RunOptions) -> lofeed::Result<Report> {
    match &cli.command {
        Command::Ns => commands::cmd_ns(opts),
        Command::Bounds => commands::cmd_bounds(opts),
        Command::Syndromes { ancilla } => commands::cmd_syndromes(opts, ancilla.as_ref()),
        Command::Correct { syndrome } => commands::cmd_correct(opts, *syndrome),
        Command::Chain { rounds } => commands::cmd_chain(opts, usize::from(*rounds)),
        Command::Optimize { ancilla } => commands::cmd_optimize(opts, ancilla),
        Command::Tradeoff => commands::cmd_tradeoff(opts),
        Command::All => commands::cmd_all(opts),
    }
}

/// Writes via a sibling temporary file so readers never see a partial report.
fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)
}

fn invalid(message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format: Format = match cli.format.parse() {
        Ok(f) => f,
        Err(e) => return invalid(e),
    };
    let opts = match options(&cli) {
        Ok(o) => o,
        Err(e) => return invalid(e),
    };
    let report = match run(&cli, &opts) {
        Ok(r) => r,
        Err(e @ (Error::Config(_) | Error::ModeCountMismatch { .. } | Error::InvalidTarget(_))) => return invalid(e),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let rendered = match report.render(format) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = write_atomic(path, &rendered) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{rendered}"),
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
