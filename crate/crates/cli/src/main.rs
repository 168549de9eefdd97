use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use infodens_cli::config::{ExperimentConfig, Fault, Format};
use infodens_cli::output::emit;
use infodens_cli::{report, suites, sweep, CliError};

#[derive(Parser)]
#[command(
    name = "infodens",
    version,
    about = "Exact information-density generalization bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the selected bounds with exact ground truth.
    Report(Common),
    /// Run the verification suites; exits 1 if any check fails.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Inject an understated constant into the exponential-inequality suite.
        #[arg(long, value_enum)]
        fault: Option<Fault>,
    },
    /// Evaluate the bounds along one parameter axis.
    Sweep(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

impl Common {
    fn load(&self) -> Result<ExperimentConfig, CliError> {
        let mut cfg = ExperimentConfig::from_path(&self.config)?;
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(p) = &self.out {
            cfg.output.path = Some(p.clone());
        }
        if let Some(f) = self.format {
            cfg.output.format = Some(f);
        }
        Ok(cfg)
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Report(c) => {
            let cfg = c.load()?;
            let rows = report::report_rows(&cfg)?;
            emit(
                &rows,
                cfg.output.format.unwrap_or_default(),
                cfg.output.path.as_deref(),
            )
        }
        Command::Sweep(c) => {
            let cfg = c.load()?;
            let rows = sweep::sweep_rows(&cfg)?;
            emit(
                &rows,
                cfg.output.format.unwrap_or_default(),
                cfg.output.path.as_deref(),
            )
        }
        Command::Verify { common, fault } => {
            let mut cfg = common.load()?;
            if fault.is_some() {
                cfg.verify.fault = fault;
            }
            let outcome = suites::run(&cfg)?;
            for r in &outcome.rows {
                eprintln!("{}: {} checks, {} failures", r.suite, r.checks, r.failures);
            }
            for f in &outcome.failures {
                eprintln!("FAIL {} [{}] {}", f.suite, f.instance, f.detail);
            }
            if let Some(p) = cfg.output.path.as_deref() {
                emit(
                    &outcome.rows,
                    cfg.output.format.unwrap_or_default(),
                    Some(p),
                )?;
            }
            match outcome.failures.len() {
                0 => Ok(()),
                n => Err(CliError::Invariant(n)),
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("infodens: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
