use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dgbo_lab::checkpoint::Checkpoint;
use dgbo_lab::config::RunConfig;
use dgbo_lab::{runner, scenarios, verify, LabError};

/// Dispersion-generalized Benjamin-Ono experiments.
#[derive(Parser)]
#[command(name = "dgbo", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a JSON config or a built-in scenario. Outputs go under $DGBO_OUTPUT_ROOT.
    Run {
        /// Config file path or built-in scenario name.
        config: String,
    },
    /// Run a verification suite and print a pass/fail table.
    Verify {
        /// operators, weights, commutators, groundstate, evolution, functionals or all
        suite: String,
    },
    /// Print a checkpoint as CSV.
    Export {
        checkpoint: PathBuf,
        /// Write `x,u` rows (the only supported format).
        #[arg(long)]
        csv: bool,
    },
    /// List the built-in scenarios.
    Scenarios,
}

fn load(spec: &str) -> Result<(RunConfig, String), LabError> {
    let path = Path::new(spec);
    if !path.exists() {
        if let Some(cfg) = scenarios::builtin(spec) {
            return Ok((cfg, format!("builtin:{spec}")));
        }
    }
    Ok((RunConfig::load(path)?, spec.to_string()))
}

fn run(spec: &str) -> Result<ExitCode, LabError> {
    let (cfg, source) = load(spec)?;
    let outcome = runner::run(&cfg, &source, &runner::output_root())?;
    let json = serde_json::to_string_pretty(&outcome.summary).expect("summary serializes");
    let _ = writeln!(std::io::stdout(), "{json}");
    eprintln!("outputs written to {}", outcome.dir.display());
    Ok(if outcome.summary.passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn export(path: &Path) -> Result<ExitCode, LabError> {
    let ck = Checkpoint::read(path)?;
    let u = ck.to_field().map_err(|e| LabError::Format {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let mut w = csv::Writer::from_writer(std::io::stdout());
    let fail = |e: csv::Error| LabError::Format {
        path: "stdout".into(),
        message: e.to_string(),
    };
    w.write_record(["x", "u"]).map_err(fail)?;
    for (x, v) in u.grid().nodes().iter().zip(u.samples()) {
        if let Err(e) = w.serialize((x, v)) {
            if matches!(e.kind(), csv::ErrorKind::Io(io) if io.kind() == std::io::ErrorKind::BrokenPipe) {
                return Ok(ExitCode::SUCCESS);
            }
            return Err(fail(e));
        }
    }
    match w.flush() {
        Ok(()) => {}
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => return Ok(ExitCode::SUCCESS),
        Err(e) => return Err(LabError::io("stdout", e)),
    }
    eprintln!("N = {}, L = {}, alpha = {}, t = {}", ck.n(), ck.length, ck.alpha, ck.t);
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config } => run(&config),
        Command::Verify { suite } => verify::run_suite(&suite).map(|r| {
            let _ = write!(std::io::stdout(), "{}", verify::table(&r));
            if r.iter().all(|c| c.passed()) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }),
        Command::Export { checkpoint, csv } => {
            if csv {
                export(&checkpoint)
            } else {
                Err(LabError::config("export", "--csv", "only CSV export is supported; pass --csv"))
            }
        }
        Command::Scenarios => {
            for name in scenarios::NAMES {
                println!("{name}");
            }
            Ok(ExitCode::SUCCESS)
        }
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
