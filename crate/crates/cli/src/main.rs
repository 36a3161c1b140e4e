use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rpif_cli::compare::compare_modes;
use rpif_cli::config::{check_oracle_schedule, ModeSelection};
use rpif_cli::output::{write_rows, Format};
use rpif_cli::sweep::{working_scenario, MODE_AGREEMENT};
use rpif_cli::{exit, parse_config, run_sweep, Config, RunOptions};

#[derive(Parser)]
#[command(
    name = "rpif",
    version,
    about = "Interference of two continuously monitored beams"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a sweep and write one row per point and mode.
    Simulate(SimulateArgs),
    /// Print both evaluators side by side for the configured scenario.
    Compare(ConfigArg),
    /// Check a configuration without evaluating it.
    Validate(ConfigArg),
}

#[derive(Args)]
struct ConfigArg {
    #[arg(long)]
    config: PathBuf,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    config: PathBuf,
    /// Write here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// literal, derived or both; overrides the configuration.
    #[arg(long, value_parser = parse_mode)]
    mode: Option<ModeSelection>,
    /// Lattice sizes for the oracle, e.g. 256,512,1024.
    #[arg(long, value_delimiter = ',', value_parser = clap::value_parser!(usize))]
    oracle: Option<Vec<usize>>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
    /// Exit with status 3 when the two evaluators disagree on any term.
    #[arg(long)]
    strict_modes: bool,
}

fn parse_mode(s: &str) -> Result<ModeSelection, String> {
    s.parse()
}

fn load(path: &Path) -> Result<Config, i32> {
    let text = fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        exit::CONFIG
    })?;
    parse_config(&text).map_err(|e| {
        for d in &e.0 {
            eprintln!("error: {d}");
        }
        exit::CONFIG
    })
}

fn simulate(args: SimulateArgs) -> Result<i32, i32> {
    let config = load(&args.config)?;
    if let Some(levels) = &args.oracle {
        if let Err(msg) = check_oracle_schedule(levels) {
            eprintln!("error: --oracle: {msg}");
            return Err(exit::CONFIG);
        }
    }
    let options = RunOptions {
        mode: args.mode,
        oracle: args.oracle,
        jobs: args.jobs,
        strict_modes: args.strict_modes,
    };
    let outcome = run_sweep(&config, &options).map_err(|e| {
        eprintln!("error: cannot start worker threads: {e}");
        exit::NUMERICAL
    })?;

    let written = match &args.output {
        Some(path) => fs::File::create(path)
            .and_then(|f| write_rows(&outcome.rows, args.format, io::BufWriter::new(f))),
        None => write_rows(&outcome.rows, args.format, io::stdout().lock()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write results: {e}");
        return Err(exit::CONFIG);
    }

    for (i, row) in outcome.rows.iter().enumerate() {
        if let Some(e) = &row.error {
            eprintln!(
                "row {i} ({} = {}, {}): {e}",
                config.sweep.parameter.as_str(),
                row.swept_value,
                row.mode
            );
        }
    }
    if outcome.any_failed() {
        return Ok(exit::NUMERICAL);
    }
    if let Some(gap) = outcome.mode_gap {
        if gap > MODE_AGREEMENT {
            eprintln!("modes disagree: largest term gap {gap:e} exceeds {MODE_AGREEMENT:e}");
            return Ok(exit::MODE_DISAGREEMENT);
        }
    }
    Ok(exit::SUCCESS)
}

fn compare(args: ConfigArg) -> Result<i32, i32> {
    let config = load(&args.config)?;
    let (scenario, _) = working_scenario(&config.scenario, config.units).map_err(|e| {
        eprintln!("error: {e}");
        exit::NUMERICAL
    })?;
    let report = compare_modes(&scenario).map_err(|e| {
        eprintln!("error: {e}");
        exit::NUMERICAL
    })?;
    print!("{}", report.render());
    let _ = io::stdout().flush();
    if !report.derived_ok() {
        return Ok(exit::NUMERICAL);
    }
    if report.literal_exceeds_tolerance() {
        return Ok(exit::MODE_DISAGREEMENT);
    }
    Ok(exit::SUCCESS)
}

fn validate(args: ConfigArg) -> Result<i32, i32> {
    let config = load(&args.config)?;
    println!(
        "ok: {} sweep point(s) over {}",
        config.sweep.steps,
        config.sweep.parameter.as_str()
    );
    Ok(exit::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Compare(a) => compare(a),
        Command::Validate(a) => validate(a),
    };
    let code = code.unwrap_or_else(|c| c);
    ExitCode::from(code as u8)
}
