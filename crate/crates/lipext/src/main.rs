use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lipext::config::load_system;
use lipext::csvio::{fmt_f64, read_net, read_table};
use lipext::{certify_system, emit_report, run_scenario, HarnessError, Overrides};
use lipext_core::extension::{verify_map_table, VerifyMode};

#[derive(Parser)]
#[command(name = "lipext", version, about = "Bilipschitz extension on conformal IFS attractors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file and write its artifacts.
    Run {
        scenario: PathBuf,
        /// Constants sampling depth and net information level.
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory (default `out/<scenario name>`).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a map table CSV, optionally onto a target net.
    Verify {
        table: PathBuf,
        #[arg(long)]
        onto: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-2)]
        eps: f64,
    },
    /// Certify the constants of one system file.
    Constants {
        system: PathBuf,
        #[arg(long, default_value_t = 10)]
        depth: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Summarize a run directory.
    Report { dir: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}

fn execute(command: Command) -> Result<i32, HarnessError> {
    match command {
        Command::Run { scenario, depth, seed, out } => {
            let outcome = run_scenario(&scenario, &Overrides { depth, seed, out })?;
            if let Some(e) = &outcome.error {
                eprintln!("error: {e}");
            }
            print!("{}", emit_report(&outcome.out_dir)?);
            Ok(outcome.exit_code())
        }
        Command::Verify { table, onto, eps } => {
            let table = read_table(&table)?;
            let (target, mode) = match &onto {
                Some(p) => (Some(read_net(p)?), VerifyMode::Onto),
                None => (None, VerifyMode::Into),
            };
            let v = verify_map_table(&table, target.as_deref(), eps, mode);
            println!("points = {}", table.len());
            println!("L_low = {}", fmt_f64(v.bounds.low()));
            println!("L_high = {}", fmt_f64(v.bounds.high()));
            println!("ratio violations = {}", v.ratio_violations);
            if let Some(g) = v.onto_gap {
                println!("onto gap = {}", fmt_f64(g));
            }
            for w in &v.witnesses {
                println!("witness: {w}");
            }
            println!("verdict = {}", if v.passed { "pass" } else { "fail" });
            Ok(if v.passed { 0 } else { 1 })
        }
        Command::Constants { system, depth, seed, samples } => {
            if depth < 4 {
                return Err(HarnessError::Input("depth must be at least 4".into()));
            }
            let spec = load_system(&system)?;
            let (_, text, passed) = certify_system(&spec, depth, samples, seed)?;
            print!("{text}");
            Ok(if passed { 0 } else { 1 })
        }
        Command::Report { dir } => {
            print!("{}", emit_report(&dir)?);
            Ok(0)
        }
    }
}
