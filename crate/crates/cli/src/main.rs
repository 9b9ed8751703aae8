use std::io::{IsTerminal, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use qf2_cli::{error_report, parse_job_with, render_text, run_job, CliError, Command, JobSpec, Overrides, RunOptions};

/// Invariants, isometry, isotropy and similarity of quadratic forms over F_q(t), q = 2^k.
///
/// The job document (JSON or the line format) is read from --input or stdin.
/// Exit codes: 0 decided, 1 negative verdict, 2 error, 3 similarity factor
/// not found within the degree bound.
#[derive(Parser, Debug)]
#[command(name = "qf2", version)]
struct Args {
    /// invariants, localize, isometric, similar, isotropic, factor, reciprocity or selftest
    command: Command,
    /// Field degree k of F_q over F_2, 1..=8
    #[arg(long = "field", value_name = "K")]
    field: Option<u32>,
    /// Job document; `-` reads stdin
    #[arg(long, value_name = "FILE")]
    input: Option<PathBuf>,
    /// Largest prime degree tried by the similarity factor search (default 6)
    #[arg(long, value_name = "N")]
    degree_bound: Option<usize>,
    /// Seed for selftest batteries (default 0)
    #[arg(long, value_name = "S")]
    seed: Option<u64>,
    /// Samples per selftest battery
    #[arg(long, value_name = "N")]
    trials: Option<usize>,
    /// Emit the JSON report instead of the text table
    #[arg(long)]
    json: bool,
    /// Include per-place local profiles
    #[arg(long)]
    verbose: bool,
    /// Include elapsed time in the report
    #[arg(long)]
    timing: bool,
    /// Exit code for a negative verdict
    #[arg(long, value_name = "CODE", default_value_t = 1)]
    negative_exit: u8,
}

fn read_document(args: &Args) -> Result<String, CliError> {
    let mut text = String::new();
    match &args.input {
        Some(p) if p.as_os_str() != "-" => {
            text = std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
        }
        Some(_) => {
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| CliError::Io(e.to_string()))?;
        }
        None if !std::io::stdin().is_terminal() && args.command != Command::Selftest => {
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| CliError::Io(e.to_string()))?;
        }
        None => {}
    }
    Ok(text)
}

fn load(args: &Args) -> Result<JobSpec, CliError> {
    let text = read_document(args)?;
    let over = Overrides {
        k: args.field,
        command: Some(args.command),
        degree_bound: args.degree_bound,
        seed: args.seed,
        trials: args.trials,
    };
    parse_job_with(&text, &over)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let opts = RunOptions {
        verbose: args.verbose,
        timing: args.timing,
        negative_exit: args.negative_exit as i32,
    };
    let report = match load(&args) {
        Ok(job) => run_job(&job, &opts),
        Err(e) => error_report(&e),
    };
    if args.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&report.json).expect("reports serialize")
        );
    } else if let Some(err) = report.json.get("error") {
        eprintln!(
            "error [{}]: {}",
            err["code"].as_str().unwrap_or_default(),
            err["message"].as_str().unwrap_or_default()
        );
    } else {
        print!("{}", render_text(&report.json));
    }
    ExitCode::from(report.exit_code as u8)
}
