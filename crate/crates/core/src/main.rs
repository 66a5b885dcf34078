use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pjcalc::frontend::{run_source, Mode};
use pjcalc::sampling::{seed_from_env, SEED_VAR};
use pjcalc::selftest::{run_all, Config};

#[derive(Parser)]
#[command(name = "pjcalc", version, about = "Exact Schouten and Jacobi calculus on coordinate charts")]
struct Cli {
    /// Largest tensor degree used by randomized checks.
    #[arg(long, global = true, default_value_t = 3)]
    max_degree: usize,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Execute a program and print every result.
    Run { file: PathBuf },
    /// Execute a program, print only `check` results; exit 0 pass, 1 fail, 2 error.
    Check { file: PathBuf },
    /// Run randomized identity checks (seed from the PJCALC_SEED variable).
    Selftest {
        #[arg(long, default_value_t = 50)]
        cases: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Cmd::Run { file } => execute(&file, Mode::Run),
        Cmd::Check { file } => execute(&file, Mode::Check),
        Cmd::Selftest { cases } => {
            let seed = seed_from_env();
            println!("seed {seed} ({SEED_VAR}), max degree {}", cli.max_degree);
            let results = run_all(Config {
                seed,
                cases,
                max_degree: cli.max_degree,
            });
            let mut ok = true;
            for r in &results {
                match r.first_failure {
                    None => println!("pass  {} ({} cases)", r.name, r.cases),
                    Some(i) => {
                        ok = false;
                        println!("FAIL  {} (case {i})", r.name);
                    }
                }
            }
            ExitCode::from(if ok { 0 } else { 1 })
        }
    }
}

fn execute(file: &PathBuf, mode: Mode) -> ExitCode {
    let src = match std::fs::read_to_string(file) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", file.display());
            return ExitCode::from(2);
        }
    };
    let outcome = run_source(&src, mode);
    print!("{}", outcome.output);
    ExitCode::from(outcome.status.code() as u8)
}
