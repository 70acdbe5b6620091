use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use crgeom::sampling::{DEFAULT_POINTS, DEFAULT_SEED};
use crgeom_verify::config::{parse_examples, parse_override, SUPPORTED_M};
use crgeom_verify::{catalog, run_many, ReportSet, Suite, SuiteConfig, VerifyError};

#[derive(Parser)]
#[command(name = "verify", version, about = "Numerical checks of CR and Fefferman constructions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run suites and print a JSON report.
    Run {
        /// Catalog id, or `all`.
        #[arg(long)]
        example: String,
        /// Complex dimension of the base; both supported values when omitted.
        #[arg(long)]
        m: Option<usize>,
        /// Comma-separated suite ids, or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = DEFAULT_POINTS)]
        points: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Tolerance override `check.name=value`; repeatable.
        #[arg(long = "tol")]
        tol: Vec<String>,
        /// Write the JSON report here and print a summary instead.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Show the example catalog.
    List {
        #[arg(long)]
        json: bool,
    },
}

fn run(cli: Cli) -> Result<bool, VerifyError> {
    match cli.command {
        Command::List { json } => {
            if json {
                println!("{}", serde_json::to_string_pretty(&catalog::catalog())?);
            } else {
                print!("{}", catalog::table());
            }
            Ok(true)
        }
        Command::Run {
            example,
            m,
            suite,
            points,
            seed,
            tol,
            out,
        } => {
            let examples = parse_examples(&example)?;
            let ms = match m {
                Some(m) => vec![m],
                None => SUPPORTED_M.to_vec(),
            };
            let tol_overrides = tol.iter().map(|t| parse_override(t)).collect::<Result<BTreeMap<_, _>, _>>()?;
            let base = SuiteConfig {
                suites: Suite::parse_list(&suite)?,
                points,
                seed,
                tol_overrides,
                out_path: out.clone(),
                ..SuiteConfig::new(examples[0], ms[0])
            };
            let reports = run_many(&base, &examples, &ms)?;
            let pass = reports.iter().all(|r| r.pass);
            let json = if reports.len() == 1 {
                serde_json::to_string_pretty(&reports[0])?
            } else {
                serde_json::to_string_pretty(&ReportSet::new(reports.clone()))?
            };
            match out {
                Some(path) => {
                    std::fs::write(&path, json + "\n")?;
                    for r in &reports {
                        print!("{}", r.summary());
                    }
                }
                None => println!("{json}"),
            }
            Ok(pass)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("verify: {e}");
            ExitCode::from(2)
        }
    }
}
