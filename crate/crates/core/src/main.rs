use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use fusion_skeleton::catalog;
use fusion_skeleton::input::{emit, parse_input, InputDocument};
use fusion_skeleton::report::{analyze, verify, AnalysisOptions};
use fusion_skeleton::Error;

#[derive(Parser)]
#[command(name = "fusion-skeleton", version, about = "Skeleton dimensions and KMS data of fusion graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a fusion or character table document.
    Analyze {
        file: PathBuf,
        /// Series order M.
        #[arg(long, default_value_t = 32)]
        order: usize,
        #[arg(long, default_value_t = 1e-12)]
        tolerance: f64,
        #[arg(long, default_value_t = 16)]
        max_path_len: usize,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// List built-in examples, or print one as a document.
    Catalog { name: Option<String> },
    /// Run the check suite only.
    Verify { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Machine,
}

const INPUT_ERROR: u8 = 2;
const CHECK_FAILURE: u8 = 1;

fn fail(err: &Error, code: u8) -> ExitCode {
    eprintln!("error [{}]: {err}", err.module());
    ExitCode::from(code)
}

fn load(path: &PathBuf) -> Result<InputDocument, ExitCode> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error [cli]: cannot read {}: {e}", path.display());
        ExitCode::from(INPUT_ERROR)
    })?;
    parse_input(&text).map_err(|e| fail(&e, INPUT_ERROR))
}

fn status(pass: bool) -> ExitCode {
    if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(CHECK_FAILURE)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Analyze { file, order, tolerance, max_path_len, format } => {
            let doc = match load(&file) {
                Ok(d) => d,
                Err(code) => return code,
            };
            let opts = AnalysisOptions { order, tolerance, max_path_len };
            match analyze(&doc, &opts) {
                Ok(report) => {
                    match format {
                        Format::Table => print!("{report}"),
                        Format::Machine => println!("{}", report.to_machine()),
                    }
                    status(report.verification.pass())
                }
                Err(e) => fail(&e, CHECK_FAILURE),
            }
        }
        Command::Catalog { name: None } => {
            for e in catalog::entries() {
                println!("{:<14} {}", e.name, e.description);
            }
            ExitCode::SUCCESS
        }
        Command::Catalog { name: Some(name) } => match catalog::lookup(&name) {
            Ok(doc) => {
                print!("{}", emit(&doc));
                ExitCode::SUCCESS
            }
            Err(e) => fail(&e, INPUT_ERROR),
        },
        Command::Verify { file } => {
            let doc = match load(&file) {
                Ok(d) => d,
                Err(code) => return code,
            };
            match verify(&doc, &AnalysisOptions::default()) {
                Ok(v) => {
                    for c in &v.checks {
                        println!("{:<18} {}  residual {:.3e}", c.name, if c.pass { "PASS" } else { "FAIL" }, c.residual);
                    }
                    status(v.pass())
                }
                Err(e) => fail(&e, CHECK_FAILURE),
            }
        }
    }
}
