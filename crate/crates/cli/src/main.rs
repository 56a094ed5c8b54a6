use clap::{Parser, Subcommand};
use qdice::demos::{run_demo, DEMO_NAMES};
use qdice::output::{render_csv, render_human};
use qdice::runner::{run_scenario_text, RunError, RunOptions, DEFAULT_TABLE_TOL};
use qdice::scenario::load_scenario;
use std::path::PathBuf;
use std::process::ExitCode;

/// Quantum coin and die experiments from declarative scenario files.
#[derive(Parser)]
#[command(name = "qdice", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Override the seed of every sampling stage.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Tolerance for re-validating emitted probability tables.
    #[arg(long, global = true)]
    tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a scenario file and print its tables.
    Run {
        file: PathBuf,
        /// Write the machine-readable result (JSON) here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print CSV instead of aligned tables.
        #[arg(long)]
        csv: bool,
        /// Include the density matrix after every stage in the result.
        #[arg(long)]
        dump_states: bool,
    },
    /// Print one of the built-in demonstrations.
    Demo { name: String },
    /// Check a scenario file without executing it.
    Validate { file: PathBuf },
}

const EXIT_PARSE: u8 = 3;

fn read_file(path: &PathBuf) -> Result<String, RunError> {
    std::fs::read_to_string(path).map_err(|e| RunError::Parse {
        message: format!("cannot read {}: {e}", path.display()),
    })
}

fn fail(err: &RunError) -> ExitCode {
    eprintln!("qdice: {err}");
    ExitCode::from(err.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let options = RunOptions {
        seed_override: cli.seed,
        tolerance: cli.tol.unwrap_or(DEFAULT_TABLE_TOL),
        dump_states: false,
    };
    match cli.command {
        Command::Run { file, out, csv, dump_states } => {
            let text = match read_file(&file) {
                Ok(t) => t,
                Err(e) => return fail(&e),
            };
            let options = RunOptions { dump_states, ..options };
            let result = match run_scenario_text(&text, &options) {
                Ok(r) => r,
                Err(e) => return fail(&e),
            };
            // scenario may ask for sample sections to be suppressed
            let show_samples = match load_scenario(&text) {
                Ok(s) => s.outputs.is_empty() || s.outputs.iter().any(|o| o == "samples"),
                Err(_) => true,
            };
            if csv {
                print!("{}", render_csv(&result));
            } else {
                print!("{}", render_human(&result, show_samples));
            }
            if let Some(path) = out {
                let json = serde_json::to_string_pretty(&result)
                    .expect("run results always serialize");
                if let Err(e) = std::fs::write(&path, json + "\n") {
                    eprintln!("qdice: cannot write {}: {e}", path.display());
                    return ExitCode::from(EXIT_PARSE);
                }
            }
            ExitCode::SUCCESS
        }
        Command::Demo { name } => match run_demo(&name) {
            Some(text) => {
                print!("{text}");
                ExitCode::SUCCESS
            }
            None => {
                eprintln!("qdice: unknown demo '{name}'");
                eprintln!("available demos: {}", DEMO_NAMES.join(", "));
                ExitCode::from(2)
            }
        },
        Command::Validate { file } => {
            let text = match read_file(&file) {
                Ok(t) => t,
                Err(e) => return fail(&e),
            };
            match load_scenario(&text).map_err(RunError::from) {
                Ok(_) => {
                    println!("{{\"status\":\"ok\"}}");
                    ExitCode::SUCCESS
                }
                Err(err) => {
                    let stage = err
                        .stage()
                        .map(|i| i.to_string())
                        .unwrap_or_else(|| "null".into());
                    println!(
                        "{{\"status\":\"error\",\"class\":\"{}\",\"stage\":{},\"message\":{}}}",
                        err.class(),
                        stage,
                        serde_json::to_string(&err.to_string()).expect("string serializes"),
                    );
                    fail(&err)
                }
            }
        }
    }
}
