mod commands;
mod exit;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use secav_core::cancel::CancelToken;
use secav_core::script::ScriptKind;
use secav_core::syntax::Notation;
use secav_service::{envelope, ApiError, Config};

use commands::{Failure, Outcome};

/// Proof toolkit for classical first-order logic.
#[derive(Parser)]
#[command(name = "secav", version)]
struct Cli {
    /// Wrap all output in a JSON envelope.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum NotationArg {
    Abstract,
    Standard,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Sc,
    Nd,
    W,
}

#[derive(Subcommand)]
enum Command {
    /// Reformat a script, or convert a file of formulas between notations.
    Fmt {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "abstract")]
        notation: NotationArg,
    },
    /// Check a sequent, natural deduction or Hilbert script.
    Check {
        script: PathBuf,
        /// Skip format detection.
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
        /// Axioms for Hilbert proofs: `system-w`, `fallback` or a file.
        #[arg(long)]
        axioms: Option<String>,
    },
    /// Prove a formula, printing a checked script on success.
    Prove {
        formula: String,
        /// Further formulas of the sequent.
        #[arg(long = "with")]
        with: Vec<String>,
        /// Search steps allowed.
        #[arg(long)]
        budget: Option<u64>,
        /// Seconds allowed.
        #[arg(long)]
        deadline: Option<f64>,
    },
    /// Search for a finite interpretation falsifying a formula.
    Countermodel {
        formula: String,
        #[arg(long, default_value_t = 3)]
        max_size: usize,
        /// Formula evaluations allowed.
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
    },
    /// Print the sequent of a natural deduction script's root and try to prove it.
    Translate {
        script: PathBuf,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        deadline: Option<f64>,
    },
    /// Check a Hilbert proof.
    WCheck {
        proof: PathBuf,
        #[arg(long)]
        axioms: Option<String>,
    },
    /// Search for a Hilbert proof.
    WSearch {
        formula: String,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long)]
        axioms: Option<String>,
    },
    /// Run the HTTP service (SECAV_ADDR, SECAV_DATA_DIR, SECAV_PROVER_BUDGET).
    Serve,
}

/// A token cancelled by the first interrupt.
fn cancel_on_interrupt() -> CancelToken {
    let token = CancelToken::new();
    let t = token.clone();
    std::thread::spawn(move || {
        let Ok(rt) = tokio::runtime::Builder::new_current_thread().enable_io().build() else { return };
        rt.block_on(async {
            if tokio::signal::ctrl_c().await.is_ok() {
                t.cancel();
            }
        });
    });
    token
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Fmt { file, notation } => {
            let n = match notation {
                NotationArg::Abstract => Notation::Abstract,
                NotationArg::Standard => Notation::Standard,
            };
            commands::fmt(&commands::read_input(&file)?, n)
        }
        Command::Check { script, format, axioms } => {
            let kind = format.map(|f| match f {
                FormatArg::Sc => ScriptKind::Sequent,
                FormatArg::Nd => ScriptKind::NaturalDeduction,
                FormatArg::W => ScriptKind::Hilbert,
            });
            commands::check(&commands::read_input(&script)?, kind, &commands::load_axioms(axioms.as_deref())?)
        }
        Command::Prove { formula, with, budget, deadline } => {
            let seq: Vec<String> = std::iter::once(formula).chain(with).collect();
            commands::prove(&seq, &commands::budget(budget, deadline)?, &cancel_on_interrupt())
        }
        Command::Countermodel { formula, max_size, budget } => {
            commands::countermodel(&formula, max_size, budget, &cancel_on_interrupt())
        }
        Command::Translate { script, budget, deadline } => {
            commands::translate(&commands::read_input(&script)?, &commands::budget(budget, deadline)?, &cancel_on_interrupt())
        }
        Command::WCheck { proof, axioms } => {
            commands::check(&commands::read_input(&proof)?, Some(ScriptKind::Hilbert), &commands::load_axioms(axioms.as_deref())?)
        }
        Command::WSearch { formula, depth, axioms } => {
            commands::w_search(&formula, depth, &commands::load_axioms(axioms.as_deref())?, &cancel_on_interrupt())
        }
        Command::Serve => unreachable!("handled before dispatch"),
    }
}

fn serve() -> Result<(), Failure> {
    let fail = |e: String| Failure { exit: exit::USAGE, error: ApiError::new(500, "ServeError", e) };
    let config = Config::from_env().map_err(|e| fail(e.to_string()))?;
    let rt = tokio::runtime::Builder::new_multi_thread().enable_all().build().map_err(|e| fail(e.to_string()))?;
    rt.block_on(secav_service::serve(config)).map_err(|e| fail(e.to_string()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE } else { exit::OK });
        }
    };
    let result = match cli.command {
        Command::Serve => serve().map(|()| commands::Report { exit: 0, text: String::new(), data: serde_json::Value::Null }),
        command => run(command),
    };
    let code = match &result {
        Ok(r) => r.exit,
        Err(f) => f.exit,
    };
    if cli.json {
        let env = envelope(&result.map(|r| r.data).map_err(|f| f.error));
        println!("{}", serde_json::to_string_pretty(&env).expect("envelopes serialize"));
    } else {
        match result {
            Ok(r) => print!("{}", r.text),
            Err(f) => eprintln!("error: {}", f.error.message),
        }
    }
    ExitCode::from(code)
}
