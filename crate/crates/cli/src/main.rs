mod commands;
mod input;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use reflexa_core::Field;

#[derive(Parser, Debug)]
#[command(name = "reflexa", version, about = "Exact duality checks for modules, towers and bialgebras")]
pub struct Cli {
    /// Q or GF:p
    #[arg(long, global = true, default_value = "Q", value_parser = parse_field)]
    pub field: Field,
    /// Tower depth, power-series length, or maximal recurrence degree.
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    /// reference, trivial, or reference+N
    #[arg(long, global = true, default_value = "reference")]
    pub universe: String,
    /// Largest quasi-coherent target rank tried by the D-proquasi-coherence check.
    #[arg(long = "rank-bound", global = true, default_value_t = reflexa_core::nat::DEFAULT_RANK_BOUND)]
    pub rank_bound: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Adds wall-clock times to report records.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub verb: Verb,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Verb {
    /// Verify the duality properties of an input and print a report.
    Check {
        #[arg(value_enum)]
        kind: CheckKind,
        input: String,
    },
    /// Print the dual of an input as JSON.
    Dual {
        #[arg(value_enum)]
        kind: DualKind,
        input: String,
    },
    /// Hom between two modules: ranks, the solved quasi-coherent space, and
    /// the module-scheme source.
    Hom { source: String, target: String },
    /// Tower operations.
    Tower {
        #[arg(value_enum)]
        action: TowerAction,
        input: String,
        /// Compatible functional for `kernel`: one row per level.
        functional: Option<String>,
    },
    /// Bialgebra operations.
    Bialg {
        #[arg(value_enum)]
        action: BialgAction,
        #[arg(required = true)]
        inputs: Vec<String>,
    },
    /// Finite-dual operations on linearly recursive functionals.
    Findual {
        #[arg(value_enum)]
        action: FindualAction,
        #[arg(required = true)]
        inputs: Vec<String>,
    },
    /// Run verification suites.
    Report {
        /// all, a criterion name, or its number.
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum CheckKind {
    Module,
    Map,
    Tower,
    Bialgebra,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum DualKind {
    Module,
    Map,
    Tower,
    Bialgebra,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum TowerAction {
    Stabilize,
    Decompose,
    Dual,
    Kernel,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum BialgAction {
    Dual,
    Check,
    Iso,
    Transpose,
    Show,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FindualAction {
    Eval,
    Add,
    Mul,
    Min,
    Fit,
}

fn parse_field(s: &str) -> Result<Field, String> {
    Field::from_name(s).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
