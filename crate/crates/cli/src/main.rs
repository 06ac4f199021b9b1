//! `polytriv` command-line front end.

mod commands;
mod error;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "polytriv", version)]
#[command(about = "Polymorphisms of finite predicates: triviality, symmetric classification, impossibility domains")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Print the structured JSON report instead of text
    #[arg(long, global = true, env = "POLYTRIV_JSON")]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check whether a tuple of functions is a polymorphism
    Check {
        #[command(flatten)]
        input: InputArgs,
        /// JSON tuple file: {"n": arity, "tables": [...]}
        #[arg(long, env = "POLYTRIV_TUPLE")]
        tuple: PathBuf,
    },
    /// List every polymorphism of a given arity
    Enumerate {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        engine: EngineArgs,
        #[arg(long, env = "POLYTRIV_ARITY", default_value_t = 2)]
        arity: usize,
    },
    /// Decide triviality with respect to a family Φ
    Trivial {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        phi: PhiArgs,
        #[command(flatten)]
        engine: EngineArgs,
        /// Check this arity only (default: arity 2, which decides every arity)
        #[arg(long, env = "POLYTRIV_ARITY")]
        arity: Option<usize>,
    },
    /// Report how arity-1 triviality lifts to arity 2
    Reduce {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        phi: PhiArgs,
        #[command(flatten)]
        engine: EngineArgs,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Sweep all symmetric predicates up to a given width
    Atlas {
        #[arg(long, env = "POLYTRIV_M_MAX", default_value_t = 4)]
        m_max: usize,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Decide whether the predicate is an impossibility domain for unanimity
    Impossibility {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        engine: EngineArgs,
        #[command(flatten)]
        limits: LimitArgs,
        /// Arity of the unanimous enumeration
        #[arg(long, env = "POLYTRIV_ARITY", default_value_t = 2)]
        arity: usize,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct InputArgs {
    /// JSON predicate file (explicit tuples or {"symmetric": {...}})
    #[arg(long, env = "POLYTRIV_PREDICATE")]
    predicate: Option<PathBuf>,
    /// Symmetric binary predicate as M:W1,W2,... (allowed Hamming weights)
    #[arg(long, env = "POLYTRIV_SYMMETRIC")]
    symmetric: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PhiChoice {
    /// Identity on every coordinate
    Id,
    /// Negation on every coordinate (binary only)
    Neg,
    /// Identity everywhere or negation everywhere
    IdnegUniform,
    /// Constants, identity or negation, chosen uniformly
    ConstIdNeg,
    /// Every tuple of permutations
    AllPerm,
    /// Members read from --phi-file
    Custom,
}

#[derive(Args, Debug)]
struct PhiArgs {
    #[arg(long, value_enum, env = "POLYTRIV_PHI", default_value = "id")]
    phi: PhiChoice,
    /// JSON Φ file: {"members": [[unary table, ...], ...]}
    #[arg(long, env = "POLYTRIV_PHI_FILE")]
    phi_file: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EngineArgs {
    /// Table-entry assignments allowed before giving up
    #[arg(long, env = "POLYTRIV_BUDGET", default_value_t = polytriv::enumerate::DEFAULT_BUDGET,
          value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    /// Worker threads for the enumeration
    #[arg(long, env = "POLYTRIV_WORKERS", default_value_t = 1,
          value_parser = clap::value_parser!(u64).range(1..=256))]
    workers: u64,
}

#[derive(Args, Debug)]
struct LimitArgs {
    /// Largest alphabet for which Latin squares are enumerated
    #[arg(long, env = "POLYTRIV_LATIN_K_MAX")]
    latin_k_max: Option<usize>,
    /// Largest number of binary coordinates for the AND/OR search
    #[arg(long, env = "POLYTRIV_AND_OR_MAX_BINARY")]
    and_or_max_binary: Option<usize>,
    /// Largest arity of an iterated Latin-square witness
    #[arg(long, env = "POLYTRIV_WITNESS_ARITY_CAP")]
    witness_arity_cap: Option<usize>,
    /// Iterate to the lcm of permutation orders instead of the product of factorials
    #[arg(long, env = "POLYTRIV_TIGHT_EXPONENT")]
    tight_exponent: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command, cli.json) {
        Ok(report) => {
            print!("{}", report.text);
            ExitCode::from(report.status as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
