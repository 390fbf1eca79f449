//! Command-line front end for the liesym engine.
//!
//! Exit status is 0 on success, 1 on a usage error and 2 when a verification
//! fails. The thread count of the parallel engines is read from `LIESYM_THREADS`.

mod report;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use liesym::LieError;

use report::Outcome;

/// Environment variable holding the number of worker threads.
pub const THREADS_VAR: &str = "LIESYM_THREADS";

#[derive(Parser, Debug)]
#[command(name = "liesym", version, about = "Exact root systems, torsion automorphisms and involutions of 4-symmetric spaces")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

/// Output format of every subcommand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Root count, highest root, marks and fundamental coweights of a simple type.
    Rootsys {
        /// Simple type such as `E8`, `F4` or `A3`.
        ty: String,
    },
    /// Fixed subalgebra of the inner automorphism `tau_H`.
    Fix {
        ty: String,
        /// Coweight such as `1/2*K3 + K6`; `0` for the identity.
        h: String,
    },
    /// Invariants and class of an involution for a pair `(g, sigma = tau_(1/2)K_node)`.
    Invol {
        ty: String,
        /// Node of `sigma`, of mark 3 or 4.
        node: usize,
        /// Composite base map such as `tau1` or `tau3*phi`; `-` for an inner involution.
        #[arg(long, default_value = "-")]
        base: String,
        /// Twist coweight `H` of `base o tau_H`.
        #[arg(long, default_value = "0")]
        twist: String,
    },
    /// Gradation with the given nodes in degree one and the rest in degree zero.
    Grade {
        ty: String,
        /// Nodes of degree one.
        #[arg(required = true)]
        nodes: Vec<usize>,
        /// Number of sampled basis pairs; every pair is checked when omitted and the rank is at most 4.
        #[arg(long)]
        samples: Option<usize>,
        /// Seed of the sampler.
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Regenerates tables and compares them with the shipped golden files.
    Tables {
        /// Table numbers; every table when omitted.
        ids: Vec<u8>,
        /// Print only the disagreements with the golden files.
        #[arg(long)]
        diff: bool,
    },
    /// Replays the shipped conjugation witnesses and separations.
    Witness,
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var(THREADS_VAR) else { return Ok(()) };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("{THREADS_VAR} must be a positive integer, found `{raw}`"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn is_usage(e: &LieError) -> bool {
    matches!(
        e,
        LieError::InvalidType(_)
            | LieError::RankMismatch { .. }
            | LieError::Parse(_)
            | LieError::OutOfScope(_)
            | LieError::Unknown(_)
            | LieError::NotARoot(_)
    )
}

fn run(cli: Cli) -> liesym::Result<Outcome> {
    let f = cli.format;
    match cli.command {
        Command::Rootsys { ty } => report::rootsys(&ty, f),
        Command::Fix { ty, h } => report::fix(&ty, &h, f),
        Command::Invol { ty, node, base, twist } => report::invol(&ty, node, &base, &twist, f),
        Command::Grade { ty, nodes, samples, seed } => report::grade(&ty, &nodes, samples, seed, f),
        Command::Tables { ids, diff } => report::tables(&ids, diff, f),
        Command::Witness => report::witness(f),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(1);
    }
    match run(cli) {
        Ok(out) => {
            print!("{}", out.text);
            if out.verified {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if is_usage(&e) { 1 } else { 2 })
        }
    }
}
