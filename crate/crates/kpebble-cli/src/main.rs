//! `kpebble`: command-line front end for the solvers, the reduction and the
//! verification harnesses.
//!
//! Exit codes: 0 success, 2 input error, 3 budget exceeded, 4 property violation.

mod commands;
mod manifest;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kpebble::gadgets::{Orientation, Side};
use kpebble::Exec;

#[derive(Parser, Debug)]
#[command(name = "kpebble", version, about = "Existential pebble games and the KAI reduction")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Seed of every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Bound on stored configurations (and KAI positions) per solve.
    #[arg(long = "budget-configs", global = true, default_value_t = 100_000_000)]
    pub budget: u64,
    /// Write the result here (plus `<out>.manifest.json`) instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Re-run the command recorded in a manifest and compare its outputs byte for byte.
    #[arg(long, global = true)]
    pub replay: Option<PathBuf>,
    /// Run everything on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,
}

impl Common {
    pub fn exec(&self) -> Exec {
        if self.sequential {
            Exec::Sequential
        } else {
            Exec::default()
        }
    }
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Generate a random KAI instance.
    GenKai {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        nodes: u32,
        /// Number of rule triples.
        #[arg(long = "rule-triples", alias = "rules", default_value_t = 2)]
        rule_triples: usize,
    },
    /// Solve a KAI instance by backward induction.
    SolveKai { instance: PathBuf },
    /// Build the reduction of a KAI instance.
    Reduce {
        instance: PathBuf,
        /// Also emit the uncoloured pair.
        #[arg(long, num_args = 0..=1, require_equals = true, default_missing_value = "text")]
        decolor: Option<Orientation>,
    },
    /// Decide the existential pebble game on a pair file.
    SolvePebble {
        input: PathBuf,
        /// Number of pebbles.
        #[arg(long)]
        k: usize,
        #[arg(long, num_args = 0..=1, require_equals = true, default_missing_value = "text")]
        decolor: Option<Orientation>,
    },
    /// Establish strong k-consistency on a pair file.
    Consistency {
        input: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Check the gadget lemmas.
    VerifyLemmas {
        /// KAI pebbles (the games use one more).
        #[arg(long)]
        k: u32,
        #[arg(long)]
        nodes: u32,
        /// Choice gadget sizes.
        #[arg(long, value_delimiter = ',', default_values_t = [1u32, 2])]
        m: Vec<u32>,
        /// Check at most this many random parameter tuples per clause.
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, value_enum, default_value_t = LemmaFilter::All)]
        lemma: LemmaFilter,
    },
    /// Compare the KAI winner with the pebble-game winner of the reduction.
    Crossvalidate {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        nodes: u32,
        /// Largest number of rule triples (exact number with --random).
        #[arg(long = "rule-triples", alias = "rules", default_value_t = 1)]
        rule_triples: usize,
        /// Random instances instead of the exhaustive sweep.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, num_args = 0..=1, require_equals = true, default_missing_value = "text")]
        decolor: Option<Orientation>,
    },
    /// Render a pair file or a standalone gadget as DOT.
    ExportDot {
        input: Option<PathBuf>,
        #[arg(long, default_value = "duplicator")]
        side: Side,
        #[arg(long, value_enum)]
        gadget: Option<GadgetName>,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        nodes: Option<u32>,
        #[arg(long, default_value_t = 1)]
        m: u32,
        /// Start position of INIT, comma separated.
        #[arg(long, value_delimiter = ',')]
        start: Option<Vec<u32>>,
        /// Rule `u,v,w,c,d` of a rule gadget.
        #[arg(long, value_delimiter = ',')]
        rule: Option<Vec<u32>>,
        #[arg(long, num_args = 0..=1, require_equals = true, default_missing_value = "text")]
        decolor: Option<Orientation>,
    },
    /// Time the colored reduction solve against n for fixed k.
    Bench {
        #[arg(long, default_value_t = 2)]
        k: u32,
        /// Largest node count; the curve starts at k + 1.
        #[arg(long, default_value_t = 5)]
        nodes: u32,
        #[arg(long = "rule-triples", alias = "rules", default_value_t = 1)]
        rule_triples: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum LemmaFilter {
    All,
    Rule,
    Switch,
    Init,
    Choice,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum GadgetName {
    Switch,
    Rs,
    Rd,
    Init,
    Choice,
}

/// A checked property failed; the output is still written.
#[derive(Debug)]
pub struct Violation(pub String);

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "property violation: {}", self.0)
    }
}

impl std::error::Error for Violation {}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.downcast_ref::<Violation>().is_some() {
            return 4;
        }
        if let Some(e) = cause.downcast_ref::<kpebble::Error>() {
            return match e {
                kpebble::Error::Budget { .. } => 3,
                _ => 2,
            };
        }
        if cause.downcast_ref::<serde_json::Error>().is_some() || cause.downcast_ref::<std::io::Error>().is_some() {
            return 2;
        }
    }
    1
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let args: Vec<String> = std::env::args().skip(1).collect();
    let result = match &cli.common.replay {
        Some(path) => manifest::replay(path, &cli.common),
        None => manifest::run_and_record(&cli, &args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
