//! Existential pebble games, the KAI pebble game, strong k-consistency and
//! the gadget reduction from KAI games to pebble games.

pub mod board;
pub mod consistency;
pub mod error;
pub mod exec;
pub mod family;
pub mod gadgets;
pub mod gen;
pub mod harness;
pub mod kai;
pub mod lemmas;
pub mod solver;
pub mod strategy;
pub mod structures;

pub use board::Board;
pub use error::{Error, Result};
pub use exec::Exec;
pub use family::StrategyFamily;
pub use solver::{solve_game, spoiler_reach, verify_strategy, SolveOptions, SolveResult, VerifyReport, Violation, Winner};
pub use structures::{enumerate_partial_homs, is_partial_hom, validate_structure, Elem, PartialHom, Structure};
