//! Two-way finite automata with counted left moves.
//!
//! The crate simulates two-way machines without endmarkers, converts them to
//! one-way machines, computes the left-move complexity λ(M) of a 2DFA, and
//! searches for the smallest 2DFAs of a regular language under a left-move
//! budget (the language's two-way spectrum).

pub mod checks;
pub mod convert;
pub mod error;
pub mod families;
pub mod format;
pub mod leftmove;
pub mod machine;
pub mod random;
pub mod regular;
pub mod sim;
pub mod spectrum;

pub use convert::{convert_bounded_k, crossing_sequence_nfa, shepherdson, BufferState};
pub use error::{Error, Result};
pub use families::{build, expected_sigma0, membership, Family};
pub use format::{parse_machine, serialize_machine};
pub use leftmove::{
    bounded_language, build_cs_graph, lambda_equals, lambda_of_machine, CrossingSequence,
    CrossingSequenceGraph, Lambda,
};
pub use machine::{Alphabet, Dir, Machine, MachineClass, Move, Symbol, Word};
pub use regular::{accepts_up_to, determinize, equivalent, minimize, product, ProductMode};
pub use sim::{lambda_of_word, run, run_nondet, Configuration, RunOutcome, Verdict};
pub use spectrum::{compute_spectrum, pareto_frontier, EnumerationBudget, SpectrumResult};
