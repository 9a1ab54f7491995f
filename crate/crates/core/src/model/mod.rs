//! Automata with inputs, outputs, internal actions and a restart, the
//! file format, products, determinism and tester construction.

mod automaton;
pub mod determinism;
pub mod export;
pub mod parse;
pub mod product;
mod states;
pub mod tester;
pub mod validate;

pub use automaton::{ActionDecl, ActionKind, Automaton, Edge, Location, Role};
pub use determinism::{check_deterministic, DeterminismReport, NondetIssue};
pub use parse::{parse_automaton, parse_federation, parse_guard};
pub use product::product;
pub use states::SymbolicStateSet;
pub use tester::{build_tester, Tester};
pub use validate::{auto_complete_tp, validate_spec, validate_tp, Property, ValidationIssue, ValidationReport};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("automaton {0} has no locations")]
    NoLocations(String),
    #[error("unknown location: {0}")]
    UnknownLocation(String),
    #[error("duplicate {0}")]
    Duplicate(String),
    #[error("edge #{edge} resets observed clock {clock}")]
    ResetObserved { edge: usize, clock: String },
    #[error("not a tester: {0}")]
    TesterShape(String),
    #[error("alphabets differ (only left: {only_left:?}, only right: {only_right:?})")]
    AlphabetMismatch { only_left: Vec<String>, only_right: Vec<String> },
    #[error("observed clock {0} is not a proper clock of the specification")]
    ObservedNotProper(String),
    #[error("{0}")]
    Semantics(String),
    #[error("not deterministic: {0}")]
    Nondeterministic(String),
}
