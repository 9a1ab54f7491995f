//! Exact symbolic algebra over clock valuations.

mod bound;
mod clocks;
mod constraint;
mod federation;
mod region;
mod valuation;
mod zone;

pub use bound::Bound;
pub use clocks::ClockSet;
pub use constraint::{Atom, Rel};
pub use federation::Federation;
pub use region::Region;
pub use valuation::{
    common_denominator, coord, delayed, format_rational, parse_rational, simplest_between, simplest_in,
    with_resets, zero_valuation, Rational, Valuation,
};
pub use zone::Zone;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClockError {
    #[error("duplicate clock `{0}`")]
    DuplicateClock(String),
    #[error("empty clock name")]
    EmptyName,
    #[error("clock sets differ: {left:?} vs {right:?}")]
    Mismatch { left: Vec<String>, right: Vec<String> },
}
