//! The bundled conveyor-belt models.

use crate::model::{parse_automaton, Automaton};

pub const CONVEYOR_SPEC: &str = include_str!("../fixtures/conveyor_spec.ta");
pub const SHIP2_TP: &str = include_str!("../fixtures/ship2_tp.ta");
pub const CONVEYOR_DP: &str = include_str!("../fixtures/conveyor_dp.ta");
pub const CONVEYOR_DSPEC: &str = include_str!("../fixtures/conveyor_dspec.ta");
pub const CONVEYOR_IMPL: &str = include_str!("../fixtures/conveyor_impl.ta");
pub const MUTANT_END2_EARLY: &str = include_str!("../fixtures/mutant_end2_early.ta");
pub const MUTANT_WASTE_LATE: &str = include_str!("../fixtures/mutant_waste_late.ta");
pub const MUTANT_PAST_LATE: &str = include_str!("../fixtures/mutant_past_late.ta");

fn load(text: &str) -> Automaton {
    parse_automaton(text).expect("bundled model parses")
}

pub fn conveyor_spec() -> Automaton {
    load(CONVEYOR_SPEC)
}

pub fn ship2_tp() -> Automaton {
    load(SHIP2_TP)
}

/// Hand-written deterministic counterpart of the spec/purpose product.
pub fn conveyor_dp() -> Automaton {
    load(CONVEYOR_DP)
}

/// Deterministic automaton with the traces of [`conveyor_spec`].
pub fn conveyor_dspec() -> Automaton {
    load(CONVEYOR_DSPEC)
}

pub fn conveyor_impl() -> Automaton {
    load(CONVEYOR_IMPL)
}

/// Non-conforming implementations, by name.
pub fn mutants() -> Vec<Automaton> {
    [MUTANT_END2_EARLY, MUTANT_WASTE_LATE, MUTANT_PAST_LATE].into_iter().map(load).collect()
}
