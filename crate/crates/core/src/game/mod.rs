//! Timed reachability game on a tester: predecessor operators, the ranked
//! hierarchy of winning sets and rank-lowering strategies.

mod hierarchy;
mod outcomes;
mod pred;
mod strategy;

use std::fmt;

use crate::clockspace::{Federation, Region};
use crate::model::{ActionKind, Automaton, SymbolicStateSet, Tester};

pub use hierarchy::{build_hierarchy, rank, Rank, RankMap};
pub use outcomes::{outcomes_bounded, OutcomeMove, OutcomeRun};
pub use pred::{not_winning, pi, pred_discrete, pred_final, pred_timed, tpred, Actions};
pub use strategy::{synthesize, Move, Strategy, StrategyError};

/// Game arena: a tester automaton with its verdict sets. Location
/// invariants of the automaton are ignored; a tester carries them in
/// `vfail` instead.
#[derive(Clone, Debug)]
pub struct GameView {
    pub automaton: Automaton,
    pub vpass: SymbolicStateSet,
    pub vfail: SymbolicStateSet,
}

impl GameView {
    pub fn new(t: &Tester) -> GameView {
        GameView { automaton: t.automaton.clone(), vpass: t.vpass.clone(), vfail: t.vfail.clone() }
    }

    pub fn from_parts(automaton: Automaton, vpass: SymbolicStateSet, vfail: SymbolicStateSet) -> GameView {
        GameView { automaton, vpass, vfail }
    }

    pub fn is_controllable(&self, action: usize) -> bool {
        self.automaton.kind(action).is_controllable()
    }

    pub fn controllable(&self) -> Vec<usize> {
        (0..self.automaton.actions.len()).filter(|&a| self.is_controllable(a)).collect()
    }

    pub fn uncontrollable(&self) -> Vec<usize> {
        (0..self.automaton.actions.len()).filter(|&a| !self.is_controllable(a)).collect()
    }

    pub fn locations(&self) -> usize {
        self.automaton.locations.len()
    }

    pub fn empty(&self) -> SymbolicStateSet {
        SymbolicStateSet::empty_for(&self.automaton)
    }

    pub fn max_constant(&self) -> i64 {
        let sets = self.vpass.sets().iter().chain(self.vfail.sets());
        sets.map(Federation::max_constant).fold(self.automaton.max_constant(), i64::max)
    }

    pub(crate) fn region_in(set: &SymbolicStateSet, loc: usize, r: &Region) -> bool {
        set.contains(loc, &r.to_zone().sample())
    }

    pub(crate) fn action_label(&self, action: usize) -> String {
        let d = &self.automaton.actions[action];
        match d.kind {
            ActionKind::Restart => d.name.clone(),
            _ => d.label(),
        }
    }
}

impl fmt::Display for GameView {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "game on {}", self.automaton.name)
    }
}
