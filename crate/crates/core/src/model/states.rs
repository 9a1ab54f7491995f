use std::fmt;
use std::sync::Arc;

use crate::clockspace::{ClockSet, Federation, Rational};

use super::Automaton;

/// Per-location federation: a symbolic set of configurations.
#[derive(Clone)]
pub struct SymbolicStateSet {
    clocks: Arc<ClockSet>,
    sets: Vec<Federation>,
}

impl SymbolicStateSet {
    pub fn empty(clocks: &Arc<ClockSet>, locations: usize) -> SymbolicStateSet {
        SymbolicStateSet { clocks: clocks.clone(), sets: vec![Federation::empty(clocks); locations] }
    }

    pub fn universe(clocks: &Arc<ClockSet>, locations: usize) -> SymbolicStateSet {
        SymbolicStateSet { clocks: clocks.clone(), sets: vec![Federation::universe(clocks); locations] }
    }

    pub fn empty_for(a: &Automaton) -> SymbolicStateSet {
        SymbolicStateSet::empty(&a.clocks, a.locations.len())
    }

    pub fn from_sets(clocks: &Arc<ClockSet>, sets: Vec<Federation>) -> SymbolicStateSet {
        SymbolicStateSet { clocks: clocks.clone(), sets }
    }

    pub fn clocks(&self) -> &Arc<ClockSet> {
        &self.clocks
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn get(&self, loc: usize) -> &Federation {
        &self.sets[loc]
    }

    pub fn set(&mut self, loc: usize, f: Federation) {
        self.sets[loc] = f;
    }

    pub fn add(&mut self, loc: usize, f: &Federation) {
        self.sets[loc] = self.sets[loc].union(f);
    }

    pub fn sets(&self) -> &[Federation] {
        &self.sets
    }

    pub fn is_empty(&self) -> bool {
        self.sets.iter().all(Federation::is_empty)
    }

    pub fn contains(&self, loc: usize, v: &[Rational]) -> bool {
        self.sets[loc].contains(v)
    }

    fn zip(&self, other: &SymbolicStateSet, op: impl Fn(&Federation, &Federation) -> Federation) -> SymbolicStateSet {
        assert_eq!(self.sets.len(), other.sets.len(), "state sets over different location counts");
        SymbolicStateSet {
            clocks: self.clocks.clone(),
            sets: self.sets.iter().zip(&other.sets).map(|(a, b)| op(a, b)).collect(),
        }
    }

    pub fn map(&self, op: impl Fn(&Federation) -> Federation) -> SymbolicStateSet {
        SymbolicStateSet { clocks: self.clocks.clone(), sets: self.sets.iter().map(op).collect() }
    }

    #[must_use]
    pub fn union(&self, other: &SymbolicStateSet) -> SymbolicStateSet {
        self.zip(other, |a, b| a.union(b).merged())
    }

    #[must_use]
    pub fn intersect(&self, other: &SymbolicStateSet) -> SymbolicStateSet {
        self.zip(other, Federation::intersect)
    }

    #[must_use]
    pub fn subtract(&self, other: &SymbolicStateSet) -> SymbolicStateSet {
        self.zip(other, Federation::subtract)
    }

    #[must_use]
    pub fn complement(&self) -> SymbolicStateSet {
        self.map(Federation::complement)
    }

    #[must_use]
    pub fn down(&self) -> SymbolicStateSet {
        self.map(Federation::down)
    }

    pub fn is_subset(&self, other: &SymbolicStateSet) -> bool {
        self.sets.iter().zip(&other.sets).all(|(a, b)| a.is_subset(b))
    }

    pub fn equals(&self, other: &SymbolicStateSet) -> bool {
        self.sets.len() == other.sets.len() && self.sets.iter().zip(&other.sets).all(|(a, b)| a.equals(b))
    }

    pub fn display<'a>(&'a self, a: &'a Automaton) -> impl fmt::Display + 'a {
        StatesDisplay { states: self, automaton: a }
    }
}

impl fmt::Debug for SymbolicStateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.sets).finish()
    }
}

struct StatesDisplay<'a> {
    states: &'a SymbolicStateSet,
    automaton: &'a Automaton,
}

impl fmt::Display for StatesDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (l, s) in self.states.sets.iter().enumerate() {
            if s.is_empty() {
                continue;
            }
            if !first {
                writeln!(f)?;
            }
            first = false;
            write!(f, "{}: {}", self.automaton.locations[l].name, s)?;
        }
        if first {
            write!(f, "(empty)")?;
        }
        Ok(())
    }
}
