use std::fmt;

use crate::clockspace::Rational;
use crate::model::SymbolicStateSet;

use super::pred::{pi, pred_discrete, tpred, Actions};
use super::GameView;

/// Lexicographic rank `(j, i)`: `j` counts the control losses, `i` the
/// attractor steps within one level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rank {
    At(usize, usize),
    NotCovered,
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rank::At(j, i) => write!(f, "({j},{i})"),
            Rank::NotCovered => write!(f, "not covered"),
        }
    }
}

/// The hierarchy `levels[j][i]`; the last set of every level is its limit.
#[derive(Clone, Debug)]
pub struct RankMap {
    pub levels: Vec<Vec<SymbolicStateSet>>,
    pub init_rank: Rank,
    pub iterations: usize,
    vfail: SymbolicStateSet,
}

impl RankMap {
    pub fn satisfiable(&self) -> bool {
        self.init_rank != Rank::NotCovered
    }

    pub fn get(&self, j: usize, i: usize) -> Option<&SymbolicStateSet> {
        self.levels.get(j).and_then(|l| l.get(i))
    }

    pub fn limit(&self, j: usize) -> &SymbolicStateSet {
        self.levels[j].last().expect("levels are non-empty")
    }

    /// The global fixpoint.
    pub fn winning(&self) -> &SymbolicStateSet {
        self.limit(self.levels.len() - 1)
    }

    pub fn rank_of(&self, loc: usize, v: &[Rational]) -> Rank {
        if self.vfail.contains(loc, v) {
            return Rank::NotCovered;
        }
        for (j, level) in self.levels.iter().enumerate() {
            if !level.last().expect("levels are non-empty").contains(loc, v) {
                continue;
            }
            let i = level.iter().position(|s| s.contains(loc, v)).expect("limit contains it");
            return Rank::At(j, i);
        }
        Rank::NotCovered
    }

    /// Union of every rank strictly below `r`.
    pub fn below(&self, r: Rank) -> Option<&SymbolicStateSet> {
        match r {
            Rank::At(0, 0) | Rank::NotCovered => None,
            Rank::At(j, 0) => Some(self.limit(j - 1)),
            Rank::At(j, i) => Some(&self.levels[j][i - 1]),
        }
    }
}

pub fn rank(m: &RankMap, loc: usize, v: &[Rational]) -> Rank {
    m.rank_of(loc, v)
}

pub fn build_hierarchy(g: &GameView) -> RankMap {
    let mut levels: Vec<Vec<SymbolicStateSet>> = Vec::new();
    let mut w = g.vpass.subtract(&g.vfail);
    let mut iterations = 0;
    loop {
        let mut chain = vec![w.clone()];
        loop {
            iterations += 1;
            let last = chain.last().expect("non-empty");
            let next = pi(g, last);
            if next.is_subset(last) {
                break;
            }
            chain.push(next);
        }
        let limit = chain.last().expect("non-empty").clone();
        levels.push(chain);
        let jump = tpred(&limit.union(&pred_discrete(g, &limit, Actions::All)))
            .union(&limit)
            .subtract(&g.vfail)
            .map(|f| f.clone().merged());
        if jump.is_subset(&limit) {
            break;
        }
        w = jump;
    }
    let mut m = RankMap { levels, init_rank: Rank::NotCovered, iterations, vfail: g.vfail.clone() };
    let zero = vec![Rational::from_integer(0); g.automaton.clocks.len()];
    m.init_rank = m.rank_of(g.automaton.initial, &zero);
    m
}
