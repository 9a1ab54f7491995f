use crate::clockspace::Federation;
use crate::model::SymbolicStateSet;
use crate::semantics::reset_choices;

use super::GameView;

/// Which actions a discrete predecessor ranges over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Actions {
    Controllable,
    Uncontrollable,
    All,
}

impl Actions {
    fn admits(self, g: &GameView, action: usize) -> bool {
        match self {
            Actions::Controllable => g.is_controllable(action),
            Actions::Uncontrollable => !g.is_controllable(action),
            Actions::All => true,
        }
    }
}

/// States with an edge over `actions` whose successor lies in `s`.
pub fn pred_discrete(g: &GameView, s: &SymbolicStateSet, actions: Actions) -> SymbolicStateSet {
    pred_discrete_by(g, s, |a| actions.admits(g, a))
}

pub(crate) fn pred_discrete_by(g: &GameView, s: &SymbolicStateSet, admit: impl Fn(usize) -> bool) -> SymbolicStateSet {
    let a = &g.automaton;
    let mut out = g.empty();
    for (k, e) in a.edges.iter().enumerate() {
        if !admit(e.action) || s.get(e.dst).is_empty() {
            continue;
        }
        for resets in reset_choices(a, k) {
            let others: Vec<usize> = (1..=a.clocks.len()).filter(|c| !resets.contains(c)).collect();
            let zeroed = Federation::zero(&a.clocks).free(&others);
            let pre = s.get(e.dst).intersect(&zeroed).free(&resets).intersect(&e.guard);
            out.add(e.src, &pre);
        }
    }
    out.map(|f| f.clone().merged())
}

/// States that can let time pass into `s` without touching `avoid`,
/// the starting point and the endpoint included.
pub fn pred_timed(s: &SymbolicStateSet, avoid: &SymbolicStateSet) -> SymbolicStateSet {
    let sets = (0..s.len()).map(|l| s.get(l).timed_pred(avoid.get(l))).collect();
    SymbolicStateSet::from_sets(s.clocks(), sets)
}

pub fn tpred(s: &SymbolicStateSet) -> SymbolicStateSet {
    s.down()
}

/// States outside both `s` and the failing states.
pub fn not_winning(g: &GameView, s: &SymbolicStateSet) -> SymbolicStateSet {
    s.union(&g.vfail).complement()
}

/// States from which the implementation is cornered: either it may only
/// leave `s` by failing first, or it cannot leave `s` at all.
pub fn pred_final(g: &GameView, s: &SymbolicStateSet) -> SymbolicStateSet {
    let out = not_winning(g, s);
    let forced = pred_timed(&g.vfail, &pred_discrete(g, &out, Actions::Uncontrollable));
    let stuck = tpred(&pred_discrete(g, &out, Actions::All)).complement();
    forced.union(&stuck)
}

/// One controllable step of the attractor, restricted to non-failing
/// states and extensive in `s`.
pub fn pi(g: &GameView, s: &SymbolicStateSet) -> SymbolicStateSet {
    let out = not_winning(g, s);
    let goal = s.union(&pred_discrete(g, s, Actions::Controllable));
    let safe = pred_timed(&goal, &pred_discrete(g, &out, Actions::Uncontrollable));
    safe.union(&pred_final(g, s)).union(s).subtract(&g.vfail).map(|f| f.clone().merged())
}
