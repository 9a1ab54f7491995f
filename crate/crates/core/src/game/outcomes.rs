use crate::clockspace::Region;
use crate::semantics::reset_choices;

use super::{GameView, Move, Strategy};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutcomeMove {
    Delay,
    Strategy(usize),
    Environment(usize),
}

/// Region-level run; `states[k + 1]` follows `states[k]` by `moves[k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutcomeRun {
    pub states: Vec<(usize, Region)>,
    pub moves: Vec<OutcomeMove>,
}

impl OutcomeRun {
    pub fn last(&self) -> &(usize, Region) {
        self.states.last().expect("runs are non-empty")
    }

    pub fn has_environment_move(&self) -> bool {
        self.moves.iter().any(|m| matches!(m, OutcomeMove::Environment(_)))
    }
}

/// Every region-level outcome of `f` from the initial state with at most
/// `horizon` moves. Runs stop early in a verdict state or when nothing
/// more can happen.
pub fn outcomes_bounded(g: &GameView, f: &Strategy, horizon: usize) -> Vec<OutcomeRun> {
    let a = &g.automaton;
    let start = (a.initial, Region::zero(a.clocks.len(), f.max));
    let mut done = Vec::new();
    let mut stack = vec![OutcomeRun { states: vec![start], moves: Vec::new() }];
    while let Some(run) = stack.pop() {
        let (l, r) = run.last().clone();
        let verdict = GameView::region_in(&g.vpass, l, &r) || GameView::region_in(&g.vfail, l, &r);
        if run.moves.len() >= horizon || verdict {
            done.push(run);
            continue;
        }
        let Some(m) = f.get(l, &r) else {
            done.push(run);
            continue;
        };
        let mut next = Vec::new();
        let chain = r.delay_chain();
        let reach = chain.iter().position(|c| c == m.target()).expect("target is a delay successor");
        for c in &chain[..=reach] {
            for (k, e) in a.edges_from(l) {
                if g.is_controllable(e.action) || !e.guard.contains(&c.to_zone().sample()) {
                    continue;
                }
                for x in reset_choices(a, k) {
                    next.push(extend(&run, c, OutcomeMove::Environment(k), (e.dst, c.reset(&x))));
                }
            }
        }
        match m {
            Move::Play { target, edge } => {
                let e = &a.edges[*edge];
                for x in reset_choices(a, *edge) {
                    next.push(extend(&run, target, OutcomeMove::Strategy(*edge), (e.dst, target.reset(&x))));
                }
            }
            Move::Wait { target } | Move::WaitMaximal { target } => {
                if *target != r {
                    let mut n = run.clone();
                    n.states.push((l, target.clone()));
                    n.moves.push(OutcomeMove::Delay);
                    next.push(n);
                }
            }
        }
        if next.is_empty() {
            done.push(run);
        }
        stack.extend(next);
    }
    done
}

fn extend(run: &OutcomeRun, at: &Region, mv: OutcomeMove, to: (usize, Region)) -> OutcomeRun {
    let mut n = run.clone();
    let here = n.last().clone();
    if here.1 != *at {
        n.states.push((here.0, at.clone()));
        n.moves.push(OutcomeMove::Delay);
    }
    n.states.push(to);
    n.moves.push(mv);
    n
}
