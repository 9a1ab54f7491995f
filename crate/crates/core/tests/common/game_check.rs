//! Symbolic game operators against the region oracle on one random arena.

use tiotest_core::game::{build_hierarchy, pred_discrete, pred_final, pred_timed, Actions};

use super::instances::{random_game, random_states};
use super::region_oracle::Oracle;

/// Number of sets compared, or the first mismatch.
pub fn check_instance(seed: u64) -> Result<usize, String> {
    let mut inst = random_game(seed);
    let g = &inst.game;
    let o = Oracle::new(g.automaton.clocks.len(), g.max_constant().max(inst.m), g.locations());
    let vfail = o.of_states(&g.vfail).ok_or("verdict set is not a union of regions")?;
    let mut compared = 0;
    let mut same = |what: &str, got: Option<Vec<Vec<bool>>>, want: &Vec<Vec<bool>>| {
        compared += 1;
        if got.as_ref() == Some(want) {
            Ok(())
        } else {
            Err(format!("seed {seed}: {what} differs from the region oracle"))
        }
    };
    for _ in 0..3 {
        let s = random_states(&mut inst.rng, &g.automaton, inst.m);
        let v = random_states(&mut inst.rng, &g.automaton, inst.m);
        let os = o.of_states(&s).ok_or("random set is not a union of regions")?;
        let ov = o.of_states(&v).ok_or("random set is not a union of regions")?;
        let c = |x: usize| g.is_controllable(x);
        same("controllable pred", o.of_states(&pred_discrete(g, &s, Actions::Controllable)), &o.pred_discrete(g, &os, c))?;
        same(
            "uncontrollable pred",
            o.of_states(&pred_discrete(g, &s, Actions::Uncontrollable)),
            &o.pred_discrete(g, &os, |x| !c(x)),
        )?;
        same("discrete pred", o.of_states(&pred_discrete(g, &s, Actions::All)), &o.pred_discrete(g, &os, |_| true))?;
        same("timed pred", o.of_states(&pred_timed(&s, &v)), &o.pred_timed(&os, &ov))?;
        same("final timed pred", o.of_states(&pred_final(g, &s)), &o.pred_final(g, &vfail, &os))?;
    }
    let h = build_hierarchy(g);
    let oh = o.hierarchy(g);
    if h.levels.len() != oh.len() {
        return Err(format!("seed {seed}: {} levels, oracle has {}", h.levels.len(), oh.len()));
    }
    for (j, (lv, olv)) in h.levels.iter().zip(&oh).enumerate() {
        if lv.len() != olv.len() {
            return Err(format!("seed {seed}: level {j} has {} sets, oracle has {}", lv.len(), olv.len()));
        }
        for (i, (w, ow)) in lv.iter().zip(olv).enumerate() {
            same(&format!("W{j}_{i}"), o.of_states(w), ow)?;
        }
    }
    Ok(compared)
}
