//! Random small game arenas.

use std::sync::Arc;

use rand::seq::IndexedRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use tiotest_core::clockspace::{Atom, ClockSet, Federation, Rel};
use tiotest_core::game::GameView;
use tiotest_core::model::{ActionKind, Automaton, Role, SymbolicStateSet};

pub struct Instance {
    pub game: GameView,
    pub m: i64,
    pub rng: ChaCha8Rng,
}

pub fn random_zone(rng: &mut ChaCha8Rng, clocks: &Arc<ClockSet>, m: i64, atoms: usize) -> Federation {
    let rels = [Rel::Lt, Rel::Le, Rel::Eq, Rel::Ge, Rel::Gt];
    let list: Vec<Atom> = (0..atoms)
        .map(|_| Atom::clock(rng.random_range(1..=clocks.len()), *rels.choose(rng).unwrap(), rng.random_range(0..=m)))
        .collect();
    Federation::from_atoms(clocks, &list)
}

pub fn random_federation(rng: &mut ChaCha8Rng, clocks: &Arc<ClockSet>, m: i64) -> Federation {
    let mut f = Federation::empty(clocks);
    for _ in 0..rng.random_range(0..=2) {
        let atoms = rng.random_range(0..=2);
        f = f.union(&random_zone(rng, clocks, m, atoms));
    }
    f
}

pub fn random_states(rng: &mut ChaCha8Rng, a: &Automaton, m: i64) -> SymbolicStateSet {
    let sets = (0..a.locations.len()).map(|_| random_federation(rng, &a.clocks, m)).collect();
    SymbolicStateSet::from_sets(&a.clocks, sets)
}

/// An arena with at most 3 clocks, 6 locations and constants up to 6.
pub fn random_game(seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=3);
    let m = rng.random_range(1..=6);
    let locs = rng.random_range(2..=6);
    let names: Vec<String> = (0..n).map(|k| format!("c{k}")).collect();
    let clocks = ClockSet::new(names).unwrap();
    let mut a = Automaton::new(format!("g{seed}"), Role::Tester, clocks.clone());
    let mut actions = Vec::new();
    for k in 0..rng.random_range(1..=2) {
        actions.push(a.add_action(format!("i{k}"), ActionKind::Input));
    }
    for k in 0..rng.random_range(1..=2) {
        actions.push(a.add_action(format!("o{k}"), ActionKind::Output));
    }
    let restart = a.add_action("zeta", ActionKind::Restart);
    let universe = Federation::universe(&clocks);
    for l in 0..locs {
        a.add_location(format!("L{l}"), universe.clone());
    }
    for _ in 0..rng.random_range(locs..=3 * locs) {
        let src = rng.random_range(0..locs);
        let dst = rng.random_range(0..locs);
        let action = *actions.choose(&mut rng).unwrap();
        let guard = if rng.random_bool(0.25) {
            universe.clone()
        } else {
            let atoms = rng.random_range(1..=2);
            random_zone(&mut rng, &clocks, m, atoms)
        };
        let resets: Vec<usize> = (1..=n).filter(|_| rng.random_bool(0.4)).collect();
        a.add_edge(src, guard, action, resets, dst);
    }
    for l in 1..locs {
        if rng.random_bool(0.5) {
            a.add_edge(l, universe.clone(), restart, (1..=n).collect(), 0);
        }
    }
    let mut vpass = SymbolicStateSet::empty_for(&a);
    let target = rng.random_range(1..locs);
    vpass.set(target, if rng.random_bool(0.5) { universe.clone() } else { random_zone(&mut rng, &clocks, m, 1) });
    let mut vfail = SymbolicStateSet::empty_for(&a);
    for _ in 0..rng.random_range(0..=2) {
        let l = rng.random_range(0..locs);
        let f = random_federation(&mut rng, &clocks, m);
        vfail.add(l, &f);
    }
    let vfail = vfail.subtract(&vpass);
    Instance { game: GameView::from_parts(a, vpass, vfail), m, rng }
}
