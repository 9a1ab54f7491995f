use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::clockspace::{common_denominator, Atom, ClockSet, Federation, Rational, Rel, Zone};
use crate::model::{ActionKind, Automaton, SymbolicStateSet};

use super::{internal_closure, reset_choices, Config, Trace};

/// Symbolic set of configurations expressed in time units of
/// `1/scale`: a valuation `v` belongs to location `l` when `scale·v` is in
/// `states.get(l)`.
#[derive(Clone, Debug)]
pub struct AfterSet {
    pub scale: i64,
    pub states: SymbolicStateSet,
}

impl AfterSet {
    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn contains(&self, loc: usize, v: &[Rational]) -> bool {
        let k = Rational::from_integer(self.scale);
        let scaled: Vec<Rational> = v.iter().map(|x| x * k).collect();
        self.states.contains(loc, &scaled)
    }

    /// Locations holding at least one configuration.
    pub fn locations(&self) -> Vec<usize> {
        (0..self.states.len()).filter(|&l| !self.states.get(l).is_empty()).collect()
    }

    /// The single configuration `c`.
    pub fn of_config(a: &Automaton, c: &Config) -> AfterSet {
        let scale = common_denominator(&c.valuation);
        let atoms: Vec<Atom> = c
            .valuation
            .iter()
            .enumerate()
            .map(|(k, v)| Atom::clock(k + 1, Rel::Eq, (v * Rational::from_integer(scale)).to_integer()))
            .collect();
        let mut states = SymbolicStateSet::empty_for(a);
        states.set(c.loc, Federation::from_atoms(&a.clocks, &atoms));
        AfterSet { scale, states }
    }
}

/// Set of delays in time units of `1/scale`, as a federation over the
/// single clock `t`.
#[derive(Clone, Debug)]
pub struct DelaySet {
    pub scale: i64,
    pub set: Federation,
}

impl DelaySet {
    pub fn contains(&self, d: Rational) -> bool {
        self.set.contains(&[d * Rational::from_integer(self.scale)])
    }
}

impl fmt::Display for DelaySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.scale == 1 {
            write!(f, "{}", self.set)
        } else {
            write!(f, "{} (t in units of 1/{})", self.set, self.scale)
        }
    }
}

const Z: &str = "__z";

/// The automaton with constants multiplied by `scale` and an extra clock
/// measuring the current delay.
struct Scaled<'a> {
    a: &'a Automaton,
    clocks: Arc<ClockSet>,
    z: usize,
    guards: Vec<Federation>,
    invs: Vec<Federation>,
    max: i64,
}

impl<'a> Scaled<'a> {
    fn new(a: &'a Automaton, scale: i64) -> Scaled<'a> {
        let clocks = a.clocks.union(&ClockSet::new([Z]).expect("one clock"));
        let z = clocks.index_of(Z).expect("added");
        Scaled {
            a,
            z,
            guards: a.edges.iter().map(|e| e.guard.scale(scale).lift(&clocks)).collect(),
            invs: a.locations.iter().map(|l| l.invariant.scale(scale).lift(&clocks)).collect(),
            max: a.max_constant() * scale,
            clocks,
        }
    }

    fn lift(&self, s: &SymbolicStateSet) -> Vec<Federation> {
        s.sets().iter().map(|f| f.lift(&self.clocks)).collect()
    }

    fn lower(&self, sets: &[Federation]) -> SymbolicStateSet {
        SymbolicStateSet::from_sets(&self.a.clocks, sets.iter().map(|f| f.project(&self.a.clocks).merged()).collect())
    }

    /// Delays and internal moves from `sets` with the delay clock reset
    /// first; bounded by `bound` on that clock, or extrapolated if none.
    fn closure(&self, sets: &[Federation], bound: Option<i64>) -> Vec<Federation> {
        let limit = bound.map(|c| Federation::from_atoms(&self.clocks, &[Atom::clock(self.z, Rel::Le, c)]));
        let start: Vec<Federation> = sets.iter().map(|f| f.reset(&[self.z])).collect();
        internal_closure(self.a, &self.guards, &self.invs, &start, |f| match &limit {
            Some(b) => f.intersect(b),
            None => f.normalize(self.max),
        })
    }

    fn exactly(&self, sets: &[Federation], c: i64) -> Vec<Federation> {
        let at = Federation::from_atoms(&self.clocks, &[Atom::clock(self.z, Rel::Eq, c)]);
        self.closure(sets, Some(c)).iter().map(|f| f.intersect(&at)).collect()
    }

    fn fire(&self, sets: &[Federation], action: &str) -> Vec<Federation> {
        let mut out = vec![Federation::empty(&self.clocks); sets.len()];
        for (k, e) in self.a.edges.iter().enumerate() {
            if self.a.actions[e.action].name != action || sets[e.src].is_empty() {
                continue;
            }
            let enabled = sets[e.src].intersect(&self.guards[k]);
            if enabled.is_empty() {
                continue;
            }
            for r in reset_choices(self.a, k) {
                let t = enabled.reset(&r).intersect(&self.invs[e.dst]);
                out[e.dst] = out[e.dst].union(&t);
            }
        }
        out
    }
}

/// Configurations reachable by a run whose trace is `sigma`, internal
/// moves after the last delay included.
pub fn after(a: &Automaton, sigma: &Trace) -> AfterSet {
    let scale = common_denominator(sigma.delays());
    let sc = Scaled::new(a, scale);
    let k = Rational::from_integer(scale);
    let mut sets = vec![Federation::empty(&sc.clocks); a.locations.len()];
    sets[a.initial] = sc.invs[a.initial].intersect_zone(&Zone::zero(sc.clocks.dim()));
    for (i, d) in sigma.delays().iter().enumerate() {
        sets = sc.exactly(&sets, (d * k).to_integer());
        if let Some(action) = sigma.actions().get(i) {
            sets = sc.fire(&sets, action);
        }
        if sets.iter().all(Federation::is_empty) {
            break;
        }
    }
    AfterSet { scale, states: sc.lower(&sets) }
}

/// Delays observable from the set: time elapsing with internal moves only.
/// Exact up to the largest constant; beyond it every delay of an unbounded
/// region is included.
pub fn elapse(a: &Automaton, s: &AfterSet) -> DelaySet {
    let sc = Scaled::new(a, s.scale);
    let reached = sc.closure(&sc.lift(&s.states), None);
    let zc = ClockSet::new([Z]).expect("one clock");
    let t = ClockSet::new(["t"]).expect("one clock");
    let mut set = Federation::empty(&t);
    for f in &reached {
        let p = f.project(&zc);
        set = set.union(&Federation::from_zones(&t, p.zones().iter().cloned()));
    }
    DelaySet { scale: s.scale, set: set.merged() }
}

fn enabled_actions(a: &Automaton, s: &AfterSet, pick: impl Fn(ActionKind) -> bool) -> BTreeSet<String> {
    let sc = Scaled::new(a, s.scale);
    let lifted = sc.lift(&s.states);
    let mut out = BTreeSet::new();
    for (k, e) in a.edges.iter().enumerate() {
        if !pick(a.kind(e.action)) || lifted[e.src].is_empty() {
            continue;
        }
        let enabled = lifted[e.src].intersect(&sc.guards[k]);
        if reset_choices(a, k).iter().any(|r| enabled.reset(r).intersects(&sc.invs[e.dst])) {
            out.insert(a.actions[e.action].name.clone());
        }
    }
    out
}

/// Outputs enabled somewhere in the set, with the observable delays.
pub fn out_(a: &Automaton, s: &AfterSet) -> (BTreeSet<String>, DelaySet) {
    (enabled_actions(a, s, |k| k == ActionKind::Output), elapse(a, s))
}

/// Inputs, the restart included, enabled somewhere in the set.
pub fn in_(a: &Automaton, s: &AfterSet) -> BTreeSet<String> {
    enabled_actions(a, s, ActionKind::is_controllable)
}
