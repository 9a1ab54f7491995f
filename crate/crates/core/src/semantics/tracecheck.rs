//! Bounded comparisons of observable trace sets.
//!
//! Every automaton is extended with a global clock `g` and one clock per
//! observable action of the trace, reset when that action occurs. The
//! traces with action word `w` and duration at most `T` are then exactly
//! the projection of the symbolic states reached along `w` onto those
//! clocks: action `j` happened at `g - z_j`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::clockspace::{Atom, ClockSet, Federation, Rational, Rel, Zone};
use crate::model::{ActionKind, Automaton};

use super::{internal_closure, reset_choices, SemanticsError, Trace};

const G: &str = "__g";

fn z_name(j: usize) -> String {
    format!("__z{j}")
}

/// Clocks `g, z_1 … z_k` used to compare trace sets of words of length k.
fn trace_clocks(k: usize) -> Arc<ClockSet> {
    ClockSet::new(std::iter::once(G.to_string()).chain((1..=k).map(z_name))).expect("distinct names")
}

struct Explorer<'a> {
    a: &'a Automaton,
    clocks: Arc<ClockSet>,
    z: Vec<usize>,
    guards: Vec<Federation>,
    invs: Vec<Federation>,
    limit: Federation,
}

type Sets = Vec<Federation>;

impl<'a> Explorer<'a> {
    fn new(a: &'a Automaton, horizon: usize, time_bound: i64) -> Explorer<'a> {
        let clocks = a.clocks.union(&trace_clocks(horizon));
        let g = clocks.index_of(G).expect("added");
        let z = (1..=horizon).map(|j| clocks.index_of(&z_name(j)).expect("added")).collect();
        Explorer {
            a,
            z,
            guards: a.edges.iter().map(|e| e.guard.lift(&clocks)).collect(),
            invs: a.locations.iter().map(|l| l.invariant.lift(&clocks)).collect(),
            limit: Federation::from_atoms(&clocks, &[Atom::clock(g, Rel::Le, time_bound)]),
            clocks,
        }
    }

    fn start(&self) -> Sets {
        let mut sets = vec![Federation::empty(&self.clocks); self.a.locations.len()];
        sets[self.a.initial] = self.invs[self.a.initial].intersect_zone(&Zone::zero(self.clocks.dim()));
        self.closure(sets)
    }

    /// Delays (bounded by the time limit) and internal moves.
    fn closure(&self, sets: Sets) -> Sets {
        internal_closure(self.a, &self.guards, &self.invs, &sets, |f| f.intersect(&self.limit))
    }

    /// States after the `j`-th observable action (1-based) named `action`.
    fn fire(&self, sets: &Sets, action: &str, j: usize) -> Sets {
        let mut out = vec![Federation::empty(&self.clocks); sets.len()];
        for (k, e) in self.a.edges.iter().enumerate() {
            if self.a.actions[e.action].name != action || sets[e.src].is_empty() {
                continue;
            }
            let enabled = sets[e.src].intersect(&self.guards[k]);
            if enabled.is_empty() {
                continue;
            }
            for mut r in reset_choices(self.a, k) {
                r.push(self.z[j - 1]);
                let t = enabled.reset(&r).intersect(&self.invs[e.dst]);
                out[e.dst] = out[e.dst].union(&t);
            }
        }
        let out: Sets = out.into_iter().map(Federation::merged).collect();
        self.closure(out)
    }

    /// Trace set and accepted-trace set over `target`.
    fn project(&self, sets: &Sets, target: &Arc<ClockSet>) -> (Federation, Federation) {
        let mut all = Federation::empty(target);
        let mut acc = Federation::empty(target);
        for (l, f) in sets.iter().enumerate() {
            if f.is_empty() {
                continue;
            }
            let p = f.project(target);
            if self.a.accept.contains(&l) {
                acc = acc.union(&p);
            }
            all = all.union(&p);
        }
        (all.merged(), acc.merged())
    }
}

fn observable_actions(a: &Automaton) -> Vec<String> {
    a.actions.iter().filter(|d| d.kind.is_observable()).map(|d| d.name.clone()).collect()
}

fn check_alphabets(a: &Automaton, b: &Automaton) -> Result<(), SemanticsError> {
    let obs = |x: &Automaton| -> BTreeSet<(String, ActionKind)> {
        x.alphabet().into_iter().filter(|(_, k)| k.is_observable()).collect()
    };
    if obs(a) != obs(b) {
        return Err(SemanticsError::AlphabetMismatch(format!("{} vs {}", a.name, b.name)));
    }
    Ok(())
}

/// Concrete trace for a point over `g, z_1 … z_k`, ending at `g`.
fn trace_at(point: &[Rational], word: &[String]) -> Trace {
    let g = point[0];
    let events: Vec<(Rational, String)> = word.iter().enumerate().map(|(j, a)| (g - point[j + 1], a.clone())).collect();
    Trace::from_timestamps(&events, g)
}

/// Total-duration bound used by the bounded checks.
pub fn time_bound(a: &Automaton, b: &Automaton, horizon: usize) -> i64 {
    (horizon as i64 + 1) * (a.max_constant().max(b.max_constant()) + 1)
}

#[derive(Clone, Debug)]
pub struct EquivReport {
    /// A trace of one side only, or accepted on one side only.
    pub witness: Option<Difference>,
    pub words: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Difference {
    pub trace: Trace,
    pub left: bool,
    pub accepted_only: bool,
}

impl EquivReport {
    pub fn equivalent(&self) -> bool {
        self.witness.is_none()
    }
}

impl fmt::Display for EquivReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            None => write!(f, "equivalent ({} action words)", self.words),
            Some(d) => write!(f, "differ: {d}"),
        }
    }
}

impl fmt::Display for Difference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = if self.left { "left" } else { "right" };
        let what = if self.accepted_only { "accepted" } else { "a trace" };
        write!(f, "{} is {what} only on the {side}", self.trace)
    }
}

/// Compares trace sets and accepted-trace sets of `a` and `b` for traces
/// with at most `horizon` observable actions and total duration at most
/// [`time_bound`].
pub fn bounded_trace_equiv(a: &Automaton, b: &Automaton, horizon: usize) -> Result<EquivReport, SemanticsError> {
    check_alphabets(a, b)?;
    let t = time_bound(a, b, horizon);
    let (ea, eb) = (Explorer::new(a, horizon, t), Explorer::new(b, horizon, t));
    let actions = observable_actions(a);
    let targets: Vec<Arc<ClockSet>> = (0..=horizon).map(trace_clocks).collect();
    let mut queue: VecDeque<(Vec<String>, Sets, Sets)> = VecDeque::from([(Vec::new(), ea.start(), eb.start())]);
    let mut words = 0;
    while let Some((word, sa, sb)) = queue.pop_front() {
        words += 1;
        let k = word.len();
        let (ta, aa) = ea.project(&sa, &targets[k]);
        let (tb, ab) = eb.project(&sb, &targets[k]);
        for (x, y, accepted_only) in [(&ta, &tb, false), (&aa, &ab, true)] {
            for (left, d) in [(true, x.subtract(y)), (false, y.subtract(x))] {
                if let Some(p) = d.sample() {
                    let witness = Difference { trace: trace_at(&p, &word), left, accepted_only };
                    return Ok(EquivReport { witness: Some(witness), words });
                }
            }
        }
        if k == horizon {
            continue;
        }
        for act in &actions {
            let na = ea.fire(&sa, act, k + 1);
            let nb = eb.fire(&sb, act, k + 1);
            if na.iter().all(Federation::is_empty) && nb.iter().all(Federation::is_empty) {
                continue;
            }
            let mut w = word.clone();
            w.push(act.clone());
            queue.push_back((w, na, nb));
        }
    }
    Ok(EquivReport { witness: None, words })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TiocoViolation {
    /// The implementation emits `action` after `trace`; the specification
    /// does not allow it.
    Output { trace: Trace, action: String },
    /// The implementation lets time reach the end of `trace`; the
    /// specification stops earlier.
    Delay { trace: Trace },
}

impl fmt::Display for TiocoViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TiocoViolation::Output { trace, action } => write!(f, "unspecified output {action}! after {trace}"),
            TiocoViolation::Delay { trace } => write!(f, "unspecified delay: {trace}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct TiocoReport {
    pub violation: Option<TiocoViolation>,
    pub words: usize,
}

impl TiocoReport {
    pub fn conformant(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks that after every bounded trace of `spec`, the outputs and delays
/// of `imp` are allowed by `spec`.
pub fn bounded_tioco(imp: &Automaton, spec: &Automaton, horizon: usize) -> Result<TiocoReport, SemanticsError> {
    check_alphabets(imp, spec)?;
    let t = time_bound(imp, spec, horizon);
    let (ei, es) = (Explorer::new(imp, horizon + 1, t), Explorer::new(spec, horizon + 1, t));
    let actions = observable_actions(spec);
    let outputs: BTreeSet<&str> = spec
        .actions
        .iter()
        .filter(|d| d.kind == ActionKind::Output)
        .map(|d| d.name.as_str())
        .collect();
    let targets: Vec<Arc<ClockSet>> = (0..=horizon + 1).map(trace_clocks).collect();
    let mut queue: VecDeque<(Vec<String>, Sets, Sets)> = VecDeque::from([(Vec::new(), ei.start(), es.start())]);
    let mut words = 0;
    while let Some((word, si, ss)) = queue.pop_front() {
        words += 1;
        let k = word.len();
        let (pi, _) = ei.project(&si, &targets[k]);
        let (ps, _) = es.project(&ss, &targets[k]);
        let base = if k == 0 {
            Federation::universe(&targets[0])
        } else {
            let zk = targets[k].index_of(&z_name(k)).expect("own clock");
            ps.intersect(&Federation::from_atoms(&targets[k], &[Atom::clock(zk, Rel::Eq, 0)])).up()
        };
        if let Some(p) = pi.intersect(&base).subtract(&ps).sample() {
            let trace = trace_at(&p, &word);
            return Ok(TiocoReport { violation: Some(TiocoViolation::Delay { trace }), words });
        }
        let next_z = Federation::from_atoms(&targets[k + 1], &[Atom::clock(k + 2, Rel::Eq, 0)]);
        for act in &actions {
            let ns = es.fire(&ss, act, k + 1);
            let spec_has = !ns.iter().all(Federation::is_empty);
            let ni = if si.iter().all(Federation::is_empty) { si.clone() } else { ei.fire(&si, act, k + 1) };
            if outputs.contains(act.as_str()) {
                let now = |e: &Explorer, s: &Sets| e.project(s, &targets[k + 1]).0.intersect(&next_z).project(&targets[k]);
                let emitted = now(&ei, &ni).intersect(&ps);
                if let Some(p) = emitted.subtract(&now(&es, &ns)).sample() {
                    let trace = trace_at(&p, &word);
                    let violation = TiocoViolation::Output { trace, action: act.clone() };
                    return Ok(TiocoReport { violation: Some(violation), words });
                }
            }
            if spec_has && k < horizon {
                let mut w = word.clone();
                w.push(act.clone());
                queue.push_back((w, ni, ns));
            }
        }
    }
    Ok(TiocoReport { violation: None, words })
}
