use std::collections::BTreeSet;
use std::fmt;

use crate::clockspace::Federation;
use crate::semantics::region_graph::{RegionGraph, RgLabel};

use super::{ActionKind, Automaton};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Property {
    Shape,
    NonBlocking,
    RepeatedObservability,
    RestartReachability,
    StrongConnectivity,
    Alphabet,
    ObservedClocks,
    Completeness,
    RestartShape,
}

impl Property {
    pub fn name(self) -> &'static str {
        match self {
            Property::Shape => "shape",
            Property::NonBlocking => "non-blocking",
            Property::RepeatedObservability => "repeated-observability",
            Property::RestartReachability => "restart-reachability",
            Property::StrongConnectivity => "strong-connectivity",
            Property::Alphabet => "alphabet",
            Property::ObservedClocks => "observed-clocks",
            Property::Completeness => "completeness",
            Property::RestartShape => "restart-shape",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationIssue {
    pub property: Property,
    /// Offending location, when there is one.
    pub location: Option<String>,
    pub detail: String,
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.location {
            Some(l) => write!(f, "{}: FAIL at {l}: {}", self.property.name(), self.detail),
            None => write!(f, "{}: FAIL: {}", self.property.name(), self.detail),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub checked: Vec<Property>,
    pub issues: Vec<ValidationIssue>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn passed(&self, p: Property) -> bool {
        self.checked.contains(&p) && self.issues.iter().all(|i| i.property != p)
    }

    pub fn first(&self, p: Property) -> Option<&ValidationIssue> {
        self.issues.iter().find(|i| i.property == p)
    }

    fn fail(&mut self, property: Property, location: Option<&str>, detail: impl Into<String>) {
        self.issues.push(ValidationIssue { property, location: location.map(str::to_string), detail: detail.into() });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.checked {
            match self.first(*p) {
                None => writeln!(f, "{}: pass", p.name())?,
                Some(i) => writeln!(f, "{i}")?,
            }
        }
        Ok(())
    }
}

/// Region-graph checks of a specification: non-blocking, repeated
/// observability, restart reachability and strong connectivity.
pub fn validate_spec(a: &Automaton) -> ValidationReport {
    let mut report = ValidationReport { checked: vec![Property::Shape], issues: Vec::new() };
    if let Err(e) = a.check_wellformed() {
        report.fail(Property::Shape, None, e.to_string());
        return report;
    }
    if !a.is_taio() {
        report.fail(Property::Shape, None, "a specification has no observed clocks");
        return report;
    }
    let g = match RegionGraph::build(a, a.max_constant()) {
        Ok(g) => g,
        Err(e) => {
            report.fail(Property::Shape, None, e.to_string());
            return report;
        }
    };
    report.checked.extend([
        Property::NonBlocking,
        Property::RepeatedObservability,
        Property::RestartReachability,
        Property::StrongConnectivity,
    ]);
    let witness = |s: usize| {
        let (l, r) = &g.states[s];
        (a.locations[*l].name.clone(), r.display(&a.clocks).to_string())
    };
    let kind_of = |label: &RgLabel| match label {
        RgLabel::Delay => None,
        RgLabel::Edge { edge, .. } => Some(a.kind(a.edges[*edge].action)),
    };

    let no_input = |label: &RgLabel| !matches!(kind_of(label), Some(ActionKind::Input | ActionKind::Restart));
    let divergent = divergent_states(a, &g, &no_input);
    let live = g.can_reach(&divergent, no_input);
    if let Some(s) = live.iter().position(|ok| !ok) {
        let (l, r) = witness(s);
        report.fail(Property::NonBlocking, Some(&l), format!("time is blocked without inputs from {r}"));
    }

    let observing: Vec<bool> = (0..g.len())
        .map(|s| g.succ[s].iter().any(|(label, _)| kind_of(label).is_some_and(ActionKind::is_observable)))
        .collect();
    let observable = g.can_reach(&observing, |_| true);
    if let Some(s) = observable.iter().position(|ok| !ok) {
        let (l, r) = witness(s);
        report.fail(Property::RepeatedObservability, Some(&l), format!("no observable action reachable from {r}"));
    }

    let restarting: Vec<bool> = (0..g.len())
        .map(|s| g.succ[s].iter().any(|(label, _)| kind_of(label) == Some(ActionKind::Restart)))
        .collect();
    let restartable = g.can_reach(&restarting, |_| true);
    if let Some(s) = restartable.iter().position(|ok| !ok) {
        let (l, r) = witness(s);
        report.fail(Property::RestartReachability, Some(&l), format!("no restart reachable from {r}"));
    }

    let sccs = g.sccs(|_| true);
    if sccs.len() > 1 {
        let init = g.id(a.initial, &crate::clockspace::Region::zero(a.clocks.len(), g.max)).expect("initial state");
        let mut target = vec![false; g.len()];
        target[init] = true;
        let back = g.can_reach(&target, |_| true);
        let s = back.iter().position(|ok| !ok).unwrap_or(sccs[0][0]);
        let (l, r) = witness(s);
        report.fail(Property::StrongConnectivity, Some(&l), format!("initial state unreachable from {r}"));
    }
    report
}

/// States inside a cycle of `keep`-edges along which time can diverge:
/// the cycle delays, and every clock is either eventually unbounded or
/// reset after having grown.
fn divergent_states(a: &Automaton, g: &RegionGraph, keep: &impl Fn(&RgLabel) -> bool) -> Vec<bool> {
    let mut out = vec![false; g.len()];
    let mut comp_of = vec![usize::MAX; g.len()];
    let sccs = g.sccs(keep);
    for (c, comp) in sccs.iter().enumerate() {
        for &s in comp {
            comp_of[s] = c;
        }
    }
    let n = a.clocks.len();
    for (c, comp) in sccs.iter().enumerate() {
        let mut delays = false;
        let mut reset = vec![false; n];
        for &s in comp {
            for (label, t) in &g.succ[s] {
                if comp_of[*t] != c || !keep(label) {
                    continue;
                }
                match label {
                    RgLabel::Delay => delays = true,
                    RgLabel::Edge { edge, observed } => {
                        for &x in a.edges[*edge].resets.iter().chain(observed) {
                            reset[x - 1] = true;
                        }
                    }
                }
            }
        }
        if !delays {
            continue;
        }
        let ok = (0..n).all(|k| {
            comp.iter().any(|&s| !g.states[s].1.is_bounded(k))
                || (reset[k] && comp.iter().any(|&s| g.states[s].1.int_part(k) > 0 || g.states[s].1.frac_rank(k) > 0))
        });
        if ok {
            for &s in comp {
                out[s] = true;
            }
        }
    }
    out
}

/// Checks a test purpose against its specification: same alphabet,
/// observed clocks equal to the specification's clocks, completeness and
/// restart edges resetting the own clocks back to the initial location.
pub fn validate_tp(tp: &Automaton, spec: &Automaton) -> ValidationReport {
    let mut report = ValidationReport {
        checked: vec![
            Property::Shape,
            Property::Alphabet,
            Property::ObservedClocks,
            Property::Completeness,
            Property::RestartShape,
        ],
        issues: Vec::new(),
    };
    if let Err(e) = tp.check_wellformed() {
        report.fail(Property::Shape, None, e.to_string());
        return report;
    }
    let (l, r) = (tp.alphabet(), spec.alphabet());
    if l != r {
        let missing: Vec<String> = r.difference(&l).map(|(n, _)| n.clone()).collect();
        let extra: Vec<String> = l.difference(&r).map(|(n, _)| n.clone()).collect();
        report.fail(Property::Alphabet, None, format!("missing {missing:?}, extra {extra:?}"));
    }
    let observed: BTreeSet<&str> = tp.observed.iter().map(|&i| tp.clocks.name(i)).collect();
    let proper: BTreeSet<&str> = spec.proper_clocks().iter().map(|&i| spec.clocks.name(i)).collect();
    if observed != proper {
        report.fail(Property::ObservedClocks, None, format!("observed {observed:?}, specification clocks {proper:?}"));
    }
    let universe = Federation::universe(&tp.clocks);
    for (k, loc) in tp.locations.iter().enumerate() {
        if !loc.invariant.equals(&universe) {
            report.fail(Property::Completeness, Some(&loc.name), format!("invariant {} is not true", loc.invariant));
            continue;
        }
        for (act, decl) in tp.actions.iter().enumerate() {
            let covered = tp
                .edges_from(k)
                .filter(|(_, e)| e.action == act)
                .fold(Federation::empty(&tp.clocks), |acc, (_, e)| acc.union(&e.guard));
            let missing = covered.complement();
            if !missing.is_empty() {
                report.fail(Property::Completeness, Some(&loc.name), format!("{} not enabled on {}", decl.label(), missing));
            }
        }
    }
    let proper_tp = tp.proper_clocks();
    for e in &tp.edges {
        if tp.kind(e.action) != ActionKind::Restart {
            continue;
        }
        let src = &tp.locations[e.src].name;
        if e.dst != tp.initial {
            report.fail(Property::RestartShape, Some(src), "restart does not lead to the initial location");
        } else if !proper_tp.iter().all(|x| e.resets.contains(x)) {
            report.fail(Property::RestartShape, Some(src), "restart does not reset every own clock");
        }
    }
    report
}

/// Adds self-loops guarded by the uncovered part of every action except
/// the restart, and relaxes invariants to true.
pub fn auto_complete_tp(tp: &Automaton) -> Automaton {
    let mut out = tp.clone();
    let universe = Federation::universe(&tp.clocks);
    for l in &mut out.locations {
        l.invariant = universe.clone();
    }
    for k in 0..tp.locations.len() {
        for act in 0..tp.actions.len() {
            if tp.kind(act) == ActionKind::Restart {
                continue;
            }
            let covered = tp
                .edges_from(k)
                .filter(|(_, e)| e.action == act)
                .fold(Federation::empty(&tp.clocks), |acc, (_, e)| acc.union(&e.guard));
            let missing = covered.complement();
            if !missing.is_empty() {
                out.add_edge(k, missing, act, Vec::new(), k);
            }
        }
    }
    out
}
