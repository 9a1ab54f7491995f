use std::fmt;

use super::{ActionKind, Automaton};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NondetIssue {
    Internal { location: String, edge: usize, action: String },
    Overlap { location: String, action: String, first: usize, second: usize, witness: String },
}

impl fmt::Display for NondetIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NondetIssue::Internal { location, edge, action } => {
                write!(f, "internal action {action} on edge #{edge} at {location}")
            }
            NondetIssue::Overlap { location, action, first, second, witness } => {
                write!(f, "edges #{first} and #{second} on {action} at {location} overlap on {witness}")
            }
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct DeterminismReport {
    pub issues: Vec<NondetIssue>,
}

impl DeterminismReport {
    pub fn is_deterministic(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Sufficient check: no internal actions, and same-action edges leaving a
/// location have disjoint guards.
pub fn check_deterministic(a: &Automaton) -> DeterminismReport {
    let mut report = DeterminismReport::default();
    for (k, e) in a.edges.iter().enumerate() {
        if a.kind(e.action) == ActionKind::Internal {
            report.issues.push(NondetIssue::Internal {
                location: a.locations[e.src].name.clone(),
                edge: k,
                action: a.actions[e.action].name.clone(),
            });
        }
    }
    for l in 0..a.locations.len() {
        let out: Vec<(usize, _)> = a.edges_from(l).collect();
        for (p, &(i, ei)) in out.iter().enumerate() {
            for &(j, ej) in &out[p + 1..] {
                if ei.action != ej.action || a.kind(ei.action) == ActionKind::Internal {
                    continue;
                }
                let common = ei.guard.intersect(&ej.guard).intersect(&a.locations[l].invariant);
                if common.is_empty() {
                    continue;
                }
                report.issues.push(NondetIssue::Overlap {
                    location: a.locations[l].name.clone(),
                    action: a.actions[ei.action].label(),
                    first: i,
                    second: j,
                    witness: common.to_string(),
                });
            }
        }
    }
    report
}
