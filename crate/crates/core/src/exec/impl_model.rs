use std::fmt;

use crate::clockspace::Federation;
use crate::model::{parse_federation, validate_spec, ActionKind, Automaton, Property, Role};
use crate::semantics::{bounded_tioco, TiocoViolation, DEFAULT_HORIZON};

use super::ExecError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputCompletion {
    /// Inputs must already be accepted everywhere.
    Explicit,
    /// Missing inputs become self-loops; a missing restart returns to the
    /// initial location with every clock reset.
    AbsorbSelfLoop,
}

/// Edit applied to a copy of a specification. Locations, actions and
/// clocks are named; guards use the model file syntax.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mutation {
    AddEdge { src: String, guard: String, action: String, resets: Vec<String>, dst: String },
    DeleteEdge { edge: usize },
    SetGuard { edge: usize, guard: String },
    SetResets { edge: usize, resets: Vec<String> },
    SetInvariant { location: String, invariant: String },
}

impl fmt::Display for Mutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mutation::AddEdge { src, guard, action, resets, dst } => {
                write!(f, "add {src} -- {guard} / {action} / {} -> {dst}", resets.join(", "))
            }
            Mutation::DeleteEdge { edge } => write!(f, "delete edge #{edge}"),
            Mutation::SetGuard { edge, guard } => write!(f, "guard of edge #{edge} := {guard}"),
            Mutation::SetResets { edge, resets } => write!(f, "resets of edge #{edge} := {{{}}}", resets.join(", ")),
            Mutation::SetInvariant { location, invariant } => write!(f, "invariant of {location} := {invariant}"),
        }
    }
}

/// Simulated implementation.
#[derive(Clone, Debug)]
pub struct ImplModel {
    pub automaton: Automaton,
    pub completion: InputCompletion,
    pub mutations: Vec<Mutation>,
    /// Bounded conformance verdict against the source, when checked.
    pub violation: Option<Option<TiocoViolation>>,
}

impl ImplModel {
    pub fn name(&self) -> &str {
        &self.automaton.name
    }

    /// `Some(true)` when checked and conformant.
    pub fn conformant(&self) -> Option<bool> {
        self.violation.as_ref().map(Option::is_none)
    }

    /// Wraps an automaton written directly as an implementation.
    pub fn from_automaton(a: Automaton, completion: InputCompletion) -> Result<ImplModel, ExecError> {
        finish(a, completion, Vec::new())
    }

    /// Records the bounded conformance check against `spec`.
    pub fn check_against(&mut self, spec: &Automaton, horizon: usize) -> Result<(), ExecError> {
        let report = bounded_tioco(&self.automaton, spec, horizon).map_err(|e| ExecError::Model(e.to_string()))?;
        self.violation = Some(report.violation);
        Ok(())
    }
}

/// Applies `mutations` to a copy of `spec`, completes inputs, checks that
/// the result never blocks time and records its bounded conformance to
/// `spec`.
pub fn make_impl(spec: &Automaton, mutations: &[Mutation], completion: InputCompletion) -> Result<ImplModel, ExecError> {
    let mut a = spec.clone();
    a.role = Role::Impl;
    if !mutations.is_empty() {
        a.name = format!("{}_mutant", spec.name);
    }
    let mut deleted = Vec::new();
    for m in mutations {
        apply(&mut a, m)?;
        if let Mutation::DeleteEdge { edge } = m {
            deleted.push(*edge);
        }
    }
    deleted.sort_unstable();
    for e in deleted.into_iter().rev() {
        a.edges.remove(e);
    }
    let mut imp = finish(a, completion, mutations.to_vec())?;
    imp.check_against(spec, DEFAULT_HORIZON)?;
    Ok(imp)
}

fn finish(mut a: Automaton, completion: InputCompletion, mutations: Vec<Mutation>) -> Result<ImplModel, ExecError> {
    if completion == InputCompletion::AbsorbSelfLoop {
        complete_inputs(&mut a);
    }
    if let Some((loc, action)) = missing_input(&a) {
        return Err(ExecError::NotInputComplete { location: loc, action });
    }
    let report = validate_spec(&a);
    for p in [Property::Shape, Property::NonBlocking] {
        if let Some(issue) = report.first(p) {
            return Err(ExecError::Blocking(issue.to_string()));
        }
    }
    Ok(ImplModel { automaton: a, completion, mutations, violation: None })
}

fn edge_index(a: &Automaton, edge: usize) -> Result<usize, ExecError> {
    if edge < a.edges.len() {
        Ok(edge)
    } else {
        Err(ExecError::Mutation(format!("no edge #{edge}")))
    }
}

fn location(a: &Automaton, name: &str) -> Result<usize, ExecError> {
    a.location_id(name).ok_or_else(|| ExecError::Mutation(format!("no location {name}")))
}

fn guard(a: &Automaton, text: &str) -> Result<Federation, ExecError> {
    parse_federation(&a.clocks, 0, 0, text).map_err(|e| ExecError::Mutation(e.to_string()))
}

fn clocks(a: &Automaton, names: &[String]) -> Result<Vec<usize>, ExecError> {
    names
        .iter()
        .map(|n| a.clocks.index_of(n).ok_or_else(|| ExecError::Mutation(format!("no clock {n}"))))
        .collect()
}

fn apply(a: &mut Automaton, m: &Mutation) -> Result<(), ExecError> {
    match m {
        Mutation::AddEdge { src, guard: g, action, resets, dst } => {
            let name = action.trim_end_matches(['?', '!']);
            let act = a.action_id(name).ok_or_else(|| ExecError::Mutation(format!("no action {name}")))?;
            let (s, d) = (location(a, src)?, location(a, dst)?);
            let (g, r) = (guard(a, g)?, clocks(a, resets)?);
            a.add_edge(s, g, act, r, d);
        }
        Mutation::DeleteEdge { edge } => {
            edge_index(a, *edge)?;
        }
        Mutation::SetGuard { edge, guard: g } => {
            let e = edge_index(a, *edge)?;
            a.edges[e].guard = guard(a, g)?;
        }
        Mutation::SetResets { edge, resets } => {
            let e = edge_index(a, *edge)?;
            let mut r = clocks(a, resets)?;
            r.sort_unstable();
            a.edges[e].resets = r;
        }
        Mutation::SetInvariant { location: l, invariant } => {
            let l = location(a, l)?;
            a.locations[l].invariant = guard(a, invariant)?;
        }
    }
    Ok(())
}

fn accepted(a: &Automaton, loc: usize, action: usize) -> Federation {
    let mut f = Federation::empty(&a.clocks);
    for (_, e) in a.edges_from(loc).filter(|(_, e)| e.action == action) {
        f = f.union(&e.guard);
    }
    f
}

fn complete_inputs(a: &mut Automaton) {
    let all: Vec<usize> = (1..=a.clocks.len()).collect();
    for l in 0..a.locations.len() {
        for act in 0..a.actions.len() {
            let kind = a.kind(act);
            if !kind.is_controllable() {
                continue;
            }
            let missing = accepted(a, l, act).complement();
            if missing.is_empty() {
                continue;
            }
            if kind == ActionKind::Restart {
                let init = a.initial;
                a.add_edge(l, missing, act, all.clone(), init);
            } else {
                a.add_edge(l, missing, act, Vec::new(), l);
            }
        }
    }
}

fn missing_input(a: &Automaton) -> Option<(String, String)> {
    for l in 0..a.locations.len() {
        for act in 0..a.actions.len() {
            if a.kind(act).is_controllable() && !accepted(a, l, act).complement().is_empty() {
                return Some((a.locations[l].name.clone(), a.actions[act].label()));
            }
        }
    }
    None
}
