use std::collections::BTreeSet;

use crate::clockspace::{Atom, ClockSet, Federation, Rational, Rel};
use crate::model::{ActionKind, Automaton, Role};
use crate::semantics::{after, Trace};

use super::ExecError;

/// Test purpose accepting exactly the traces `σ · δ · b` of `spec` after a
/// restart, through a spine of locations clocked since the last
/// observable action; every deviation ends in a sink.
pub fn exhaustiveness_tp(spec: &Automaton, sigma: &Trace, delta: Rational, b: &str) -> Result<Automaton, ExecError> {
    let b = b.trim_end_matches(['?', '!']);
    let act = spec.action_id(b).ok_or_else(|| ExecError::Purpose(format!("unknown action {b}")))?;
    if spec.kind(act) != ActionKind::Output {
        return Err(ExecError::Purpose(format!("{b} is not an output")));
    }
    let mut word = sigma.clone();
    word.push_delay(delta);
    word.push_action(b);
    if after(spec, &word).is_empty() {
        return Err(ExecError::Purpose(format!("{word} is not a trace of {}", spec.name)));
    }
    let delays = word.delays().to_vec();
    if let Some(d) = delays.iter().find(|d| !d.is_integer()) {
        return Err(ExecError::Purpose(format!("delay {d} is not an integer")));
    }
    let proper: Vec<String> = spec.proper_clocks().iter().map(|&i| spec.clocks.name(i).to_string()).collect();
    let mut own = "t".to_string();
    while proper.contains(&own) {
        own.push('_');
    }
    let clocks = ClockSet::new(std::iter::once(own.clone()).chain(proper.iter().cloned())).expect("distinct names");
    let mut tp = Automaton::new(format!("{}_exh", spec.name), Role::TestPurpose, clocks.clone());
    tp.observed = (2..=proper.len() + 1).collect::<BTreeSet<_>>();
    for d in &spec.actions {
        tp.add_action(d.name.clone(), d.kind);
    }
    let universe = Federation::universe(&clocks);
    let k = word.actions().len();
    for i in 0..k {
        tp.add_location(format!("P{i}"), universe.clone());
    }
    let accept = tp.add_location("Accept", universe.clone());
    let sink = tp.add_location("Sink", universe.clone());
    tp.initial = 0;
    tp.accept.insert(accept);
    for (i, name) in word.actions().iter().enumerate() {
        let a = tp.action_id(name).expect("copied alphabet");
        let next = if i + 1 == k { accept } else { i + 1 };
        let on_time = Federation::from_atoms(&clocks, &[Atom::clock(1, Rel::Eq, delays[i].to_integer())]);
        tp.add_edge(i, on_time.clone(), a, vec![1], next);
        tp.add_edge(i, on_time.complement(), a, vec![1], sink);
    }
    for l in 0..tp.locations.len() {
        for a in 0..tp.actions.len() {
            match tp.kind(a) {
                ActionKind::Restart => {
                    tp.add_edge(l, universe.clone(), a, vec![1], 0);
                }
                ActionKind::Internal => {
                    tp.add_edge(l, universe.clone(), a, Vec::new(), l);
                }
                _ if l < k && word.actions()[l] == tp.actions[a].name => {}
                _ => {
                    let dst = if l == accept { accept } else { sink };
                    tp.add_edge(l, universe.clone(), a, vec![1], dst);
                }
            }
        }
    }
    Ok(tp)
}
