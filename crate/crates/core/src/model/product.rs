use std::collections::BTreeSet;

use crate::clockspace::Federation;
use crate::semantics::reach;

use super::{Automaton, ModelError, Role};

/// Synchronized product restricted to reachable locations. Every action,
/// internal ones included, synchronizes by name; accepting locations come
/// from `b`.
pub fn product(a: &Automaton, b: &Automaton) -> Result<Automaton, ModelError> {
    let (la, lb) = (a.alphabet(), b.alphabet());
    if la != lb {
        return Err(ModelError::AlphabetMismatch {
            only_left: la.difference(&lb).map(|(n, _)| n.clone()).collect(),
            only_right: lb.difference(&la).map(|(n, _)| n.clone()).collect(),
        });
    }
    let a_proper: BTreeSet<&str> = a.proper_clocks().iter().map(|&i| a.clocks.name(i)).collect();
    for &i in &b.observed {
        let n = b.clocks.name(i);
        if !a_proper.contains(n) {
            return Err(ModelError::ObservedNotProper(n.to_string()));
        }
    }
    let clocks = a.clocks.union(&b.clocks);
    let mut full = Automaton::new(format!("{}x{}", a.name, b.name), Role::Product, clocks.clone());
    let proper: BTreeSet<String> = a
        .proper_clocks()
        .iter()
        .map(|&i| a.clocks.name(i).to_string())
        .chain(b.proper_clocks().iter().map(|&i| b.clocks.name(i).to_string()))
        .collect();
    full.observed = clocks
        .names()
        .iter()
        .filter(|n| !proper.contains(*n))
        .map(|n| clocks.index_of(n).expect("own clock"))
        .collect();
    for d in &a.actions {
        full.add_action(d.name.clone(), d.kind);
    }
    let nb = b.locations.len();
    for l1 in &a.locations {
        for l2 in &b.locations {
            let inv = l1.invariant.lift(&clocks).intersect(&l2.invariant.lift(&clocks));
            full.add_location(format!("({},{})", l1.name, l2.name), inv);
        }
    }
    full.initial = a.initial * nb + b.initial;
    let a_guards: Vec<Federation> = a.edges.iter().map(|e| e.guard.lift(&clocks)).collect();
    let b_guards: Vec<Federation> = b.edges.iter().map(|e| e.guard.lift(&clocks)).collect();
    let map_reset = |src: &Automaton, i: usize| clocks.index_of(src.clocks.name(i)).expect("union clock");
    for p in 0..a.locations.len() {
        for q in 0..nb {
            for (ia, ea) in a.edges_from(p) {
                let act = &a.actions[ea.action].name;
                for (ib, eb) in b.edges_from(q) {
                    if b.actions[eb.action].name != *act {
                        continue;
                    }
                    let guard = a_guards[ia].intersect(&b_guards[ib]);
                    if guard.is_empty() {
                        continue;
                    }
                    let mut resets: Vec<usize> = ea.resets.iter().map(|&i| map_reset(a, i)).collect();
                    resets.extend(eb.resets.iter().map(|&i| map_reset(b, i)));
                    let action = full.action_id(act).expect("same alphabet");
                    full.add_edge(p * nb + q, guard, action, resets, ea.dst * nb + eb.dst);
                }
            }
        }
    }
    for p in 0..a.locations.len() {
        for &q in &b.accept {
            full.accept.insert(p * nb + q);
        }
    }
    let reached = reach::reach(&full).map_err(|e| ModelError::Semantics(e.to_string()))?;
    let keep: Vec<usize> = (0..full.locations.len()).filter(|&l| !reached.get(l).is_empty()).collect();
    Ok(restrict(&full, &keep))
}

/// Sub-automaton on the listed locations (in that order).
pub fn restrict(a: &Automaton, keep: &[usize]) -> Automaton {
    let mut index = vec![None; a.locations.len()];
    for (k, &l) in keep.iter().enumerate() {
        index[l] = Some(k);
    }
    let mut out = Automaton::new(a.name.clone(), a.role, a.clocks.clone());
    out.observed = a.observed.clone();
    out.actions = a.actions.clone();
    for &l in keep {
        out.locations.push(a.locations[l].clone());
    }
    out.initial = index[a.initial].expect("initial location kept");
    for e in &a.edges {
        if let (Some(s), Some(d)) = (index[e.src], index[e.dst]) {
            out.add_edge(s, e.guard.clone(), e.action, e.resets.clone(), d);
        }
    }
    out.accept = a.accept.iter().filter_map(|&l| index[l]).collect();
    out.fail = a.fail.and_then(|l| index[l]);
    out.dp_invariants = a
        .dp_invariants
        .as_ref()
        .map(|inv| keep.iter().map(|&l| inv[l].clone()).collect());
    out
}
