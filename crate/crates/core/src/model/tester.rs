use crate::clockspace::Federation;

use super::determinism::check_deterministic;
use super::{ActionKind, Automaton, ModelError, Role, SymbolicStateSet};

/// Objective-centered tester together with its verdict sets.
#[derive(Clone, Debug)]
pub struct Tester {
    pub automaton: Automaton,
    pub vpass: SymbolicStateSet,
    pub vfail: SymbolicStateSet,
}

impl Tester {
    pub fn fail_location(&self) -> usize {
        self.automaton.fail.expect("tester has a fail location")
    }

    /// Rebuilds the verdict sets of a tester read back from a file.
    pub fn from_automaton(a: Automaton) -> Result<Tester, ModelError> {
        if a.role != Role::Tester {
            return Err(ModelError::TesterShape(format!("role is {}, expected tester", a.role.keyword())));
        }
        a.check_wellformed()?;
        let (vpass, vfail) = verdict_sets(&a);
        Ok(Tester { automaton: a, vpass, vfail })
    }
}

fn verdict_sets(a: &Automaton) -> (SymbolicStateSet, SymbolicStateSet) {
    let fail = a.fail.expect("tester has a fail location");
    let universe = Federation::universe(&a.clocks);
    let dp_inv: Vec<Federation> = match &a.dp_invariants {
        Some(v) => v.clone(),
        None => vec![universe.clone(); a.locations.len()],
    };
    let mut vpass = SymbolicStateSet::empty_for(a);
    let mut vfail = SymbolicStateSet::empty_for(a);
    for l in 0..a.locations.len() {
        if l == fail {
            vfail.set(l, universe.clone());
            continue;
        }
        if a.accept.contains(&l) {
            vpass.set(l, dp_inv[l].clone());
        }
        vfail.set(l, dp_inv[l].complement());
    }
    (vpass, vfail)
}

/// Completes a deterministic automaton on outputs towards a `Fail` sink
/// and moves its invariants into the verdict sets.
pub fn build_tester(dp: &Automaton) -> Result<Tester, ModelError> {
    let det = check_deterministic(dp);
    if let Some(issue) = det.issues.first() {
        return Err(ModelError::Nondeterministic(issue.to_string()));
    }
    let mut t = dp.clone();
    t.role = Role::Tester;
    t.name = format!("{}_tester", dp.name);
    let universe = Federation::universe(&t.clocks);
    let mut fail_name = "Fail".to_string();
    while t.location_id(&fail_name).is_some() {
        fail_name.push('_');
    }
    t.dp_invariants = Some(dp.locations.iter().map(|l| l.invariant.clone()).chain([universe.clone()]).collect());
    for l in &mut t.locations {
        l.invariant = universe.clone();
    }
    let fail = t.add_location(fail_name, universe.clone());
    t.fail = Some(fail);
    let outputs = dp.actions_of(ActionKind::Output);
    for l in 0..dp.locations.len() {
        for &a in &outputs {
            let mut covered = Federation::empty(&t.clocks);
            for (_, e) in dp.edges_from(l).filter(|(_, e)| e.action == a) {
                covered = covered.union(&e.guard);
            }
            let missing = covered.complement();
            if !missing.is_empty() {
                t.add_edge(l, missing, a, Vec::new(), fail);
            }
        }
    }
    for a in 0..t.actions.len() {
        t.add_edge(fail, universe.clone(), a, Vec::new(), fail);
    }
    let (vpass, vfail) = verdict_sets(&t);
    Ok(Tester { automaton: t, vpass, vfail })
}
