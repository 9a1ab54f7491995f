use crate::clockspace::{Federation, Zone};
use crate::model::{Automaton, SymbolicStateSet};

use super::{delay_within, reset_choices, SemanticsError};

/// Forward zone-graph fixpoint with extrapolation to the largest constant.
pub fn reach(a: &Automaton) -> Result<SymbolicStateSet, SemanticsError> {
    let max = a.max_constant();
    let dim = a.clocks.dim();
    let init_inv = &a.locations[a.initial].invariant;
    let start = init_inv.intersect_zone(&Zone::zero(dim));
    if start.is_empty() {
        return Err(SemanticsError::EmptyInitial(a.locations[a.initial].name.clone()));
    }
    let mut passed: Vec<Vec<Zone>> = vec![Vec::new(); a.locations.len()];
    let mut waiting: Vec<(usize, Zone)> = Vec::new();
    let push = |l: usize, f: Federation, passed: &mut Vec<Vec<Zone>>, waiting: &mut Vec<(usize, Zone)>| {
        for z in f.normalize(max).zones() {
            if passed[l].iter().any(|p| p.includes(z)) {
                continue;
            }
            passed[l].retain(|p| !z.includes(p));
            passed[l].push(z.clone());
            waiting.push((l, z.clone()));
        }
    };
    push(a.initial, delay_within(&start, init_inv), &mut passed, &mut waiting);
    while let Some((l, z)) = waiting.pop() {
        if !passed[l].contains(&z) {
            continue;
        }
        let here = Federation::from_zone(&a.clocks, z);
        for (k, e) in a.edges_from(l) {
            let enabled = here.intersect(&e.guard);
            if enabled.is_empty() {
                continue;
            }
            let inv = &a.locations[e.dst].invariant;
            for resets in reset_choices(a, k) {
                let target = enabled.reset(&resets).intersect(inv);
                if !target.is_empty() {
                    push(e.dst, delay_within(&target, inv), &mut passed, &mut waiting);
                }
            }
        }
    }
    let sets = passed
        .into_iter()
        .map(|zs| Federation::from_zones(&a.clocks, zs).merged())
        .collect();
    Ok(SymbolicStateSet::from_sets(&a.clocks, sets))
}
