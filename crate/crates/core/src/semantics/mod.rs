//! Concrete and symbolic semantics: runs, traces, after-sets, forward
//! reachability, region graphs and bounded trace-set comparisons.

pub mod after;
pub mod reach;
pub mod region_graph;
pub mod run;
pub mod trace;
pub mod tracecheck;

pub use crate::model::SymbolicStateSet;
pub use after::{after, elapse, in_, out_, AfterSet, DelaySet};
pub use reach::reach;
pub use region_graph::{RegionGraph, RgLabel};
pub use run::{enab, initial_config, step, trace_of, Config, Run, Step, StepError};
pub use trace::{Trace, TraceParseError};
pub use tracecheck::{bounded_tioco, bounded_trace_equiv, EquivReport, TiocoReport, TiocoViolation};

use crate::clockspace::{Federation, Zone};
use crate::model::{ActionKind, Automaton};

/// Depth of the bounded trace checks when none is given.
pub const DEFAULT_HORIZON: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SemanticsError {
    #[error("initial valuation violates the invariant of {0}")]
    EmptyInitial(String),
    #[error("alphabets differ: {0}")]
    AlphabetMismatch(String),
}

/// Valuations reachable from `s` by letting time pass while staying in
/// `inv`. Exact when `inv` merges into one zone; otherwise the pieces are
/// chained until stable.
pub fn delay_within(s: &Federation, inv: &Federation) -> Federation {
    let s = s.intersect(inv);
    if inv.zones().len() <= 1 {
        return s.up().intersect(inv);
    }
    let mut acc = s;
    loop {
        let mut next = acc.clone();
        for z in inv.zones() {
            let piece = acc.intersect_zone(z).up().intersect_zone(z);
            next = next.union(&piece);
        }
        if next.is_subset(&acc) {
            return acc.merged();
        }
        acc = next;
    }
}

/// Reset sets a move along `edge` may apply: its own resets plus any
/// subset of the observed clocks.
pub(crate) fn reset_choices(a: &Automaton, edge: usize) -> Vec<Vec<usize>> {
    let e = &a.edges[edge];
    region_graph::subsets(&a.observed_clocks())
        .into_iter()
        .map(|obs| {
            let mut r = e.resets.clone();
            r.extend(obs);
            r.sort_unstable();
            r.dedup();
            r
        })
        .collect()
}

/// Closure of `sets` under delays and internal moves, over lifted guards
/// and invariants; `clip` bounds (or abstracts) every new delay successor.
pub(crate) fn internal_closure(
    a: &Automaton,
    guards: &[Federation],
    invs: &[Federation],
    sets: &[Federation],
    clip: impl Fn(Federation) -> Federation,
) -> Vec<Federation> {
    let mut acc: Vec<Vec<Zone>> = vec![Vec::new(); sets.len()];
    let mut waiting: Vec<(usize, Zone)> = Vec::new();
    let insert = |l: usize, f: &Federation, acc: &mut Vec<Vec<Zone>>, waiting: &mut Vec<(usize, Zone)>| {
        if f.is_empty() {
            return;
        }
        for z in clip(delay_within(f, &invs[l])).zones() {
            if acc[l].iter().any(|y| y.includes(z)) {
                continue;
            }
            acc[l].retain(|y| !z.includes(y));
            acc[l].push(z.clone());
            waiting.push((l, z.clone()));
        }
    };
    for (l, f) in sets.iter().enumerate() {
        insert(l, f, &mut acc, &mut waiting);
    }
    while let Some((l, z)) = waiting.pop() {
        if !acc[l].contains(&z) {
            continue;
        }
        for (k, e) in a.edges_from(l) {
            if a.kind(e.action) != ActionKind::Internal {
                continue;
            }
            let enabled = guards[k].intersect_zone(&z);
            if enabled.is_empty() {
                continue;
            }
            for r in reset_choices(a, k) {
                let t = enabled.reset(&r).intersect(&invs[e.dst]);
                insert(e.dst, &t, &mut acc, &mut waiting);
            }
        }
    }
    let clocks = sets.first().map(|f| f.clocks().clone());
    acc.into_iter()
        .map(|zs| Federation::from_zones(clocks.as_ref().expect("non-empty"), zs).merged())
        .collect()
}
