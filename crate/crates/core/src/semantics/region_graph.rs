use std::collections::{HashMap, VecDeque};

use crate::clockspace::{Region, Zone};
use crate::model::Automaton;

use super::SemanticsError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RgLabel {
    Delay,
    Edge { edge: usize, observed: Vec<usize> },
}

/// Explicit region graph of the reachable part of an automaton.
#[derive(Clone, Debug)]
pub struct RegionGraph {
    pub max: i64,
    pub states: Vec<(usize, Region)>,
    pub zones: Vec<Zone>,
    pub succ: Vec<Vec<(RgLabel, usize)>>,
    index: HashMap<(usize, Region), usize>,
}

/// All subsets of `items`, in a fixed order.
pub fn subsets(items: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(1 << items.len());
    for mask in 0u32..(1 << items.len()) {
        out.push(items.iter().enumerate().filter(|(k, _)| mask & (1 << k) != 0).map(|(_, &x)| x).collect());
    }
    out
}

impl RegionGraph {
    pub fn build(a: &Automaton, max: i64) -> Result<RegionGraph, SemanticsError> {
        RegionGraph::build_filtered(a, max, |_, _| true)
    }

    /// Like [`RegionGraph::build`], but states rejected by `expand` are kept
    /// as leaves without successors.
    pub fn build_filtered(
        a: &Automaton,
        max: i64,
        expand: impl Fn(usize, &Region) -> bool,
    ) -> Result<RegionGraph, SemanticsError> {
        let n = a.clocks.len();
        let mut g = RegionGraph { max, states: Vec::new(), zones: Vec::new(), succ: Vec::new(), index: HashMap::new() };
        let r0 = Region::zero(n, max);
        let z0 = r0.to_zone();
        if !a.locations[a.initial].invariant.intersects_zone(&z0) {
            return Err(SemanticsError::EmptyInitial(a.locations[a.initial].name.clone()));
        }
        let observed = a.observed_clocks();
        let observed_choices = subsets(&observed);
        let mut queue = VecDeque::new();
        g.intern(a.initial, r0, &mut queue);
        while let Some(s) = queue.pop_front() {
            let (l, r) = g.states[s].clone();
            if !expand(l, &r) {
                continue;
            }
            let zone = g.zones[s].clone();
            let mut out = Vec::new();
            let next = r.successor();
            if next == r {
                out.push((RgLabel::Delay, s));
            } else if a.locations[l].invariant.intersects_zone(&next.to_zone()) {
                let t = g.intern(l, next, &mut queue);
                out.push((RgLabel::Delay, t));
            }
            for (k, e) in a.edges_from(l) {
                if !e.guard.intersects_zone(&zone) {
                    continue;
                }
                for obs in &observed_choices {
                    let mut resets = e.resets.clone();
                    resets.extend(obs.iter().copied());
                    let target = r.reset(&resets);
                    if !a.locations[e.dst].invariant.intersects_zone(&target.to_zone()) {
                        continue;
                    }
                    let t = g.intern(e.dst, target, &mut queue);
                    out.push((RgLabel::Edge { edge: k, observed: obs.clone() }, t));
                }
            }
            g.succ[s] = out;
        }
        Ok(g)
    }

    fn intern(&mut self, l: usize, r: Region, queue: &mut VecDeque<usize>) -> usize {
        if let Some(&id) = self.index.get(&(l, r.clone())) {
            return id;
        }
        let id = self.states.len();
        self.zones.push(r.to_zone());
        self.states.push((l, r.clone()));
        self.succ.push(Vec::new());
        self.index.insert((l, r), id);
        queue.push_back(id);
        id
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn id(&self, loc: usize, region: &Region) -> Option<usize> {
        self.index.get(&(loc, region.clone())).copied()
    }

    /// Strongly connected components restricted to edges accepted by
    /// `keep`, in reverse topological order.
    pub fn sccs(&self, keep: impl Fn(&RgLabel) -> bool) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut index = vec![usize::MAX; n];
        let mut low = vec![0; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut out = Vec::new();
        let mut counter = 0;
        for root in 0..n {
            if index[root] != usize::MAX {
                continue;
            }
            let mut call: Vec<(usize, usize)> = vec![(root, 0)];
            index[root] = counter;
            low[root] = counter;
            counter += 1;
            stack.push(root);
            on_stack[root] = true;
            while let Some(&(v, pos)) = call.last() {
                if pos < self.succ[v].len() {
                    call.last_mut().expect("non-empty").1 += 1;
                    let (label, w) = &self.succ[v][pos];
                    if !keep(label) {
                        continue;
                    }
                    let w = *w;
                    if index[w] == usize::MAX {
                        index[w] = counter;
                        low[w] = counter;
                        counter += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                } else {
                    call.pop();
                    if let Some(&(p, _)) = call.last() {
                        low[p] = low[p].min(low[v]);
                    }
                    if low[v] == index[v] {
                        let mut comp = Vec::new();
                        loop {
                            let w = stack.pop().expect("tarjan stack");
                            on_stack[w] = false;
                            comp.push(w);
                            if w == v {
                                break;
                            }
                        }
                        comp.sort_unstable();
                        out.push(comp);
                    }
                }
            }
        }
        out
    }

    /// States that can reach a `target` state through edges accepted by
    /// `keep` (targets included).
    pub fn can_reach(&self, target: &[bool], keep: impl Fn(&RgLabel) -> bool) -> Vec<bool> {
        let n = self.len();
        let mut pred: Vec<Vec<usize>> = vec![Vec::new(); n];
        for s in 0..n {
            for (label, t) in &self.succ[s] {
                if keep(label) {
                    pred[*t].push(s);
                }
            }
        }
        let mut seen = target.to_vec();
        let mut queue: VecDeque<usize> = (0..n).filter(|&s| seen[s]).collect();
        while let Some(s) = queue.pop_front() {
            for &p in &pred[s] {
                if !seen[p] {
                    seen[p] = true;
                    queue.push_back(p);
                }
            }
        }
        seen
    }
}
