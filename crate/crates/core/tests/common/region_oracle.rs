//! Explicit region-level game solver. Works on its own region encoding
//! and only queries federations for membership of sample points.

use std::collections::HashMap;

use tiotest_core::clockspace::{Federation, Rational};
use tiotest_core::game::GameView;
use tiotest_core::model::SymbolicStateSet;

/// Per clock: integer part (or `m + 1` above the maximal constant) and the
/// rank of the fractional part among the bounded clocks (0 = integral).
pub type Reg = Vec<(i64, u32)>;

/// `set[l][r]` for location `l` and region index `r`.
pub type Set = Vec<Vec<bool>>;

pub struct Oracle {
    pub m: i64,
    pub n: usize,
    pub locs: usize,
    pub regions: Vec<Reg>,
    index: HashMap<Reg, usize>,
    next: Vec<usize>,
}

fn canonical(r: &Reg) -> bool {
    let k = r.iter().map(|c| c.1).max().unwrap_or(0);
    (1..=k).all(|q| r.iter().any(|c| c.1 == q))
}

fn compress(mut r: Reg) -> Reg {
    let mut ranks: Vec<u32> = r.iter().map(|c| c.1).filter(|&q| q > 0).collect();
    ranks.sort_unstable();
    ranks.dedup();
    for c in &mut r {
        if c.1 > 0 {
            c.1 = ranks.iter().position(|&q| q == c.1).unwrap() as u32 + 1;
        }
    }
    r
}

impl Oracle {
    pub fn new(n: usize, m: i64, locs: usize) -> Oracle {
        let mut regions = Vec::new();
        let mut cur: Reg = vec![(0, 0); n];
        fill(0, n, m, &mut cur, &mut regions);
        let index: HashMap<Reg, usize> = regions.iter().cloned().enumerate().map(|(k, r)| (r, k)).collect();
        let mut o = Oracle { m, n, locs, regions, index, next: Vec::new() };
        o.next = (0..o.regions.len()).map(|k| o.index[&o.successor(&o.regions[k])]).collect();
        o
    }

    fn bounded(&self, c: (i64, u32)) -> bool {
        c.0 <= self.m
    }

    fn successor(&self, r: &Reg) -> Reg {
        if r.iter().all(|&c| !self.bounded(c)) {
            return r.clone();
        }
        let mut s = r.clone();
        if r.iter().any(|&c| self.bounded(c) && c.1 == 0) {
            for c in &mut s {
                if c.0 > self.m {
                    continue;
                }
                if c.1 == 0 {
                    if c.0 == self.m {
                        *c = (self.m + 1, 0);
                    } else {
                        c.1 = 1;
                    }
                } else {
                    c.1 += 1;
                }
            }
        } else {
            let top = r.iter().map(|c| c.1).max().unwrap();
            for c in &mut s {
                if c.0 <= self.m && c.1 == top {
                    *c = (c.0 + 1, 0);
                }
            }
        }
        compress(s)
    }

    pub fn chain(&self, r: usize) -> Vec<usize> {
        let mut out = vec![r];
        while self.next[*out.last().unwrap()] != *out.last().unwrap() {
            out.push(self.next[*out.last().unwrap()]);
        }
        out
    }

    pub fn reset(&self, r: usize, clocks: &[usize]) -> usize {
        let mut s = self.regions[r].clone();
        for &i in clocks {
            s[i - 1] = (0, 0);
        }
        self.index[&compress(s)]
    }

    /// Two points of the region with different spacings.
    pub fn samples(&self, r: usize) -> [Vec<Rational>; 2] {
        let reg = &self.regions[r];
        let k = reg.iter().map(|c| c.1).max().unwrap_or(0) as i64;
        let point = |den: i64, far: i64| -> Vec<Rational> {
            reg.iter()
                .enumerate()
                .map(|(i, &(int, q))| {
                    if int > self.m {
                        Rational::from_integer(self.m + 1 + far * i as i64) + Rational::new(1, 3)
                    } else {
                        Rational::from_integer(int) + Rational::new(q as i64, den)
                    }
                })
                .collect()
        };
        [point(k + 1, 0), point(2 * k + 3, 2)]
    }

    pub fn empty(&self) -> Set {
        vec![vec![false; self.regions.len()]; self.locs]
    }

    /// Region-level image of `s`; `None` when a region is split by it.
    pub fn of_states(&self, s: &SymbolicStateSet) -> Option<Set> {
        let mut out = self.empty();
        for l in 0..self.locs {
            for r in 0..self.regions.len() {
                let [a, b] = self.samples(r);
                let (ina, inb) = (s.contains(l, &a), s.contains(l, &b));
                if ina != inb {
                    return None;
                }
                out[l][r] = ina;
            }
        }
        Some(out)
    }

    pub fn of_federation(&self, f: &Federation) -> Vec<bool> {
        (0..self.regions.len()).map(|r| f.contains(&self.samples(r)[0])).collect()
    }

    pub fn union(a: &Set, b: &Set) -> Set {
        a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(p, q)| *p || *q).collect()).collect()
    }

    pub fn minus(a: &Set, b: &Set) -> Set {
        a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(p, q)| *p && !*q).collect()).collect()
    }

    pub fn complement(a: &Set) -> Set {
        a.iter().map(|x| x.iter().map(|p| !p).collect()).collect()
    }

    pub fn subset(a: &Set, b: &Set) -> bool {
        a.iter().zip(b).all(|(x, y)| x.iter().zip(y).all(|(p, q)| !*p || *q))
    }

    pub fn pred_discrete(&self, g: &GameView, s: &Set, admit: impl Fn(usize) -> bool) -> Set {
        let a = &g.automaton;
        let mut out = self.empty();
        for e in &a.edges {
            if !admit(e.action) {
                continue;
            }
            for r in 0..self.regions.len() {
                if !out[e.src][r] && e.guard.contains(&self.samples(r)[0]) && s[e.dst][self.reset(r, &e.resets)] {
                    out[e.src][r] = true;
                }
            }
        }
        out
    }

    pub fn pred_timed(&self, s: &Set, avoid: &Set) -> Set {
        let mut out = self.empty();
        for l in 0..self.locs {
            for r in 0..self.regions.len() {
                for c in self.chain(r) {
                    if avoid[l][c] {
                        break;
                    }
                    if s[l][c] {
                        out[l][r] = true;
                        break;
                    }
                }
            }
        }
        out
    }

    pub fn tpred(&self, s: &Set) -> Set {
        self.pred_timed(s, &self.empty())
    }

    pub fn pred_final(&self, g: &GameView, vfail: &Set, s: &Set) -> Set {
        let out = Oracle::complement(&Oracle::union(s, vfail));
        let unc = |x: usize| !g.is_controllable(x);
        let forced = self.pred_timed(vfail, &self.pred_discrete(g, &out, unc));
        let stuck = Oracle::complement(&self.tpred(&self.pred_discrete(g, &out, |_| true)));
        Oracle::union(&forced, &stuck)
    }

    pub fn pi(&self, g: &GameView, vfail: &Set, s: &Set) -> Set {
        let out = Oracle::complement(&Oracle::union(s, vfail));
        let goal = Oracle::union(s, &self.pred_discrete(g, s, |x| g.is_controllable(x)));
        let safe = self.pred_timed(&goal, &self.pred_discrete(g, &out, |x| !g.is_controllable(x)));
        let all = Oracle::union(&Oracle::union(&safe, &self.pred_final(g, vfail, s)), s);
        Oracle::minus(&all, vfail)
    }

    pub fn hierarchy(&self, g: &GameView) -> Vec<Vec<Set>> {
        let vpass = self.of_states(&g.vpass).expect("verdict sets are region unions");
        let vfail = self.of_states(&g.vfail).expect("verdict sets are region unions");
        let mut levels = Vec::new();
        let mut w = Oracle::minus(&vpass, &vfail);
        loop {
            let mut chain = vec![w.clone()];
            loop {
                let next = self.pi(g, &vfail, chain.last().unwrap());
                if Oracle::subset(&next, chain.last().unwrap()) {
                    break;
                }
                chain.push(next);
            }
            let limit = chain.last().unwrap().clone();
            levels.push(chain);
            let pre = self.pred_discrete(g, &limit, |_| true);
            let jump = Oracle::minus(&Oracle::union(&self.tpred(&Oracle::union(&limit, &pre)), &limit), &vfail);
            if Oracle::subset(&jump, &limit) {
                return levels;
            }
            w = jump;
        }
    }
}

fn fill(k: usize, n: usize, m: i64, cur: &mut Reg, out: &mut Vec<Reg>) {
    if k == n {
        if canonical(cur) {
            out.push(cur.clone());
        }
        return;
    }
    for int in 0..=m + 1 {
        let fracs = if int > m { 0 } else { n as u32 };
        for q in 0..=fracs {
            cur[k] = (int, q);
            fill(k + 1, n, m, cur, out);
        }
    }
}
