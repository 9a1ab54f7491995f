use std::fmt;

use num_traits::Zero;

use super::constraint::{Atom, Rel};
use super::valuation::Rational;
use super::{ClockSet, Zone};

/// Region of the classic construction for one maximal constant `max`.
///
/// For clock `k` (DBM index `k + 1`): `ints[k]` is the integer part, or
/// `max + 1` once the clock exceeds `max`; `fracs[k]` is 0 for a zero
/// fractional part and otherwise the clock's rank (1, 2, …) in the
/// increasing order of nonzero fractional parts. Unbounded clocks carry
/// `fracs[k] = 0`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Region {
    max: i64,
    ints: Vec<i64>,
    fracs: Vec<u32>,
}

impl Region {
    pub fn zero(clocks: usize, max: i64) -> Region {
        Region { max, ints: vec![0; clocks], fracs: vec![0; clocks] }
    }

    pub fn of_valuation(v: &[Rational], max: i64) -> Region {
        let bound = Rational::from_integer(max);
        let mut ints = Vec::with_capacity(v.len());
        let mut fracs = vec![0u32; v.len()];
        let mut positive: Vec<(Rational, usize)> = Vec::new();
        for (k, &x) in v.iter().enumerate() {
            assert!(x >= Rational::zero(), "negative clock value");
            if x > bound {
                ints.push(max + 1);
            } else {
                ints.push(x.floor().to_integer());
                let f = x.fract();
                if !f.is_zero() {
                    positive.push((f, k));
                }
            }
        }
        positive.sort();
        let mut rank = 0;
        let mut last: Option<Rational> = None;
        for (f, k) in positive {
            if last != Some(f) {
                rank += 1;
                last = Some(f);
            }
            fracs[k] = rank;
        }
        Region { max, ints, fracs }
    }

    pub fn max_constant(&self) -> i64 {
        self.max
    }

    pub fn clocks(&self) -> usize {
        self.ints.len()
    }

    pub fn int_part(&self, k: usize) -> i64 {
        self.ints[k]
    }

    pub fn frac_rank(&self, k: usize) -> u32 {
        self.fracs[k]
    }

    pub fn is_bounded(&self, k: usize) -> bool {
        self.ints[k] <= self.max
    }

    /// Every clock is above the maximal constant; time cannot leave it.
    pub fn is_terminal(&self) -> bool {
        (0..self.clocks()).all(|k| !self.is_bounded(k))
    }

    /// Some bounded clock sits on an integer, so any positive delay leaves.
    pub fn is_boundary(&self) -> bool {
        (0..self.clocks()).any(|k| self.is_bounded(k) && self.fracs[k] == 0)
    }

    fn compress(&mut self) {
        let mut used: Vec<u32> = (0..self.clocks())
            .filter(|&k| self.is_bounded(k) && self.fracs[k] > 0)
            .map(|k| self.fracs[k])
            .collect();
        used.sort_unstable();
        used.dedup();
        for k in 0..self.clocks() {
            if !self.is_bounded(k) {
                self.fracs[k] = 0;
            } else if self.fracs[k] > 0 {
                self.fracs[k] = used.binary_search(&self.fracs[k]).expect("rank present") as u32 + 1;
            }
        }
    }

    /// The region time enters next; a terminal region is its own successor.
    #[must_use]
    pub fn successor(&self) -> Region {
        let mut r = self.clone();
        if self.is_terminal() {
            return r;
        }
        if self.is_boundary() {
            for k in 0..r.clocks() {
                if !r.is_bounded(k) {
                    continue;
                }
                if r.fracs[k] == 0 {
                    if r.ints[k] == r.max {
                        r.ints[k] = r.max + 1;
                    } else {
                        r.fracs[k] = 1;
                    }
                } else {
                    r.fracs[k] += 1;
                }
            }
        } else {
            let top = (0..r.clocks()).filter(|&k| r.is_bounded(k)).map(|k| r.fracs[k]).max().unwrap_or(0);
            for k in 0..r.clocks() {
                if r.is_bounded(k) && r.fracs[k] == top {
                    r.ints[k] += 1;
                    r.fracs[k] = 0;
                }
            }
        }
        r.compress();
        r
    }

    /// The chain of regions visited by letting time pass, starting with
    /// `self` and ending with the terminal region.
    pub fn delay_chain(&self) -> Vec<Region> {
        let mut chain = vec![self.clone()];
        while !chain.last().expect("non-empty").is_terminal() {
            let next = chain.last().expect("non-empty").successor();
            chain.push(next);
        }
        chain
    }

    /// Resets clocks given by DBM index.
    #[must_use]
    pub fn reset(&self, clocks: &[usize]) -> Region {
        let mut r = self.clone();
        for &i in clocks {
            r.ints[i - 1] = 0;
            r.fracs[i - 1] = 0;
        }
        r.compress();
        r
    }

    pub fn atoms(&self) -> Vec<Atom> {
        let n = self.clocks();
        let mut atoms = Vec::new();
        for k in 0..n {
            let i = k + 1;
            if !self.is_bounded(k) {
                atoms.push(Atom::clock(i, Rel::Gt, self.max));
            } else if self.fracs[k] == 0 {
                atoms.push(Atom::clock(i, Rel::Eq, self.ints[k]));
            } else {
                atoms.push(Atom::clock(i, Rel::Gt, self.ints[k]));
                atoms.push(Atom::clock(i, Rel::Lt, self.ints[k] + 1));
            }
        }
        for a in 0..n {
            for b in 0..n {
                if a == b || !self.is_bounded(a) || !self.is_bounded(b) {
                    continue;
                }
                let (fa, fb) = (self.fracs[a], self.fracs[b]);
                if fa == 0 || fb == 0 {
                    continue;
                }
                let d = self.ints[a] - self.ints[b];
                if fa == fb && a < b {
                    atoms.push(Atom::diff(a + 1, b + 1, Rel::Eq, d));
                } else if fa < fb {
                    atoms.push(Atom::diff(a + 1, b + 1, Rel::Lt, d));
                    atoms.push(Atom::diff(a + 1, b + 1, Rel::Gt, d - 1));
                }
            }
        }
        atoms
    }

    pub fn to_zone(&self) -> Zone {
        Zone::from_atoms(self.clocks() + 1, &self.atoms()).expect("regions are non-empty")
    }

    /// Every region over `clocks` clocks for maximal constant `max`, in a
    /// fixed order.
    pub fn all(clocks: usize, max: i64) -> Vec<Region> {
        // Per clock: (integer part, positive fraction); max + 1 means above max.
        let mut shapes: Vec<Vec<(i64, bool)>> = vec![Vec::new()];
        for _ in 0..clocks {
            let mut next = Vec::new();
            for s in &shapes {
                for int in 0..=max + 1 {
                    for pos in [false, true] {
                        if int > max && pos {
                            continue;
                        }
                        if int == max && pos {
                            continue;
                        }
                        let mut t = s.clone();
                        t.push((int, pos));
                        next.push(t);
                    }
                }
            }
            shapes = next;
        }
        let mut out = Vec::new();
        for shape in shapes {
            let pos: Vec<usize> = (0..clocks).filter(|&k| shape[k].1).collect();
            for ranks in weak_orders(pos.len()) {
                let mut fracs = vec![0u32; clocks];
                for (p, &k) in pos.iter().enumerate() {
                    fracs[k] = ranks[p];
                }
                out.push(Region { max, ints: shape.iter().map(|s| s.0).collect(), fracs });
            }
        }
        out
    }

    /// Regions meeting the federation given by its zones; exact when the
    /// federation's constraints use constants at most `max` and no
    /// diagonal constraints.
    pub fn cover(zones: &[Zone], clocks: usize, max: i64) -> Vec<Region> {
        Region::all(clocks, max).into_iter().filter(|r| {
            let z = r.to_zone();
            zones.iter().any(|y| y.intersects(&z))
        }).collect()
    }

    pub fn display<'a>(&'a self, clocks: &'a ClockSet) -> impl fmt::Display + 'a {
        RegionDisplay { region: self, clocks }
    }
}

impl fmt::Debug for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Region{{ints: {:?}, fracs: {:?}, max: {}}}", self.ints, self.fracs, self.max)
    }
}

struct RegionDisplay<'a> {
    region: &'a Region,
    clocks: &'a ClockSet,
}

impl fmt::Display for RegionDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.region.to_zone().display(self.clocks))
    }
}

/// All surjections from `n` items onto `1..=k` for some `k`, i.e. weak
/// orders of the items.
fn weak_orders(n: usize) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut cur = vec![1u32; n];
    loop {
        let max = *cur.iter().max().expect("n > 0");
        if (1..=max).all(|r| cur.contains(&r)) {
            out.push(cur.clone());
        }
        let mut k = 0;
        loop {
            if k == n {
                return out;
            }
            if cur[k] < n as u32 {
                cur[k] += 1;
                break;
            }
            cur[k] = 1;
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn one_clock_region_count() {
        assert_eq!(Region::all(1, 2).len(), 6);
        let all = Region::all(2, 1);
        for r in &all {
            let v = r.to_zone().sample();
            assert_eq!(Region::of_valuation(&v, 1), *r);
        }
    }

    #[test]
    fn same_fractional_order_same_region() {
        let a = Region::of_valuation(&[q(17, 10), q(3, 10)], 3);
        let b = Region::of_valuation(&[q(9, 5), q(1, 5)], 3);
        assert_eq!(a, b);
        // Equal fractional parts form a region of their own.
        let c = Region::of_valuation(&[q(3, 2), q(1, 2)], 3);
        assert_ne!(a, c);
        let d = Region::of_valuation(&[q(13, 10), q(7, 10)], 3);
        assert_ne!(a, d);
    }

    #[test]
    fn successor_walks_the_diagonal() {
        let r = Region::zero(2, 1);
        let chain = r.delay_chain();
        let reps: Vec<Vec<Rational>> = chain.iter().map(|r| r.to_zone().sample()).collect();
        assert_eq!(chain.len(), 4);
        assert_eq!(reps[1], vec![q(1, 2), q(1, 2)]);
        assert_eq!(reps[2], vec![q(1, 1), q(1, 1)]);
        assert!(chain[3].is_terminal());
    }

    #[test]
    fn successor_matches_sampled_delays() {
        for r in Region::all(3, 2) {
            let v = r.to_zone().sample();
            let next = r.successor();
            if r.is_terminal() {
                assert_eq!(next, r);
                continue;
            }
            let bounded: Vec<Rational> = v.iter().copied().filter(|x| *x <= Rational::from_integer(2)).collect();
            let gap = bounded
                .iter()
                .map(|x| x.floor() + Rational::from_integer(1) - x)
                .min()
                .expect("non-terminal region has a bounded clock");
            let t = if r.is_boundary() { gap / 2 } else { gap };
            let w: Vec<Rational> = v.iter().map(|x| x + t).collect();
            assert_eq!(Region::of_valuation(&w, 2), next, "from {r:?}");
        }
    }
}
