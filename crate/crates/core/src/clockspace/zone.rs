use std::fmt;

use num_traits::Zero;

use super::constraint::{Atom, Rel};
use super::valuation::{coord, simplest_in, Rational, Valuation};
use super::{Bound, ClockSet};

/// Canonical, non-empty difference-bound matrix. Entry `(i, j)` bounds
/// `x_i − x_j`; index 0 is the reference clock.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Zone {
    dim: usize,
    m: Vec<Bound>,
}

impl Zone {
    /// All nonnegative valuations.
    pub fn universe(dim: usize) -> Zone {
        let mut m = vec![Bound::INFINITY; dim * dim];
        for j in 0..dim {
            m[j] = Bound::LE_ZERO;
            m[j * dim + j] = Bound::LE_ZERO;
        }
        Zone { dim, m }
    }

    /// The single valuation with every clock at 0.
    pub fn zero(dim: usize) -> Zone {
        Zone { dim, m: vec![Bound::LE_ZERO; dim * dim] }
    }

    pub fn from_atoms(dim: usize, atoms: &[Atom]) -> Option<Zone> {
        let mut z = Zone::universe(dim);
        for a in atoms {
            for (i, j, b) in a.entries() {
                if !z.constrain(i, j, b) {
                    return None;
                }
            }
        }
        Some(z)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Bound {
        self.m[i * self.dim + j]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, b: Bound) {
        self.m[i * self.dim + j] = b;
    }

    /// Floyd–Warshall tightening; false if the matrix denotes ∅.
    fn close(&mut self) -> bool {
        let n = self.dim;
        for k in 0..n {
            for i in 0..n {
                let ik = self.get(i, k);
                if ik.is_infinite() {
                    continue;
                }
                for j in 0..n {
                    let via = ik.add(self.get(k, j));
                    if via < self.get(i, j) {
                        self.set(i, j, via);
                    }
                }
            }
            if self.get(k, k) < Bound::LE_ZERO {
                return false;
            }
        }
        (0..n).all(|i| self.get(i, i) >= Bound::LE_ZERO)
    }

    /// Adds `x_i − x_j ≺ b` and restores canonical form in O(n²);
    /// false (with `self` left unspecified) if the result is empty.
    pub fn constrain(&mut self, i: usize, j: usize, b: Bound) -> bool {
        if b >= self.get(i, j) {
            return true;
        }
        if b.add(self.get(j, i)) < Bound::LE_ZERO {
            return false;
        }
        self.set(i, j, b);
        let n = self.dim;
        for a in 0..n {
            let ai = self.get(a, i);
            if ai.is_infinite() {
                continue;
            }
            let aib = ai.add(b);
            for c in 0..n {
                let via = aib.add(self.get(j, c));
                if via < self.get(a, c) {
                    self.set(a, c, via);
                }
            }
        }
        true
    }

    #[must_use]
    pub fn intersect(&self, other: &Zone) -> Option<Zone> {
        debug_assert_eq!(self.dim, other.dim);
        let mut z = self.clone();
        for i in 0..self.dim {
            for j in 0..self.dim {
                let b = other.get(i, j);
                if b < z.get(i, j) && !z.constrain(i, j, b) {
                    return None;
                }
            }
        }
        Some(z)
    }

    pub fn intersects(&self, other: &Zone) -> bool {
        self.intersect(other).is_some()
    }

    /// `other ⊆ self`.
    pub fn includes(&self, other: &Zone) -> bool {
        debug_assert_eq!(self.dim, other.dim);
        self.m.iter().zip(&other.m).all(|(a, b)| b <= a)
    }

    #[must_use]
    pub fn up(&self) -> Zone {
        let mut z = self.clone();
        for i in 1..z.dim {
            z.set(i, 0, Bound::INFINITY);
        }
        z
    }

    #[must_use]
    pub fn down(&self) -> Zone {
        let mut z = self.clone();
        for i in 1..z.dim {
            z.set(0, i, Bound::LE_ZERO);
        }
        let ok = z.close();
        debug_assert!(ok);
        z
    }

    #[must_use]
    pub fn reset(&self, clocks: &[usize]) -> Zone {
        let mut z = self.clone();
        for &x in clocks {
            for j in 0..z.dim {
                if j != x {
                    z.set(x, j, z.get(0, j));
                    z.set(j, x, z.get(j, 0));
                }
            }
        }
        if !clocks.is_empty() {
            let ok = z.close();
            debug_assert!(ok);
        }
        z
    }

    /// Pre-image of `reset`: the named clocks become unconstrained.
    #[must_use]
    pub fn free(&self, clocks: &[usize]) -> Zone {
        let mut z = self.clone();
        for &x in clocks {
            for j in 0..z.dim {
                if j != x {
                    z.set(x, j, Bound::INFINITY);
                    z.set(j, x, z.get(j, 0));
                }
            }
            z.set(0, x, Bound::LE_ZERO);
        }
        if !clocks.is_empty() {
            let ok = z.close();
            debug_assert!(ok);
        }
        z
    }

    /// Classic extrapolation with a single maximal constant.
    #[must_use]
    pub fn extrapolate(&self, max: i64) -> Zone {
        let hi = Bound::weak(max);
        let lo = Bound::strict(-max);
        let mut z = self.clone();
        for i in 0..z.dim {
            for j in 0..z.dim {
                if i == j {
                    continue;
                }
                let b = z.get(i, j);
                if b > hi {
                    z.set(i, j, Bound::INFINITY);
                } else if b < lo {
                    z.set(i, j, lo);
                }
            }
        }
        let ok = z.close();
        debug_assert!(ok);
        z
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        debug_assert_eq!(v.len() + 1, self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i == j {
                    continue;
                }
                let b = self.get(i, j);
                if let Some(c) = b.constant() {
                    let d = coord(v, i) - coord(v, j);
                    let c = Rational::from_integer(c);
                    if d > c || (d == c && b.is_strict()) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// `self ∖ other` as pairwise-disjoint zones.
    pub fn subtract(&self, other: &Zone) -> Vec<Zone> {
        if !self.intersects(other) {
            return vec![self.clone()];
        }
        if other.includes(self) {
            return Vec::new();
        }
        let mut pieces = Vec::new();
        let mut rest = self.clone();
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i == j {
                    continue;
                }
                let b = other.get(i, j);
                if b.is_infinite() || b >= rest.get(i, j) {
                    continue;
                }
                let mut piece = rest.clone();
                if piece.constrain(j, i, b.negate()) {
                    pieces.push(piece);
                }
                if !rest.constrain(i, j, b) {
                    return pieces;
                }
            }
        }
        pieces
    }

    /// Smallest zone containing both.
    #[must_use]
    /// Multiplies every constant by `k > 0`: the image under `v ↦ k·v`.
    pub fn scale(&self, k: i64) -> Zone {
        assert!(k > 0, "scale factor must be positive");
        let m = self
            .m
            .iter()
            .map(|b| match b.constant() {
                Some(c) => Bound::new(c * k, b.is_strict()),
                None => *b,
            })
            .collect();
        Zone { dim: self.dim, m }
    }

    /// Cheap necessary condition for the closures of the two zones to
    /// meet: no pair of opposite bounds is contradictory.
    pub fn may_touch(&self, other: &Zone) -> bool {
        let n = self.dim;
        for i in 0..n {
            for j in 0..n {
                let (a, b) = (self.get(i, j), other.get(j, i));
                if let (Some(x), Some(y)) = (a.constant(), b.constant()) {
                    if x + y < 0 {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn hull(&self, other: &Zone) -> Zone {
        let m = self.m.iter().zip(&other.m).map(|(a, b)| *a.max(b)).collect();
        Zone { dim: self.dim, m }
    }

    /// Keeps the clocks at the listed DBM indices (new index `k + 1` reads
    /// old index `keep[k]`); the others are existentially projected away.
    #[must_use]
    pub fn project(&self, keep: &[usize]) -> Zone {
        let idx: Vec<usize> = std::iter::once(0).chain(keep.iter().copied()).collect();
        let dim = idx.len();
        let mut m = Vec::with_capacity(dim * dim);
        for &i in &idx {
            for &j in &idx {
                m.push(self.get(i, j));
            }
        }
        Zone { dim, m }
    }

    /// Embeds into a larger dimension; `source[k]` is the old index read by
    /// new index `k + 1`, or `None` for a fresh unconstrained clock.
    #[must_use]
    pub fn embed(&self, dim: usize, source: &[Option<usize>]) -> Zone {
        debug_assert_eq!(source.len() + 1, dim);
        let mut z = Zone::universe(dim);
        let at = |k: usize| if k == 0 { Some(0) } else { source[k - 1] };
        for i in 0..dim {
            for j in 0..dim {
                if i == j {
                    continue;
                }
                if let (Some(a), Some(b)) = (at(i), at(j)) {
                    z.set(i, j, self.get(a, b));
                }
            }
        }
        let ok = z.close();
        debug_assert!(ok);
        z
    }

    /// A valuation inside the zone, choosing the simplest rational for each
    /// clock in turn.
    pub fn sample(&self) -> Valuation {
        let n = self.dim;
        let mut r = RatDbm::from_zone(self);
        let mut v = Vec::with_capacity(n - 1);
        for i in 1..n {
            let (lo, lo_strict) = match r.get(0, i) {
                Some((c, s)) => (-c, s),
                None => (Rational::zero(), false),
            };
            let (hi, hi_strict) = match r.get(i, 0) {
                Some((c, s)) => (Some(c), s),
                None => (None, false),
            };
            let x = simplest_in(lo, lo_strict, hi, hi_strict).expect("canonical zone has a point");
            r.fix(i, x);
            v.push(x);
        }
        v
    }

    /// A small constraint set whose conjunction is this zone.
    pub fn atoms(&self) -> Vec<Atom> {
        let n = self.dim;
        let mut kept: Vec<(usize, usize)> = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && !self.get(i, j).is_infinite() && !(i == 0 && self.get(i, j) == Bound::LE_ZERO) {
                    kept.push((i, j));
                }
            }
        }
        // Try dropping diagonals before plain bounds.
        let mut order = kept.clone();
        order.sort_by_key(|&(i, j)| (i != 0 && j != 0, i, j));
        order.reverse();
        for cand in order {
            let trial: Vec<(usize, usize)> = kept.iter().copied().filter(|&e| e != cand).collect();
            let mut z = Zone::universe(n);
            for &(i, j) in &trial {
                let ok = z.constrain(i, j, self.get(i, j));
                debug_assert!(ok);
            }
            if z == *self {
                kept = trial;
            }
        }
        let mut atoms = Vec::new();
        let mut used = vec![false; kept.len()];
        for (k, &(i, j)) in kept.iter().enumerate() {
            if used[k] {
                continue;
            }
            used[k] = true;
            let b = self.get(i, j);
            let c = b.constant().expect("finite");
            let twin = kept.iter().position(|&e| e == (j, i));
            let (left, right, upper) = if i == 0 { (j, 0, false) } else { (i, j, true) };
            if let Some(t) = twin {
                let tb = self.get(j, i);
                if !b.is_strict() && !tb.is_strict() && tb.constant() == Some(-c) {
                    used[t] = true;
                    let value = if upper { c } else { -c };
                    atoms.push(Atom::diff(left, right, Rel::Eq, value));
                    continue;
                }
            }
            if upper && right == 0 && b == Bound::LE_ZERO {
                atoms.push(Atom::clock(left, Rel::Eq, 0));
            } else if upper {
                let rel = if b.is_strict() { Rel::Lt } else { Rel::Le };
                atoms.push(Atom::diff(left, right, rel, c));
            } else {
                let rel = if b.is_strict() { Rel::Gt } else { Rel::Ge };
                atoms.push(Atom::diff(left, right, rel, -c));
            }
        }
        atoms.sort_by_key(|a| (a.left, a.right, !matches!(a.rel, Rel::Ge | Rel::Gt | Rel::Eq)));
        atoms
    }

    pub fn display<'a>(&'a self, clocks: &'a ClockSet) -> impl fmt::Display + 'a {
        ZoneDisplay { zone: self, clocks }
    }
}

impl fmt::Debug for Zone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Zone[")?;
        for i in 0..self.dim {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.dim {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:?}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

struct ZoneDisplay<'a> {
    zone: &'a Zone,
    clocks: &'a ClockSet,
}

impl fmt::Display for ZoneDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let atoms = self.zone.atoms();
        if atoms.is_empty() {
            return write!(f, "true");
        }
        for (k, a) in atoms.iter().enumerate() {
            if k > 0 {
                write!(f, " && ")?;
            }
            write!(f, "{}", a.display(self.clocks))?;
        }
        Ok(())
    }
}

/// DBM over rational constants, used only to pick sample points.
struct RatDbm {
    n: usize,
    m: Vec<Option<(Rational, bool)>>,
}

impl RatDbm {
    fn from_zone(z: &Zone) -> RatDbm {
        let m = z
            .m
            .iter()
            .map(|b| b.constant().map(|c| (Rational::from_integer(c), b.is_strict())))
            .collect();
        RatDbm { n: z.dim, m }
    }

    fn get(&self, i: usize, j: usize) -> Option<(Rational, bool)> {
        self.m[i * self.n + j]
    }

    fn tighten(&mut self, i: usize, j: usize, b: (Rational, bool)) {
        let n = self.n;
        let less = |a: (Rational, bool), b: Option<(Rational, bool)>| match b {
            None => true,
            Some(b) => a.0 < b.0 || (a.0 == b.0 && a.1 && !b.1),
        };
        if !less(b, self.get(i, j)) {
            return;
        }
        self.m[i * n + j] = Some(b);
        for a in 0..n {
            let Some(ai) = self.get(a, i) else { continue };
            for c in 0..n {
                let Some(jc) = self.get(j, c) else { continue };
                let via = (ai.0 + b.0 + jc.0, ai.1 || b.1 || jc.1);
                if less(via, self.get(a, c)) {
                    self.m[a * n + c] = Some(via);
                }
            }
        }
    }

    fn fix(&mut self, i: usize, x: Rational) {
        self.tighten(i, 0, (x, false));
        self.tighten(0, i, (-x, false));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x_le(c: i64) -> Atom {
        Atom::clock(1, Rel::Le, c)
    }

    #[test]
    fn intersection_of_intervals() {
        let a = Zone::from_atoms(2, &[x_le(3)]).unwrap();
        let b = Zone::from_atoms(2, &[Atom::clock(1, Rel::Ge, 1)]).unwrap();
        let c = a.intersect(&b).unwrap();
        assert_eq!(c.get(1, 0), Bound::weak(3));
        assert_eq!(c.get(0, 1), Bound::weak(-1));
    }

    #[test]
    fn contradictory_differences_are_empty() {
        let a = Zone::from_atoms(3, &[Atom::diff(1, 2, Rel::Le, 2)]).unwrap();
        let b = Zone::from_atoms(3, &[Atom::diff(2, 1, Rel::Le, -3)]).unwrap();
        assert!(a.intersect(&b).is_none());
    }

    #[test]
    fn subtract_leaves_disjoint_cover() {
        let u = Zone::universe(2);
        let b = Zone::from_atoms(2, &[Atom::clock(1, Rel::Ge, 1), x_le(2)]).unwrap();
        let parts = u.subtract(&b);
        assert_eq!(parts.len(), 2);
        let q = |n, d| Rational::new(n, d);
        for (p, inside) in [(q(1, 2), true), (q(3, 2), false), (q(5, 2), true), (q(2, 1), false)] {
            let hits = parts.iter().filter(|z| z.contains(&[p])).count();
            assert_eq!(hits, usize::from(inside), "at {p}");
        }
    }

    #[test]
    fn sample_respects_strict_bounds() {
        let z = Zone::from_atoms(
            3,
            &[Atom::clock(1, Rel::Gt, 1), Atom::clock(1, Rel::Lt, 2), Atom::diff(2, 1, Rel::Gt, 0), Atom::clock(2, Rel::Lt, 2)],
        )
        .unwrap();
        let v = z.sample();
        assert!(z.contains(&v), "{v:?}");
    }

    #[test]
    fn display_merges_equalities() {
        let c = ClockSet::new(["x", "y"]).unwrap();
        let z = Zone::zero(3).up();
        assert_eq!(z.display(&c).to_string(), "x - y = 0");
        let w = Zone::from_atoms(3, &[Atom::clock(1, Rel::Ge, 1), x_le(3)]).unwrap();
        assert_eq!(w.display(&c).to_string(), "x >= 1 && x <= 3");
        assert_eq!(Zone::universe(3).display(&c).to_string(), "true");
    }
}
