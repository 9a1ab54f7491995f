use std::fmt;
use std::sync::Arc;

use super::constraint::Atom;
use super::valuation::Rational;
use super::{ClockError, ClockSet, Zone};

/// Finite union of zones over one clock set. Equality of federations is
/// semantic: use [`Federation::equals`], not structural comparison.
#[derive(Clone)]
pub struct Federation {
    clocks: Arc<ClockSet>,
    zones: Vec<Zone>,
}

impl Federation {
    pub fn empty(clocks: &Arc<ClockSet>) -> Federation {
        Federation { clocks: clocks.clone(), zones: Vec::new() }
    }

    pub fn universe(clocks: &Arc<ClockSet>) -> Federation {
        Federation::from_zone(clocks, Zone::universe(clocks.dim()))
    }

    pub fn zero(clocks: &Arc<ClockSet>) -> Federation {
        Federation::from_zone(clocks, Zone::zero(clocks.dim()))
    }

    pub fn from_zone(clocks: &Arc<ClockSet>, zone: Zone) -> Federation {
        assert_eq!(zone.dim(), clocks.dim(), "zone dimension does not match clock set");
        Federation { clocks: clocks.clone(), zones: vec![zone] }
    }

    pub fn from_zones(clocks: &Arc<ClockSet>, zones: impl IntoIterator<Item = Zone>) -> Federation {
        let mut f = Federation::empty(clocks);
        for z in zones {
            assert_eq!(z.dim(), clocks.dim(), "zone dimension does not match clock set");
            f.add_zone(z);
        }
        f
    }

    /// Conjunction of atoms; empty if unsatisfiable.
    pub fn from_atoms(clocks: &Arc<ClockSet>, atoms: &[Atom]) -> Federation {
        match Zone::from_atoms(clocks.dim(), atoms) {
            Some(z) => Federation::from_zone(clocks, z),
            None => Federation::empty(clocks),
        }
    }

    pub fn clocks(&self) -> &Arc<ClockSet> {
        &self.clocks
    }

    pub fn zones(&self) -> &[Zone] {
        &self.zones
    }

    pub fn is_empty(&self) -> bool {
        self.zones.is_empty()
    }

    pub fn same_clocks(&self, other: &Federation) -> bool {
        Arc::ptr_eq(&self.clocks, &other.clocks) || *self.clocks == *other.clocks
    }

    fn check(&self, other: &Federation) {
        assert!(
            self.same_clocks(other),
            "federations over different clock sets: {:?} vs {:?}",
            self.clocks,
            other.clocks
        );
    }

    /// Adds a zone unless it is already covered; drops zones it covers.
    fn add_zone(&mut self, z: Zone) {
        if self.zones.iter().any(|y| y.includes(&z)) {
            return;
        }
        self.zones.retain(|y| !z.includes(y));
        self.zones.push(z);
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.zones.iter().any(|z| z.contains(v))
    }

    #[must_use]
    pub fn union(&self, other: &Federation) -> Federation {
        self.check(other);
        let mut f = self.clone();
        for z in &other.zones {
            f.add_zone(z.clone());
        }
        f
    }

    #[must_use]
    pub fn intersect(&self, other: &Federation) -> Federation {
        self.check(other);
        let mut f = Federation::empty(&self.clocks);
        for a in &self.zones {
            for b in &other.zones {
                if let Some(z) = a.intersect(b) {
                    f.add_zone(z);
                }
            }
        }
        f
    }

    /// Like [`Federation::intersect`] but reports a clock-set mismatch
    /// instead of panicking.
    pub fn try_intersect(&self, other: &Federation) -> Result<Federation, ClockError> {
        if !self.same_clocks(other) {
            return Err(ClockError::Mismatch {
                left: self.clocks.names().to_vec(),
                right: other.clocks.names().to_vec(),
            });
        }
        Ok(self.intersect(other))
    }

    pub fn intersect_zone(&self, z: &Zone) -> Federation {
        let mut f = Federation::empty(&self.clocks);
        for a in &self.zones {
            if let Some(c) = a.intersect(z) {
                f.add_zone(c);
            }
        }
        f
    }

    pub fn intersects(&self, other: &Federation) -> bool {
        self.check(other);
        self.zones.iter().any(|a| other.zones.iter().any(|b| a.intersects(b)))
    }

    pub fn intersects_zone(&self, z: &Zone) -> bool {
        self.zones.iter().any(|a| a.intersects(z))
    }

    #[must_use]
    pub fn subtract(&self, other: &Federation) -> Federation {
        self.check(other);
        let mut current: Vec<Zone> = self.zones.clone();
        for b in &other.zones {
            let mut next = Vec::new();
            for a in &current {
                next.extend(a.subtract(b));
            }
            current = next;
            if current.is_empty() {
                break;
            }
        }
        Federation::from_zones(&self.clocks, current).merged()
    }

    #[must_use]
    pub fn complement(&self) -> Federation {
        Federation::universe(&self.clocks).subtract(self)
    }

    /// `self ⊆ other`.
    pub fn is_subset(&self, other: &Federation) -> bool {
        self.check(other);
        self.zones.iter().all(|z| {
            if other.zones.iter().any(|o| o.includes(z)) {
                return true;
            }
            let mut rest = vec![z.clone()];
            for o in &other.zones {
                rest = rest.iter().flat_map(|r| r.subtract(o)).collect();
                if rest.is_empty() {
                    return true;
                }
            }
            false
        })
    }

    pub fn equals(&self, other: &Federation) -> bool {
        self.is_subset(other) && other.is_subset(self)
    }

    #[must_use]
    pub fn up(&self) -> Federation {
        Federation::from_zones(&self.clocks, self.zones.iter().map(Zone::up))
    }

    #[must_use]
    pub fn down(&self) -> Federation {
        Federation::from_zones(&self.clocks, self.zones.iter().map(Zone::down))
    }

    /// Image under resetting the DBM-indexed clocks.
    #[must_use]
    pub fn reset(&self, clocks: &[usize]) -> Federation {
        Federation::from_zones(&self.clocks, self.zones.iter().map(|z| z.reset(clocks)))
    }

    /// Pre-image of [`Federation::reset`].
    #[must_use]
    pub fn free(&self, clocks: &[usize]) -> Federation {
        Federation::from_zones(&self.clocks, self.zones.iter().map(|z| z.free(clocks)))
    }

    #[must_use]
    pub fn normalize(&self, max: i64) -> Federation {
        Federation::from_zones(&self.clocks, self.zones.iter().map(|z| z.extrapolate(max)))
    }

    /// States that can let time pass into `self` while never touching
    /// `avoid` (the endpoint included).
    #[must_use]
    pub fn timed_pred(&self, avoid: &Federation) -> Federation {
        self.check(avoid);
        if avoid.is_empty() {
            return self.down();
        }
        // Exact for a convex obstacle; for a union the per-zone results
        // intersect, since each avoidance window is a prefix of the ray.
        let mut acc: Option<Federation> = None;
        for b in &avoid.zones {
            let bf = Federation::from_zone(&self.clocks, b.clone());
            let b_down = bf.down();
            let clear = self.down().subtract(&b_down);
            let before = self.intersect(&b_down).subtract(&bf).down();
            let part = clear.union(&before);
            acc = Some(match acc {
                None => part,
                Some(a) => a.intersect(&part),
            });
            if acc.as_ref().is_some_and(Federation::is_empty) {
                break;
            }
        }
        acc.expect("avoid is non-empty").merged()
    }

    /// Re-expresses the federation over `target`, which must contain every
    /// clock of `self`; the extra clocks are unconstrained.
    pub fn lift(&self, target: &Arc<ClockSet>) -> Federation {
        let source: Vec<Option<usize>> = target.names().iter().map(|n| self.clocks.index_of(n)).collect();
        for n in self.clocks.names() {
            assert!(target.contains(n), "clock {n} missing from lift target");
        }
        Federation::from_zones(target, self.zones.iter().map(|z| z.embed(target.dim(), &source)))
    }

    /// Existential projection onto `target`, whose clocks must all belong to
    /// `self`.
    pub fn project(&self, target: &Arc<ClockSet>) -> Federation {
        let keep: Vec<usize> = target
            .names()
            .iter()
            .map(|n| self.clocks.index_of(n).unwrap_or_else(|| panic!("clock {n} not in federation")))
            .collect();
        Federation::from_zones(target, self.zones.iter().map(|z| z.project(&keep)))
    }

    /// Greedily replaces pairs of zones by their hull when the hull adds no
    /// valuation; keeps federations from fragmenting across fixpoints.
    #[must_use]
    pub fn merged(mut self) -> Federation {
        let mut a = 0;
        while a < self.zones.len() {
            let mut b = a + 1;
            let mut grew = false;
            while b < self.zones.len() {
                if !self.zones[a].may_touch(&self.zones[b]) {
                    b += 1;
                    continue;
                }
                let hull = self.zones[a].hull(&self.zones[b]);
                let exact = hull
                    .subtract(&self.zones[a])
                    .iter()
                    .all(|r| r.subtract(&self.zones[b]).is_empty());
                if exact {
                    self.zones.swap_remove(b);
                    self.zones[a] = hull;
                    grew = true;
                } else {
                    b += 1;
                }
            }
            if grew {
                // The bigger zone may now subsume others or merge with
                // zones it was checked against before.
                let z = self.zones.swap_remove(a);
                self.add_zone(z);
                a = 0;
            } else {
                a += 1;
            }
        }
        self
    }

    #[must_use]
    pub fn scale(&self, k: i64) -> Federation {
        Federation::from_zones(&self.clocks, self.zones.iter().map(|z| z.scale(k)))
    }

    /// Some valuation of the federation, if any.
    pub fn sample(&self) -> Option<Vec<Rational>> {
        self.zones.first().map(Zone::sample)
    }

    /// Largest finite constant occurring in any zone.
    pub fn max_constant(&self) -> i64 {
        let dim = self.clocks.dim();
        let mut best = 0;
        for z in &self.zones {
            for i in 0..dim {
                for j in 0..dim {
                    if let Some(c) = z.get(i, j).constant() {
                        best = best.max(c.abs());
                    }
                }
            }
        }
        best
    }
}

impl fmt::Display for Federation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.zones.is_empty() {
            return write!(f, "false");
        }
        for (k, z) in self.zones.iter().enumerate() {
            if k > 0 {
                write!(f, " || ")?;
            }
            if self.zones.len() > 1 {
                write!(f, "({})", z.display(&self.clocks))?;
            } else {
                write!(f, "{}", z.display(&self.clocks))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Federation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Federation({self})")
    }
}
