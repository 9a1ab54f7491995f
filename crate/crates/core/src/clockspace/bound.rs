use std::fmt;

/// Upper bound `≺ c` on a clock difference, packed as `c << 1 | weak`.
///
/// The packing makes the natural integer order coincide with the bound
/// order: `(n, <) < (n, ≤) < (n + 1, <)`, and `i64::MAX` stands for `+∞`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bound(i64);

impl Bound {
    pub const INFINITY: Bound = Bound(i64::MAX);
    pub const LE_ZERO: Bound = Bound(1);
    pub const LT_ZERO: Bound = Bound(0);

    pub fn weak(c: i64) -> Bound {
        Bound((c << 1) | 1)
    }

    pub fn strict(c: i64) -> Bound {
        Bound(c << 1)
    }

    pub fn new(c: i64, strict: bool) -> Bound {
        if strict {
            Bound::strict(c)
        } else {
            Bound::weak(c)
        }
    }

    pub fn is_infinite(self) -> bool {
        self.0 == i64::MAX
    }

    /// The constant `c`, or `None` for `+∞`.
    pub fn constant(self) -> Option<i64> {
        if self.is_infinite() {
            None
        } else {
            Some(self.0 >> 1)
        }
    }

    pub fn is_strict(self) -> bool {
        !self.is_infinite() && self.0 & 1 == 0
    }

    pub fn raw(self) -> i64 {
        self.0
    }

    /// Path composition: constants add, strict if either side is strict.
    #[must_use]
    pub fn add(self, other: Bound) -> Bound {
        if self.is_infinite() || other.is_infinite() {
            return Bound::INFINITY;
        }
        Bound(self.0 + other.0 - ((self.0 | other.0) & 1))
    }

    /// Bound of the complementary half-space read in the opposite direction:
    /// `¬(xi − xj ≺ c)` is `xj − xi ≺' −c` with flipped strictness.
    ///
    /// Panics on `+∞`, whose complement is empty.
    #[must_use]
    pub fn negate(self) -> Bound {
        assert!(!self.is_infinite(), "complement of an unbounded constraint");
        Bound(1 - self.0)
    }
}

impl fmt::Debug for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.constant() {
            None => write!(f, "<∞"),
            Some(c) if self.is_strict() => write!(f, "<{c}"),
            Some(c) => write!(f, "≤{c}"),
        }
    }
}
