use std::fmt;

use super::valuation::{coord, Rational};
use super::{Bound, ClockSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rel {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

impl Rel {
    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Lt => "<",
            Rel::Le => "<=",
            Rel::Eq => "=",
            Rel::Ge => ">=",
            Rel::Gt => ">",
        }
    }

    pub fn holds(self, lhs: Rational, rhs: Rational) -> bool {
        match self {
            Rel::Lt => lhs < rhs,
            Rel::Le => lhs <= rhs,
            Rel::Eq => lhs == rhs,
            Rel::Ge => lhs >= rhs,
            Rel::Gt => lhs > rhs,
        }
    }
}

/// Atomic constraint `x_left − x_right ∼ c` over DBM indices; `right = 0`
/// gives the plain form `x ∼ c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Atom {
    pub left: usize,
    pub right: usize,
    pub rel: Rel,
    pub constant: i64,
}

impl Atom {
    pub fn clock(left: usize, rel: Rel, constant: i64) -> Atom {
        Atom { left, right: 0, rel, constant }
    }

    pub fn diff(left: usize, right: usize, rel: Rel, constant: i64) -> Atom {
        Atom { left, right, rel, constant }
    }

    /// The DBM entries `(i, j, bound)` this atom tightens.
    pub fn entries(&self) -> Vec<(usize, usize, Bound)> {
        let (l, r, c) = (self.left, self.right, self.constant);
        match self.rel {
            Rel::Lt => vec![(l, r, Bound::strict(c))],
            Rel::Le => vec![(l, r, Bound::weak(c))],
            Rel::Eq => vec![(l, r, Bound::weak(c)), (r, l, Bound::weak(-c))],
            Rel::Ge => vec![(r, l, Bound::weak(-c))],
            Rel::Gt => vec![(r, l, Bound::strict(-c))],
        }
    }

    pub fn holds(&self, v: &[Rational]) -> bool {
        let lhs = coord(v, self.left) - coord(v, self.right);
        self.rel.holds(lhs, Rational::from_integer(self.constant))
    }

    pub fn is_diagonal(&self) -> bool {
        self.left != 0 && self.right != 0
    }

    pub fn display<'a>(&'a self, clocks: &'a ClockSet) -> impl fmt::Display + 'a {
        AtomDisplay { atom: self, clocks }
    }
}

struct AtomDisplay<'a> {
    atom: &'a Atom,
    clocks: &'a ClockSet,
}

impl fmt::Display for AtomDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = self.atom;
        let name = |i: usize| if i == 0 { "0" } else { self.clocks.name(i) };
        if a.right == 0 {
            write!(f, "{} {} {}", name(a.left), a.rel.symbol(), a.constant)
        } else {
            write!(f, "{} - {} {} {}", name(a.left), name(a.right), a.rel.symbol(), a.constant)
        }
    }
}
