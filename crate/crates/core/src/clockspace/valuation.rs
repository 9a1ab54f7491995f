use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Zero};

pub type Rational = Rational64;

/// Clock values in ClockSet order (DBM index `i` is `v[i - 1]`).
pub type Valuation = Vec<Rational>;

/// Value of DBM index `i` in `v`; the reference clock reads 0.
pub fn coord(v: &[Rational], i: usize) -> Rational {
    if i == 0 {
        Rational::zero()
    } else {
        v[i - 1]
    }
}

pub fn zero_valuation(n: usize) -> Valuation {
    vec![Rational::zero(); n]
}

pub fn delayed(v: &[Rational], d: Rational) -> Valuation {
    v.iter().map(|x| x + d).collect()
}

pub fn with_resets(v: &[Rational], resets: &[usize]) -> Valuation {
    let mut out = v.to_vec();
    for &i in resets {
        out[i - 1] = Rational::zero();
    }
    out
}

fn floor(q: Rational) -> Rational {
    q.floor()
}

/// Simplest rational (smallest denominator, then smallest value) strictly
/// between `lo` and `hi`, both nonnegative with `lo < hi`.
pub fn simplest_between(lo: Rational, hi: Rational) -> Rational {
    debug_assert!(lo < hi && lo >= Rational::zero());
    let fl = floor(lo);
    if fl + Rational::one() < hi {
        return fl + Rational::one();
    }
    let one = Rational::one();
    if lo == fl {
        // (fl, hi) with hi ≤ fl + 1: the answer is fl + 1/q for the least q.
        let q = floor(one / (hi - fl)) + one;
        return fl + one / q;
    }
    // Continued-fraction step: 1/(x - fl) maps (lo, hi) onto a flipped interval.
    fl + one / simplest_between(one / (hi - fl), one / (lo - fl))
}

/// Simplest rational in an interval whose ends may be open or closed and
/// whose upper end may be absent (`+∞`). Returns `None` if it is empty.
pub fn simplest_in(
    lo: Rational,
    lo_strict: bool,
    hi: Option<Rational>,
    hi_strict: bool,
) -> Option<Rational> {
    match hi {
        None => Some(if lo_strict || !lo.is_integer() {
            floor(lo) + Rational::one()
        } else {
            lo
        }),
        Some(hi) => {
            if hi < lo || (hi == lo && (lo_strict || hi_strict)) {
                return None;
            }
            if hi == lo {
                return Some(lo);
            }
            let mut best = simplest_between(lo, hi);
            for (end, strict) in [(lo, lo_strict), (hi, hi_strict)] {
                if !strict && simpler(end, best) {
                    best = end;
                }
            }
            Some(best)
        }
    }
}

fn simpler(a: Rational, b: Rational) -> bool {
    (a.denom(), a) < (b.denom(), b)
}

/// Least common multiple of the denominators of `qs` (1 if empty).
pub fn common_denominator<'a>(qs: impl IntoIterator<Item = &'a Rational>) -> i64 {
    qs.into_iter().fold(1i64, |acc, q| acc.lcm(q.denom()))
}

pub fn format_rational(q: Rational) -> String {
    if q.is_integer() {
        q.to_integer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `3`, `3/2` or `1.5`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().ok()?;
        let d: i64 = d.trim().parse().ok()?;
        if d == 0 {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    if let Some((w, f)) = s.split_once('.') {
        if f.is_empty() || !f.bytes().all(|b| b.is_ascii_digit()) || f.len() > 12 {
            return None;
        }
        let neg = w.starts_with('-');
        let w: i64 = if w.is_empty() || w == "-" { 0 } else { w.parse().ok()? };
        let scale = 10i64.pow(f.len() as u32);
        let frac: i64 = f.parse().ok()?;
        let mag = w.abs() * scale + frac;
        return Some(Rational::new(if neg { -mag } else { mag }, scale));
    }
    s.parse::<i64>().ok().map(Rational::from_integer)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn simplest_between_examples() {
        assert_eq!(simplest_between(q(0, 1), q(1, 1)), q(1, 2));
        assert_eq!(simplest_between(q(1, 1), q(5, 2)), q(2, 1));
        assert_eq!(simplest_between(q(1, 3), q(1, 2)), q(2, 5));
        assert_eq!(simplest_between(q(2, 1), q(7, 3)), q(9, 4));
        assert_eq!(simplest_between(q(3, 2), q(2, 1)), q(5, 3));
        assert_eq!(simplest_between(q(1, 2), q(1, 1)), q(2, 3));
    }

    #[test]
    fn simplest_between_is_inside_and_minimal() {
        let grid: Vec<Rational> = (1..=8)
            .flat_map(|d| (0..=3 * d).map(move |n| q(n, d)))
            .collect();
        for &a in &grid {
            for &b in &grid {
                if a >= b {
                    continue;
                }
                let s = simplest_between(a, b);
                assert!(a < s && s < b, "{a} {b} {s}");
                for &c in &grid {
                    if a < c && c < b {
                        assert!(c.denom() >= s.denom(), "{a} {b}: {c} beats {s}");
                    }
                }
            }
        }
    }

    #[test]
    fn simplest_in_closed_ends() {
        assert_eq!(simplest_in(q(1, 2), false, Some(q(2, 3)), true), Some(q(1, 2)));
        assert_eq!(simplest_in(q(1, 1), true, None, false), Some(q(2, 1)));
        assert_eq!(simplest_in(q(3, 2), false, None, false), Some(q(2, 1)));
        assert_eq!(simplest_in(q(2, 1), false, Some(q(2, 1)), false), Some(q(2, 1)));
        assert_eq!(simplest_in(q(2, 1), true, Some(q(2, 1)), false), None);
    }

    #[test]
    fn rational_text() {
        assert_eq!(parse_rational("1.5"), Some(q(3, 2)));
        assert_eq!(parse_rational("3/2"), Some(q(3, 2)));
        assert_eq!(parse_rational("4"), Some(q(4, 1)));
        assert_eq!(parse_rational("x"), None);
        assert_eq!(format_rational(q(6, 4)), "3/2");
        assert_eq!(format_rational(q(4, 2)), "2");
    }
}
