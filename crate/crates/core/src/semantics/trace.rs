use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::clockspace::{format_rational, parse_rational, Rational};

/// Canonical observable trace `δ0 · a1 · δ1 · … · ak · δk`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Trace {
    delays: Vec<Rational>,
    actions: Vec<String>,
}

impl Default for Trace {
    fn default() -> Self {
        Trace::empty()
    }
}

impl Trace {
    pub fn empty() -> Trace {
        Trace { delays: vec![Rational::zero()], actions: Vec::new() }
    }

    pub fn push_delay(&mut self, d: Rational) {
        *self.delays.last_mut().expect("delays never empty") += d;
    }

    pub fn push_action(&mut self, a: impl Into<String>) {
        self.actions.push(a.into());
        self.delays.push(Rational::zero());
    }

    pub fn actions(&self) -> &[String] {
        &self.actions
    }

    /// `delays()[i]` precedes `actions()[i]`; the last one trails.
    pub fn delays(&self) -> &[Rational] {
        &self.delays
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    pub fn duration(&self) -> Rational {
        self.delays.iter().sum()
    }

    /// Absolute time of each action.
    pub fn timestamps(&self) -> Vec<Rational> {
        let mut t = Rational::zero();
        let mut out = Vec::with_capacity(self.actions.len());
        for d in &self.delays[..self.actions.len()] {
            t += d;
            out.push(t);
        }
        out
    }

    /// Builds a trace from action timestamps (non-decreasing) and the end
    /// time.
    pub fn from_timestamps(events: &[(Rational, String)], end: Rational) -> Trace {
        let mut t = Trace::empty();
        let mut now = Rational::zero();
        for (at, a) in events {
            t.push_delay(*at - now);
            t.push_action(a.clone());
            now = *at;
        }
        t.push_delay(end - now);
        t
    }

    /// First `k` actions with the delay following the last of them.
    pub fn prefix(&self, k: usize) -> Trace {
        Trace { delays: self.delays[..=k].to_vec(), actions: self.actions[..k].to_vec() }
    }

    /// The same trace without its trailing delay.
    pub fn without_tail(&self) -> Trace {
        let mut t = self.clone();
        *t.delays.last_mut().expect("delays never empty") = Rational::zero();
        t
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, a) in self.actions.iter().enumerate() {
            parts.push(format_rational(self.delays[k]));
            parts.push(a.clone());
        }
        let tail = *self.delays.last().expect("delays never empty");
        if self.actions.is_empty() || !tail.is_zero() {
            parts.push(format_rational(tail));
        }
        f.write_str(&parts.join(" · "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("bad trace item {item:?} at position {position}")]
pub struct TraceParseError {
    pub position: usize,
    pub item: String,
}

impl FromStr for Trace {
    type Err = TraceParseError;

    /// Items separated by `·` or `;`; numbers are delays, names are
    /// actions (a trailing `?` or `!` is dropped).
    fn from_str(s: &str) -> Result<Trace, TraceParseError> {
        let mut t = Trace::empty();
        let s = s.trim();
        if s.is_empty() {
            return Ok(t);
        }
        for (position, raw) in s.split(['·', ';']).enumerate() {
            let item = raw.trim();
            let bad = || TraceParseError { position, item: item.to_string() };
            if item.is_empty() {
                return Err(bad());
            }
            if item.starts_with(|c: char| c.is_ascii_digit()) {
                let d = parse_rational(item).ok_or_else(bad)?;
                t.push_delay(d);
            } else {
                let name = item.trim_end_matches(['?', '!']);
                if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
                    return Err(bad());
                }
                t.push_action(name);
            }
        }
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_trace_is_zero() {
        assert_eq!(Trace::empty().to_string(), "0");
        assert_eq!("".parse::<Trace>().unwrap(), Trace::empty());
    }

    #[test]
    fn delays_accumulate() {
        let t: Trace = "1 · 1/2 · waste".parse().unwrap();
        assert_eq!(t.to_string(), "3/2 · waste");
        let u: Trace = "1.5; waste!; 0".parse().unwrap();
        assert_eq!(t, u);
    }

    #[test]
    fn consecutive_actions_get_zero_delay() {
        let t: Trace = "ship2 · end2 · 1".parse().unwrap();
        assert_eq!(t.to_string(), "0 · ship2 · 0 · end2 · 1");
        assert_eq!(t.timestamps(), vec![Rational::zero(), Rational::zero()]);
    }

    #[test]
    fn rejects_garbage() {
        assert!("1 · · a".parse::<Trace>().is_err());
        assert!("1x".parse::<Trace>().is_err());
    }
}
