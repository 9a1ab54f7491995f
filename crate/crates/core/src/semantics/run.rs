use std::fmt;

use num_traits::Zero;

use crate::clockspace::{delayed, format_rational, with_resets, zero_valuation, Federation, Rational, Valuation};
use crate::model::{ActionKind, Automaton};

use super::Trace;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Config {
    pub loc: usize,
    pub valuation: Valuation,
}

impl Config {
    pub fn display<'a>(&'a self, a: &'a Automaton) -> impl fmt::Display + 'a {
        ConfigDisplay { config: self, automaton: a }
    }
}

struct ConfigDisplay<'a> {
    config: &'a Config,
    automaton: &'a Automaton,
}

impl fmt::Display for ConfigDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = self.automaton;
        write!(f, "({}", a.locations[self.config.loc].name)?;
        for (k, v) in self.config.valuation.iter().enumerate() {
            write!(f, ", {}={}", a.clocks.name(k + 1), format_rational(*v))?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Step {
    Delay(Rational),
    /// Move along an edge, additionally resetting the listed observed
    /// clocks (DBM indices).
    Move { edge: usize, observed_resets: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Run {
    pub start: Config,
    pub steps: Vec<Step>,
}

impl Run {
    pub fn duration(&self) -> Rational {
        self.steps
            .iter()
            .map(|s| match s {
                Step::Delay(d) => *d,
                Step::Move { .. } => Rational::zero(),
            })
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StepError {
    #[error("negative delay")]
    NegativeDelay,
    #[error("delay leaves the invariant of {0}")]
    Invariant(String),
    #[error("unknown edge #{0}")]
    UnknownEdge(usize),
    #[error("edge #{0} does not leave the current location")]
    WrongSource(usize),
    #[error("guard of edge #{0} does not hold")]
    Guard(usize),
    #[error("clock {0} is not observed")]
    NotObserved(String),
    #[error("target invariant of edge #{0} does not hold")]
    TargetInvariant(usize),
}

pub fn initial_config(a: &Automaton) -> Config {
    Config { loc: a.initial, valuation: zero_valuation(a.clocks.len()) }
}

/// Times in `[0, d]` at which some clock crosses an integer, plus the
/// midpoints between consecutive ones: membership in any federation with
/// integer constants is constant between them.
fn critical_offsets(v: &[Rational], d: Rational) -> Vec<Rational> {
    let mut cuts = vec![Rational::zero(), d];
    for x in v {
        let mut t = x.floor() + Rational::from_integer(1) - x;
        if x.is_integer() {
            t = Rational::from_integer(1);
        }
        while t < d {
            cuts.push(t);
            t += Rational::from_integer(1);
        }
    }
    cuts.sort();
    cuts.dedup();
    let mut out = cuts.clone();
    for w in cuts.windows(2) {
        out.push((w[0] + w[1]) / Rational::from_integer(2));
    }
    out
}

/// Whether `v + t` stays in `inv` for every `t` in `[0, d]`.
pub fn delay_allowed(inv: &Federation, v: &[Rational], d: Rational) -> bool {
    critical_offsets(v, d).into_iter().all(|t| inv.contains(&delayed(v, t)))
}

pub fn step(a: &Automaton, c: &Config, s: &Step) -> Result<Config, StepError> {
    match s {
        Step::Delay(d) => {
            if *d < Rational::zero() {
                return Err(StepError::NegativeDelay);
            }
            let inv = &a.locations[c.loc].invariant;
            if !delay_allowed(inv, &c.valuation, *d) {
                return Err(StepError::Invariant(a.locations[c.loc].name.clone()));
            }
            Ok(Config { loc: c.loc, valuation: delayed(&c.valuation, *d) })
        }
        Step::Move { edge, observed_resets } => {
            let e = a.edges.get(*edge).ok_or(StepError::UnknownEdge(*edge))?;
            if e.src != c.loc {
                return Err(StepError::WrongSource(*edge));
            }
            if let Some(&x) = observed_resets.iter().find(|x| !a.observed.contains(x)) {
                return Err(StepError::NotObserved(a.clocks.name(x).to_string()));
            }
            if !e.guard.contains(&c.valuation) {
                return Err(StepError::Guard(*edge));
            }
            let mut resets = e.resets.clone();
            resets.extend(observed_resets);
            let v = with_resets(&c.valuation, &resets);
            if !a.locations[e.dst].invariant.contains(&v) {
                return Err(StepError::TargetInvariant(*edge));
            }
            Ok(Config { loc: e.dst, valuation: v })
        }
    }
}

/// Configurations visited by a run, starting with its first one.
pub fn replay(a: &Automaton, r: &Run) -> Result<Vec<Config>, (usize, StepError)> {
    let mut out = vec![r.start.clone()];
    for (k, s) in r.steps.iter().enumerate() {
        let next = step(a, out.last().expect("non-empty"), s).map_err(|e| (k, e))?;
        out.push(next);
    }
    Ok(out)
}

/// Edges that can fire from `c` (guard and target invariant).
pub fn enab(a: &Automaton, c: &Config) -> Vec<usize> {
    a.edges_from(c.loc)
        .filter(|(_, e)| {
            e.guard.contains(&c.valuation)
                && a.locations[e.dst].invariant.contains(&with_resets(&c.valuation, &e.resets))
        })
        .map(|(k, _)| k)
        .collect()
}

/// Observable trace of a run: delays summed, internal actions erased.
pub fn trace_of(a: &Automaton, r: &Run) -> Trace {
    let mut t = Trace::empty();
    for s in &r.steps {
        match s {
            Step::Delay(d) => t.push_delay(*d),
            Step::Move { edge, .. } => {
                let action = a.edges[*edge].action;
                if a.kind(action) != ActionKind::Internal {
                    t.push_action(a.actions[action].name.clone());
                }
            }
        }
    }
    t
}
