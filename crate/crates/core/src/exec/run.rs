use std::fmt;

use num_traits::{One, Zero};
use rand::Rng;

use crate::clockspace::{delayed, format_rational, simplest_in, Federation, Rational, Region, Zone};
use crate::game::{GameView, Move, Strategy};
use crate::model::{ActionKind, Automaton};
use crate::semantics::{initial_config, step, Config, Run, Step, Trace};

use super::scheduler::{Choice, FairScheduler};
use super::{ExecError, ImplModel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Running,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Running => "running",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub restarts: usize,
    pub steps: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub budget: Budget,
    pub fairness_bound: u32,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> RunConfig {
        RunConfig { budget: Budget { restarts: 32, steps: 2000 }, fairness_bound: 3, seed: 0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Tester,
    Impl,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EventKind {
    Delay,
    Move,
    Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Event {
    pub time: Rational,
    pub side: Side,
    pub kind: EventKind,
    pub detail: String,
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = match self.side {
            Side::Tester => "tester",
            Side::Impl => "impl",
        };
        let kind = match self.kind {
            EventKind::Delay => "delay",
            EventKind::Move => "move",
            EventKind::Verdict => "verdict",
        };
        write!(f, "t={} side={side} kind={kind} detail={}", format_rational(self.time), self.detail)
    }
}

/// The synchronized tester and implementation runs of one test execution.
#[derive(Clone, Debug)]
pub struct Behaviour {
    pub tester: Run,
    pub implementation: Run,
    /// Observable trace of the whole execution, restarts included.
    pub trace: Trace,
    /// Observable trace since the last restart.
    pub witness: Trace,
    pub events: Vec<Event>,
    pub restarts: usize,
    pub steps: usize,
    pub max_starvation: u32,
    pub forced: usize,
}

impl Behaviour {
    pub fn log(&self) -> String {
        self.events.iter().map(|e| format!("{e}\n")).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Limit {
    Unbounded,
    Upto(Rational, bool),
}

impl Limit {
    fn admits(self, d: Rational) -> bool {
        match self {
            Limit::Unbounded => true,
            Limit::Upto(h, strict) => d < h || (!strict && d == h),
        }
    }
}

/// Delays `d ≥ 0` with `v + d` in `z`, as `(lo, lo strict, hi, hi strict)`.
fn delay_interval(z: &Zone, v: &[Rational]) -> Option<(Rational, bool, Option<(Rational, bool)>)> {
    let mut lo = (Rational::zero(), false);
    let mut hi: Option<(Rational, bool)> = None;
    let n = z.dim();
    for i in 1..n {
        for j in 1..n {
            let b = z.get(i, j);
            if let Some(c) = b.constant() {
                let diff = v[i - 1] - v[j - 1];
                let c = Rational::from_integer(c);
                if diff > c || (b.is_strict() && diff == c) {
                    return None;
                }
            }
        }
        let up = z.get(i, 0);
        if let Some(c) = up.constant() {
            let h = (Rational::from_integer(c) - v[i - 1], up.is_strict());
            hi = Some(match hi {
                None => h,
                Some(old) if h.0 < old.0 || (h.0 == old.0 && h.1) => h,
                Some(old) => old,
            });
        }
        let down = z.get(0, i);
        if let Some(c) = down.constant() {
            let l = (-Rational::from_integer(c) - v[i - 1], down.is_strict());
            if l.0 > lo.0 || (l.0 == lo.0 && l.1) {
                lo = l;
            }
        }
    }
    Some((lo.0, lo.1, hi))
}

fn entry_delay(z: &Zone, v: &[Rational]) -> Option<Rational> {
    let (lo, lo_strict, hi) = delay_interval(z, v)?;
    match hi {
        None => simplest_in(lo, lo_strict, None, false),
        Some((h, hs)) => simplest_in(lo, lo_strict, Some(h), hs),
    }
}

fn max_delay(inv: &Federation, v: &[Rational]) -> Limit {
    let mut best: Option<(Rational, bool)> = None;
    for z in inv.zones() {
        if !z.contains(v) {
            continue;
        }
        match delay_interval(z, v) {
            Some((_, _, None)) => return Limit::Unbounded,
            Some((_, _, Some(h))) => {
                if best.is_none_or(|b| h.0 > b.0 || (h.0 == b.0 && !h.1)) {
                    best = Some(h);
                }
            }
            None => {}
        }
    }
    let (h, s) = best.unwrap_or((Rational::zero(), false));
    Limit::Upto(h, s)
}

/// Offsets in `[0, upto]` at which some clock of `vals` is integral, the
/// midpoints between them, and `upto` itself unless `open`.
fn offsets(vals: &[&[Rational]], upto: Rational, open: bool) -> Vec<Rational> {
    let mut cuts = vec![Rational::zero(), upto];
    for v in vals {
        for x in v.iter() {
            let mut t = if x.is_integer() { Rational::one() } else { x.ceil() - x };
            while t < upto {
                cuts.push(t);
                t += Rational::one();
            }
        }
    }
    cuts.sort();
    cuts.dedup();
    let mut out = cuts.clone();
    for w in cuts.windows(2) {
        out.push((w[0] + w[1]) / Rational::from_integer(2));
    }
    out.sort();
    out.dedup();
    if open {
        out.retain(|t| *t < upto);
    }
    out
}

struct Sim<'a> {
    g: &'a GameView,
    imp: &'a Automaton,
    tc: Config,
    ic: Config,
    now: Rational,
    b: Behaviour,
}

impl Sim<'_> {
    fn verdict(&self) -> Option<Verdict> {
        if self.g.vfail.contains(self.tc.loc, &self.tc.valuation) {
            Some(Verdict::Fail)
        } else if self.g.vpass.contains(self.tc.loc, &self.tc.valuation) {
            Some(Verdict::Pass)
        } else {
            None
        }
    }

    /// Lets `d` elapse on both sides, stopping early when the tester enters
    /// a verdict state.
    fn advance(&mut self, d: Rational, side: Side) -> Result<Option<Verdict>, ExecError> {
        if d.is_zero() {
            return Ok(None);
        }
        let mut stop = d;
        for t in offsets(&[&self.tc.valuation], d, false) {
            if t.is_zero() {
                continue;
            }
            let v = delayed(&self.tc.valuation, t);
            if self.g.vfail.contains(self.tc.loc, &v) || self.g.vpass.contains(self.tc.loc, &v) {
                stop = t;
                break;
            }
        }
        let s = Step::Delay(stop);
        self.tc = step(&self.g.automaton, &self.tc, &s).map_err(|e| ExecError::Replay(e.to_string()))?;
        self.ic = step(self.imp, &self.ic, &s).map_err(|e| ExecError::Replay(e.to_string()))?;
        self.b.tester.steps.push(s.clone());
        self.b.implementation.steps.push(s);
        self.b.trace.push_delay(stop);
        self.b.witness.push_delay(stop);
        self.now += stop;
        self.log(side, EventKind::Delay, format_rational(stop));
        Ok(self.verdict())
    }

    fn log(&mut self, side: Side, kind: EventKind, detail: String) {
        self.b.events.push(Event { time: self.now, side, kind, detail });
    }

    fn fire_tester(&mut self, edge: usize) -> Result<(), ExecError> {
        let s = Step::Move { edge, observed_resets: Vec::new() };
        self.tc = step(&self.g.automaton, &self.tc, &s).map_err(|e| ExecError::Replay(e.to_string()))?;
        self.b.tester.steps.push(s);
        Ok(())
    }

    fn fire_impl(&mut self, edge: usize) -> Result<(), ExecError> {
        let s = Step::Move { edge, observed_resets: Vec::new() };
        self.ic = step(self.imp, &self.ic, &s).map_err(|e| ExecError::Replay(e.to_string()))?;
        self.b.implementation.steps.push(s);
        Ok(())
    }

    fn observe(&mut self, name: &str, restart: bool) {
        self.b.trace.push_action(name);
        if restart {
            self.b.witness = Trace::empty();
            self.b.restarts += 1;
        } else {
            self.b.witness.push_action(name);
        }
    }

    fn impl_edges_at(&self, v: &[Rational], pick: impl Fn(usize) -> bool) -> Vec<usize> {
        let a = self.imp;
        a.edges_from(self.ic.loc)
            .filter(|(_, e)| pick(e.action) && e.guard.contains(v))
            .filter(|(_, e)| {
                let mut w = v.to_vec();
                for &r in &e.resets {
                    w[r - 1] = Rational::zero();
                }
                a.locations[e.dst].invariant.contains(&w)
            })
            .map(|(k, _)| k)
            .collect()
    }
}

/// Plays strategy `f` against `imp` until a verdict or the budget runs out.
pub fn run_test(g: &GameView, f: &Strategy, imp: &ImplModel, cfg: &RunConfig) -> Result<(Verdict, Behaviour), ExecError> {
    let ta = &g.automaton;
    let ia = &imp.automaton;
    let mut to_tester = Vec::with_capacity(ia.actions.len());
    for d in &ia.actions {
        let t = ta.action_id(&d.name);
        if t.is_none() && d.kind != ActionKind::Internal {
            return Err(ExecError::Alphabet(d.label()));
        }
        to_tester.push(t);
    }
    let mut sched = FairScheduler::new(cfg.fairness_bound, cfg.seed);
    let start_t = initial_config(ta);
    let start_i = initial_config(ia);
    let mut sim = Sim {
        g,
        imp: ia,
        tc: start_t.clone(),
        ic: start_i.clone(),
        now: Rational::zero(),
        b: Behaviour {
            tester: Run { start: start_t, steps: Vec::new() },
            implementation: Run { start: start_i, steps: Vec::new() },
            trace: Trace::empty(),
            witness: Trace::empty(),
            events: Vec::new(),
            restarts: 0,
            steps: 0,
            max_starvation: 0,
            forced: 0,
        },
    };
    let imax = ia.max_constant();
    let verdict = loop {
        if let Some(v) = sim.verdict() {
            break v;
        }
        if sim.b.steps >= cfg.budget.steps {
            break Verdict::Running;
        }
        sim.b.steps += 1;
        let here = Region::of_valuation(&sim.tc.valuation, f.max);
        let m = f.get(sim.tc.loc, &here).ok_or_else(|| ExecError::StrategyUndefined(sim.tc.display(ta).to_string()))?;
        let planned = if let Move::WaitMaximal { target } = m {
            if *target == here {
                None
            } else {
                Some(target)
            }
        } else {
            Some(m.target())
        };
        let tester_delay = match planned {
            Some(target) => entry_delay(&target.to_zone(), &sim.tc.valuation)
                .ok_or_else(|| ExecError::StrategyUndefined(sim.tc.display(ta).to_string()))?,
            None => Rational::one(),
        };
        let limit = max_delay(&ia.locations[sim.ic.loc].invariant, &sim.ic.valuation);
        let mut tester_ok = limit.admits(tester_delay);
        let mut inputs = Vec::new();
        if let (true, Move::Play { edge, .. }) = (tester_ok, m) {
            if ta.kind(ta.edges[*edge].action) == ActionKind::Restart && sim.b.restarts >= cfg.budget.restarts {
                break Verdict::Running;
            }
            let name = &ta.actions[ta.edges[*edge].action].name;
            let at = delayed(&sim.ic.valuation, tester_delay);
            inputs = sim.impl_edges_at(&at, |a| ia.actions[a].name == *name);
            if inputs.is_empty() {
                return Err(ExecError::NotInputComplete {
                    location: ia.locations[sim.ic.loc].name.clone(),
                    action: ta.actions[ta.edges[*edge].action].label(),
                });
            }
        }
        let (upto, open) = match (tester_ok, limit) {
            (true, _) => (tester_delay, false),
            (false, Limit::Upto(h, s)) => (h, s),
            (false, Limit::Unbounded) => unreachable!("an unbounded invariant admits every delay"),
        };
        let grid = offsets(&[&sim.tc.valuation, &sim.ic.valuation], upto, open);
        let mut options: Vec<(usize, Vec<Rational>)> = Vec::new();
        for (k, e) in ia.edges_from(sim.ic.loc) {
            if ia.kind(e.action).is_controllable() {
                continue;
            }
            let at: Vec<Rational> = grid
                .iter()
                .copied()
                .filter(|&t| sim.impl_edges_at(&delayed(&sim.ic.valuation, t), |_| true).contains(&k))
                .collect();
            if !at.is_empty() {
                options.push((k, at));
            }
        }
        if options.is_empty() && !tester_ok {
            // The invariant ends without any move: the tester waits up to there.
            tester_ok = matches!(limit, Limit::Upto(_, false));
            if !tester_ok {
                return Err(ExecError::Blocked(sim.ic.display(ia).to_string()));
            }
        }
        let key = Region::of_valuation(&sim.ic.valuation, imax);
        let edges: Vec<usize> = options.iter().map(|o| o.0).collect();
        let choice = sched.choose((sim.ic.loc, &key), &edges, tester_ok);
        match choice {
            Choice::Impl(k) => {
                let (edge, at) = &options[k];
                let d = at[sched.rng().random_range(0..at.len())];
                if let Some(v) = sim.advance(d, Side::Impl)? {
                    break v;
                }
                let action = ia.edges[*edge].action;
                sim.fire_impl(*edge)?;
                let label = ia.actions[action].label();
                sim.log(Side::Impl, EventKind::Move, label.clone());
                if let Some(ta_action) = to_tester[action] {
                    let te = ta
                        .edges_from(sim.tc.loc)
                        .find(|(_, e)| e.action == ta_action && e.guard.contains(&sim.tc.valuation))
                        .map(|(k, _)| k);
                    let Some(te) = te else {
                        return Err(ExecError::TesterIncomplete(format!("{label} at {}", sim.tc.display(ta))));
                    };
                    sim.fire_tester(te)?;
                    sim.observe(&ia.actions[action].name, false);
                }
            }
            Choice::Tester => {
                let d = if tester_delay <= upto { tester_delay } else { upto };
                if let Some(v) = sim.advance(d, Side::Tester)? {
                    break v;
                }
                if let (Move::Play { edge, .. }, true) = (m, d == tester_delay) {
                    let action = ta.edges[*edge].action;
                    let restart = ta.kind(action) == ActionKind::Restart;
                    let pick = inputs[sched.rng().random_range(0..inputs.len())];
                    sim.fire_tester(*edge)?;
                    sim.fire_impl(pick)?;
                    sim.log(Side::Tester, EventKind::Move, g.action_label(action));
                    sim.observe(&ta.actions[action].name, restart);
                }
            }
        }
    };
    sim.b.max_starvation = sched.max_starvation;
    sim.b.forced = sched.forced;
    sim.log(Side::Tester, EventKind::Verdict, verdict.to_string());
    Ok((verdict, sim.b))
}
