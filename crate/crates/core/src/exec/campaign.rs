use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::game::{GameView, Strategy};
use crate::model::Automaton;
use crate::semantics::{after, Trace};

use super::{run_test, Budget, ExecError, ImplModel, RunConfig, Verdict};

/// A synthesized test case: test purpose, tester game and strategy.
#[derive(Clone, Debug)]
pub struct TestCase {
    pub name: String,
    pub tp: Automaton,
    pub game: GameView,
    pub strategy: Strategy,
}

#[derive(Clone, Debug)]
pub struct CampaignConfig {
    pub budget: Budget,
    pub fairness_bound: u32,
    pub seeds: Vec<u64>,
    /// `(test case, implementation)` pairs that must fail for some seed.
    pub expect_fail: Vec<(String, String)>,
    /// Turns passes on conformant implementations into failures, to check
    /// that the report notices.
    pub force_fail: bool,
}

impl Default for CampaignConfig {
    fn default() -> CampaignConfig {
        let run = RunConfig::default();
        CampaignConfig {
            budget: run.budget,
            fairness_bound: run.fairness_bound,
            seeds: (1..=20).collect(),
            expect_fail: Vec::new(),
            force_fail: false,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CampaignRow {
    pub case: String,
    pub implementation: String,
    pub seed: u64,
    pub verdict: Verdict,
    pub restarts: usize,
    pub steps: usize,
    pub witness: String,
    pub conformant: Option<bool>,
    pub in_spec: bool,
    pub accepted: bool,
    #[serde(skip)]
    pub trace: Trace,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CampaignReport {
    pub rows: Vec<CampaignRow>,
    pub soundness: bool,
    pub strictness: bool,
    pub precision: bool,
    pub exhaustiveness: bool,
    pub violations: Vec<String>,
}

impl CampaignReport {
    pub fn holds(&self) -> bool {
        self.soundness && self.strictness && self.precision && self.exhaustiveness
    }

    pub fn count(&self, v: Verdict) -> usize {
        self.rows.iter().filter(|r| r.verdict == v).count()
    }

    /// Every run ran out of budget.
    pub fn inconclusive(&self) -> bool {
        !self.rows.is_empty() && self.count(Verdict::Running) == self.rows.len()
    }

    /// The first violated property, by name.
    pub fn violated(&self) -> Option<&'static str> {
        [
            (self.soundness, "soundness"),
            (self.strictness, "strictness"),
            (self.precision, "precision"),
            (self.exhaustiveness, "exhaustiveness"),
        ]
        .into_iter()
        .find(|(ok, _)| !ok)
        .map(|(_, n)| n)
    }

    pub fn json_lines(&self) -> String {
        self.rows.iter().map(|r| serde_json::to_string(r).expect("rows serialize") + "\n").collect()
    }

    /// Per (case, implementation) verdict counts.
    pub fn summary(&self) -> BTreeMap<(String, String), [usize; 3]> {
        let mut out: BTreeMap<(String, String), [usize; 3]> = BTreeMap::new();
        for r in &self.rows {
            let c = out.entry((r.case.clone(), r.implementation.clone())).or_default();
            c[r.verdict as usize] += 1;
        }
        out
    }
}

impl fmt::Display for CampaignReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<24} {:<20} {:>5} {:>5} {:>8}", "test case", "implementation", "pass", "fail", "running")?;
        for ((case, imp), [p, fl, r]) in self.summary() {
            writeln!(f, "{case:<24} {imp:<20} {p:>5} {fl:>5} {r:>8}")?;
        }
        for (ok, name) in [
            (self.soundness, "soundness"),
            (self.strictness, "strictness"),
            (self.precision, "precision"),
            (self.exhaustiveness, "exhaustiveness"),
        ] {
            writeln!(f, "{name}: {}", if ok { "holds" } else { "VIOLATED" })?;
        }
        if self.inconclusive() {
            writeln!(f, "inconclusive budget: no run reached a verdict")?;
        }
        for v in &self.violations {
            writeln!(f, "  {v}")?;
        }
        Ok(())
    }
}

/// Runs every test case against every implementation for every seed and
/// checks the verdicts against the specification.
pub fn campaign(
    spec: &Automaton,
    cases: &[TestCase],
    impls: &[ImplModel],
    cfg: &CampaignConfig,
) -> Result<CampaignReport, ExecError> {
    let jobs: Vec<(usize, usize, u64)> = (0..cases.len())
        .flat_map(|c| (0..impls.len()).flat_map(move |i| cfg.seeds.iter().map(move |&s| (c, i, s))))
        .collect();
    let rows: Result<Vec<CampaignRow>, ExecError> = jobs
        .par_iter()
        .map(|&(c, i, seed)| {
            let (case, imp) = (&cases[c], &impls[i]);
            let run = RunConfig { budget: cfg.budget, fairness_bound: cfg.fairness_bound, seed };
            let (mut verdict, b) = run_test(&case.game, &case.strategy, imp, &run)?;
            if cfg.force_fail && verdict == Verdict::Pass && imp.conformant() == Some(true) {
                verdict = Verdict::Fail;
            }
            let in_spec = !after(spec, &b.witness).is_empty();
            let accepted = verdict == Verdict::Pass && {
                let reached = after(&case.tp, &b.witness);
                case.tp.accept.iter().any(|l| !reached.states.get(*l).is_empty())
            };
            Ok(CampaignRow {
                case: case.name.clone(),
                implementation: imp.name().to_string(),
                seed,
                verdict,
                restarts: b.restarts,
                steps: b.steps,
                witness: b.witness.to_string(),
                conformant: imp.conformant(),
                in_spec,
                accepted,
                trace: b.witness,
            })
        })
        .collect();
    let rows = rows?;
    let mut report = CampaignReport {
        soundness: true,
        strictness: true,
        precision: true,
        exhaustiveness: true,
        ..CampaignReport::default()
    };
    for r in &rows {
        let at = format!("{} on {} (seed {}): {}", r.case, r.implementation, r.seed, r.witness);
        if r.verdict == Verdict::Fail && (r.conformant == Some(true) || r.in_spec) {
            report.soundness = false;
            report.violations.push(format!("soundness: fail on a specified behaviour, {at}"));
        }
        if !r.in_spec && r.verdict != Verdict::Fail {
            report.strictness = false;
            report.violations.push(format!("strictness: unspecified behaviour without fail, {at}"));
        }
        if r.verdict == Verdict::Pass && !(r.in_spec && r.accepted) {
            report.precision = false;
            report.violations.push(format!("precision: pass outside the objective, {at}"));
        }
    }
    for (case, imp) in &cfg.expect_fail {
        let hit = rows.iter().any(|r| r.case == *case && r.implementation == *imp && r.verdict == Verdict::Fail);
        if !hit {
            report.exhaustiveness = false;
            report.violations.push(format!("exhaustiveness: {imp} never fails {case}"));
        }
    }
    report.rows = rows;
    Ok(report)
}
