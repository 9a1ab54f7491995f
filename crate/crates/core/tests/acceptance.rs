//! One line per acceptance criterion, with its time limit.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::game_check::check_instance;
use common::laws::{check_laws, clocks, random_federation};
use common::suite::{conveyor_suite, exhaustive_case, EXHAUSTIVE};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tiotest_core::clockspace::{Federation, Region};
use tiotest_core::exec::{run_test, Budget, ImplModel, RunConfig, TestCase, Verdict};
use tiotest_core::fixtures::{conveyor_dp, conveyor_spec, ship2_tp};
use tiotest_core::game::{build_hierarchy, synthesize, GameView, Move};
use tiotest_core::model::{build_tester, check_deterministic, parse_federation, product, Automaton};
use tiotest_core::semantics::{after, bounded_trace_equiv, Trace};

type Outcome = Result<String, String>;

const PRODUCT_EDGES: [(&str, &str, &str, &str, &str); 15] = [
    ("(St,St)", "x <= 2", "tau", "x", "(So,St)"),
    ("(So,St)", "true", "waste", "x", "(Wa,Wa)"),
    ("(So,St)", "true", "tau", "x", "(Bo,St)"),
    ("(Bo,St)", "true", "ship1", "x", "(D1,St)"),
    ("(Bo,St)", "y > 5", "ship2", "x", "(D2,St)"),
    ("(Bo,St)", "y <= 5", "ship2", "x", "(D2,A)"),
    ("(Bo,St)", "x == 3", "past", "x", "(St,St)"),
    ("(D1,St)", "x == 1", "end1", "x", "(D1,St)"),
    ("(D2,St)", "x == 1", "end2", "x", "(D2,St)"),
    ("(D2,A)", "x == 1", "end2", "x", "(D2,A)"),
    ("(D1,St)", "true", "zeta", "x y", "(St,St)"),
    ("(D2,St)", "true", "zeta", "x y", "(St,St)"),
    ("(D2,A)", "true", "zeta", "x y", "(St,St)"),
    ("(Wa,Wa)", "x == 1", "tau", "x", "(Wa,Wa)"),
    ("(Wa,Wa)", "true", "zeta", "x y", "(St,St)"),
];

const PRODUCT_INVARIANTS: [(&str, &str); 7] = [
    ("(St,St)", "x <= 2"),
    ("(So,St)", "x <= 1"),
    ("(Bo,St)", "x <= 3"),
    ("(D1,St)", "true"),
    ("(D2,St)", "true"),
    ("(D2,A)", "true"),
    ("(Wa,Wa)", "x <= 1"),
];

fn fed(a: &Automaton, text: &str) -> Federation {
    parse_federation(&a.clocks, 0, 0, text).expect("valid guard")
}

fn product_reconstruction() -> Outcome {
    let p = product(&conveyor_spec(), &ship2_tp()).map_err(|e| e.to_string())?;
    if p.locations.len() != 7 {
        return Err(format!("{} locations", p.locations.len()));
    }
    let accept: Vec<&str> = p.accept.iter().map(|&l| p.locations[l].name.as_str()).collect();
    if accept != ["(D2,A)"] {
        return Err(format!("accepting locations {accept:?}"));
    }
    for (name, inv) in PRODUCT_INVARIANTS {
        let l = p.location_id(name).ok_or(format!("missing location {name}"))?;
        if !p.locations[l].invariant.equals(&fed(&p, inv)) {
            return Err(format!("invariant of {name}"));
        }
    }
    if p.edges.len() != PRODUCT_EDGES.len() {
        return Err(format!("{} edges, expected {}", p.edges.len(), PRODUCT_EDGES.len()));
    }
    let mut used = BTreeSet::new();
    for (src, guard, action, resets, dst) in PRODUCT_EDGES {
        let resets: BTreeSet<&str> = resets.split_whitespace().collect();
        let hit = p.edges.iter().enumerate().find(|(k, e)| {
            !used.contains(k)
                && p.locations[e.src].name == src
                && p.locations[e.dst].name == dst
                && p.actions[e.action].name == action
                && e.resets.iter().map(|&c| p.clocks.name(c)).collect::<BTreeSet<_>>() == resets
                && e.guard.equals(&fed(&p, guard))
        });
        match hit {
            Some((k, _)) => {
                used.insert(k);
            }
            None => return Err(format!("no edge {src} -- {guard} / {action} -> {dst}")),
        }
    }
    Ok("7 locations, accept {(D2,A)}, 15/15 edges matched".into())
}

fn dp_contract() -> Outcome {
    let p = product(&conveyor_spec(), &ship2_tp()).map_err(|e| e.to_string())?;
    let dp = conveyor_dp();
    if !check_deterministic(&dp).is_deterministic() {
        return Err("deterministic product rejected".into());
    }
    if check_deterministic(&p).is_deterministic() {
        return Err("product with internal moves accepted as deterministic".into());
    }
    let eq = bounded_trace_equiv(&p, &dp, 8).map_err(|e| e.to_string())?;
    if !eq.equivalent() {
        return Err(eq.to_string());
    }
    Ok(format!("determinism as expected; horizon 8 {eq}"))
}

fn tester_guards() -> Outcome {
    let t = build_tester(&conveyor_dp()).map_err(|e| e.to_string())?;
    let a = &t.automaton;
    let st = a.location_id("St").ok_or("no St")?;
    let fail = t.fail_location();
    for (action, want) in [("waste", "x > 3"), ("past", "x < 3 || x > 6"), ("end1", "true"), ("end2", "true")] {
        let act = a.action_id(action).ok_or("missing action")?;
        let mut got = Federation::empty(&a.clocks);
        for (_, e) in a.edges_from(st).filter(|(_, e)| e.action == act && e.dst == fail) {
            got = got.union(&e.guard);
        }
        if !got.equals(&fed(a, want)) {
            return Err(format!("{action}! fails on {}, expected {want}", got));
        }
    }
    Ok("St fail guards: waste! x>3, past! x<3 || x>6, end1!/end2! everywhere".into())
}

fn strategy_regression() -> Outcome {
    let t = build_tester(&conveyor_dp()).map_err(|e| e.to_string())?;
    let g = GameView::new(&t);
    let m = build_hierarchy(&g);
    let f = synthesize(&g, &m).map_err(|e| e.to_string())?;
    let a = &g.automaton;
    let name = |l: usize| a.locations[l].name.as_str();
    let zero = Region::zero(a.clocks.len(), f.max);
    let mut counts = [0usize; 3];
    for ((l, r), mv) in &f.moves {
        match name(*l) {
            "(D2,A)" => {
                if !matches!(mv, Move::WaitMaximal { .. }) {
                    return Err(format!("(D2,A) {}: {}", r.display(&a.clocks), f.describe(r, mv)));
                }
                counts[0] += 1;
            }
            "(D1,St)" | "(D2,St)" | "Wa" => {
                let ok = matches!(mv, Move::Play { target, edge } if target == r && a.actions[a.edges[*edge].action].name == "zeta");
                if !ok {
                    return Err(format!("{} {}: {}", name(*l), r.display(&a.clocks), f.describe(r, mv)));
                }
                counts[1] += 1;
            }
            "St" if *r == zero => {
                if f.describe(r, mv) != "play(0, ship2?)" {
                    return Err(format!("initial St: {}", f.describe(r, mv)));
                }
                counts[2] += 1;
            }
            _ => {}
        }
    }
    if counts.contains(&0) {
        return Err(format!("regions missing from the strategy: {counts:?}"));
    }
    Ok(format!(
        "init rank {}; wait-max in {} (D2,A) regions, play(0, zeta) in {} restart regions, play(0, ship2?) at St",
        m.init_rank, counts[0], counts[1]
    ))
}

fn oracle_equivalence() -> Outcome {
    let mut sets = 0;
    for seed in 0..200 {
        sets += check_instance(seed)?;
    }
    Ok(format!("200 instances, {sets} sets equal to the region oracle"))
}

struct Runs {
    pass: Vec<(TestCase, Trace)>,
}

fn runs(case: &TestCase, imp: &ImplModel, seeds: std::ops::RangeInclusive<u64>, runs: &mut Runs) -> Result<[usize; 3], String> {
    let mut counts = [0; 3];
    for seed in seeds {
        let cfg = RunConfig { budget: Budget { restarts: 32, steps: 5000 }, fairness_bound: 3, seed };
        let (v, b) = run_test(&case.game, &case.strategy, imp, &cfg).map_err(|e| e.to_string())?;
        counts[v as usize] += 1;
        if v == Verdict::Pass {
            runs.pass.push((case.clone(), b.witness));
        }
    }
    Ok(counts)
}

fn soundness(runs_log: &mut Runs) -> Outcome {
    let s = conveyor_suite();
    if s.impls[0].conformant() != Some(true) {
        return Err(format!("{} is not tioco-conformant", s.impls[0].name()));
    }
    let c = runs(&s.ship2, &s.impls[0], 1..=100, runs_log)?;
    if c[1] > 0 {
        return Err(format!("{} Fail verdicts on the conformant implementation", c[1]));
    }
    Ok(format!("conformant implementation, 100 seeds: {} pass, 0 fail, {} running", c[0], c[2]))
}

fn winning(runs_log: &mut Runs) -> Outcome {
    let s = conveyor_suite();
    let mut parts = Vec::new();
    for imp in &s.impls {
        let c = runs(&s.ship2, imp, 1..=100, runs_log)?;
        if c[2] > 0 {
            return Err(format!("{}: {} runs without verdict", imp.name(), c[2]));
        }
        parts.push(format!("{} {}P/{}F", imp.name(), c[0], c[1]));
    }
    Ok(format!("no running verdicts: {}", parts.join(", ")))
}

fn exhaustiveness(runs_log: &mut Runs) -> Outcome {
    let s = conveyor_suite();
    let mut parts = Vec::new();
    for (mutant, sigma, delta, b) in EXHAUSTIVE {
        let case = exhaustive_case(sigma, delta, b);
        let imp = s.impls.iter().find(|i| i.name() == mutant).ok_or("missing mutant")?;
        let c = runs(&case, imp, 1..=20, runs_log)?;
        if c[1] == 0 {
            return Err(format!("{mutant} never fails {}", case.name));
        }
        parts.push(format!("{mutant} fails {}/20", c[1]));
    }
    Ok(parts.join(", "))
}

fn precision(runs_log: &Runs) -> Outcome {
    let spec = conveyor_spec();
    for (case, sigma) in &runs_log.pass {
        if after(&spec, sigma).is_empty() {
            return Err(format!("pass on {sigma}, not a trace of the specification"));
        }
        let reached = after(&case.tp, sigma);
        if case.tp.accept.iter().all(|&l| reached.states.get(l).is_empty()) {
            return Err(format!("pass on {sigma}, outside the objective of {}", case.name));
        }
    }
    if runs_log.pass.is_empty() {
        return Err("no pass behaviour collected".into());
    }
    Ok(format!("{} pass behaviours: all specified and accepted", runs_log.pass.len()))
}

fn clock_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for k in 0..1000 {
        let n = rng.random_range(1..=3);
        let m = rng.random_range(1..=4);
        let c = clocks(n);
        let a = random_federation(&mut rng, &c, m);
        let b = random_federation(&mut rng, &c, m);
        check_laws(&a, &b, m).map_err(|law| format!("federation pair {k}: {law}"))?;
    }
    Ok("1000 federation pairs: complement, De Morgan, closures, normalize, grid oracle".into())
}

fn main() -> ExitCode {
    let mut log = Runs { pass: Vec::new() };
    let mut failed = 0;
    let mut report = |id: usize, name: &str, limit: Duration, f: &mut dyn FnMut() -> Outcome| {
        let t0 = Instant::now();
        let outcome = f();
        let took = t0.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if took <= limit => (true, d),
            Ok(d) => (false, format!("{d}; too slow")),
            Err(e) => (false, e),
        };
        if !ok {
            failed += 1;
        }
        let status = if ok { "PASS" } else { "FAIL" };
        println!("criterion {id:>2} {status} {name}: {detail} [{:.2}s, limit {}s]", took.as_secs_f64(), limit.as_secs());
    };
    let secs = Duration::from_secs;
    report(1, "product reconstruction", secs(1), &mut product_reconstruction);
    report(2, "deterministic product contract", secs(10), &mut dp_contract);
    report(3, "tester fail guards", secs(1), &mut tester_guards);
    report(4, "strategy regression", secs(10), &mut strategy_regression);
    report(5, "symbolic game vs region oracle", secs(300), &mut oracle_equivalence);
    report(6, "soundness", secs(60), &mut || soundness(&mut log));
    report(7, "winning under fairness", secs(120), &mut || winning(&mut log));
    report(8, "exhaustiveness", secs(120), &mut || exhaustiveness(&mut log));
    report(9, "precision", secs(60), &mut || precision(&log));
    report(10, "clock algebra laws", secs(60), &mut clock_laws);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
