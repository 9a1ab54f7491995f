mod common;

use common::suite::{conveyor_suite, exhaustive_case};
use tiotest_core::clockspace::Rational;
use tiotest_core::exec::{
    campaign, exhaustiveness_tp, make_impl, run_test, Budget, CampaignConfig, ExecError, ImplModel, InputCompletion,
    Mutation, RunConfig, Verdict,
};
use tiotest_core::fixtures::{conveyor_dspec, conveyor_spec};
use tiotest_core::model::{product, validate_tp, Automaton};
use tiotest_core::semantics::{after, initial_config, step, trace_of, Config, Run};

fn cfg(seed: u64) -> RunConfig {
    RunConfig { seed, ..RunConfig::default() }
}

fn replay(a: &Automaton, r: &Run) -> Config {
    let mut c = r.start.clone();
    assert_eq!(c, initial_config(a));
    for (k, s) in r.steps.iter().enumerate() {
        c = step(a, &c, s).unwrap_or_else(|e| panic!("{}: step {k} {s:?}: {e}", a.name));
    }
    c
}

#[test]
fn same_seed_same_behaviour() {
    let s = conveyor_suite();
    let case = exhaustive_case("0 · ship2", 1, "end2");
    for imp in &s.impls {
        for seed in [1, 2, 3] {
            let (v1, b1) = run_test(&case.game, &case.strategy, imp, &cfg(seed)).unwrap();
            let (v2, b2) = run_test(&case.game, &case.strategy, imp, &cfg(seed)).unwrap();
            assert_eq!(v1, v2);
            assert_eq!(b1.log(), b2.log());
            assert_eq!(b1.trace, b2.trace);
        }
    }
}

#[test]
fn behaviours_replay_to_their_verdicts() {
    let s = conveyor_suite();
    let cases = [s.ship2.clone(), exhaustive_case("0 · ship2", 1, "end2"), exhaustive_case("", 6, "past")];
    for case in &cases {
        let tester = &case.game.automaton;
        for imp in &s.impls {
            for seed in 1..=10 {
                let (v, b) = run_test(&case.game, &case.strategy, imp, &cfg(seed)).unwrap();
                let end = replay(tester, &b.tester);
                replay(&imp.automaton, &b.implementation);
                assert_eq!(trace_of(tester, &b.tester), b.trace, "{} {}", case.name, imp.name());
                assert_eq!(trace_of(&imp.automaton, &b.implementation), b.trace);
                match v {
                    Verdict::Pass => assert!(case.game.vpass.contains(end.loc, &end.valuation)),
                    Verdict::Fail => assert!(case.game.vfail.contains(end.loc, &end.valuation)),
                    Verdict::Running => {}
                }
                if v != Verdict::Running {
                    let last = b.events.last().unwrap();
                    assert_eq!(last.to_string(), format!("t={} side=tester kind=verdict detail={v}", last.time));
                }
                assert!(b.log().lines().all(|l| l.starts_with("t=") && l.contains(" side=") && l.contains(" kind=")));
            }
        }
    }
}

#[test]
fn scheduler_respects_the_fairness_bound() {
    let s = conveyor_suite();
    let case = exhaustive_case("", 3, "waste");
    for bound in [1, 2, 3, 5] {
        for seed in 1..=10 {
            let run = RunConfig { fairness_bound: bound, seed, ..RunConfig::default() };
            let (_, b) = run_test(&case.game, &case.strategy, &s.impls[0], &run).unwrap();
            assert!(b.max_starvation <= bound, "bound {bound}: starvation {}", b.max_starvation);
        }
    }
}

#[test]
fn empty_budget_is_running_with_an_empty_behaviour() {
    let s = conveyor_suite();
    let run = RunConfig { budget: Budget { restarts: 0, steps: 0 }, ..RunConfig::default() };
    let (v, b) = run_test(&s.ship2.game, &s.ship2.strategy, &s.impls[0], &run).unwrap();
    assert_eq!(v, Verdict::Running);
    assert!(b.trace.is_empty() && b.tester.steps.is_empty() && b.implementation.steps.is_empty());
}

#[test]
fn make_impl_without_mutations_is_conformant() {
    let imp = make_impl(&conveyor_dspec(), &[], InputCompletion::AbsorbSelfLoop).unwrap();
    assert_eq!(imp.conformant(), Some(true));
    let absorbing = make_impl(&conveyor_spec(), &[], InputCompletion::AbsorbSelfLoop).unwrap();
    assert_eq!(absorbing.conformant(), Some(false));
    let err = make_impl(&conveyor_spec(), &[], InputCompletion::Explicit).unwrap_err();
    assert!(matches!(err, ExecError::NotInputComplete { .. }), "{err}");
}

fn late_end2() -> Mutation {
    Mutation::AddEdge {
        src: "D2".into(),
        guard: "x == 2".into(),
        action: "end2".into(),
        resets: vec!["x".into()],
        dst: "D2".into(),
    }
}

#[test]
fn added_output_is_non_conformant() {
    let imp = make_impl(&conveyor_dspec(), &[late_end2()], InputCompletion::AbsorbSelfLoop).unwrap();
    assert_eq!(imp.conformant(), Some(false));
    let v = imp.violation.clone().flatten().unwrap().to_string();
    assert!(v.contains("end2!"), "{v}");
    assert_eq!(imp.mutations, vec![late_end2()]);
}

#[test]
fn added_output_is_caught_by_its_exhaustiveness_purpose() {
    let imp = make_impl(&conveyor_dspec(), &[late_end2()], InputCompletion::AbsorbSelfLoop).unwrap();
    let case = exhaustive_case("0 · ship2", 1, "end2");
    let fails = (1..=20)
        .filter(|&seed| run_test(&case.game, &case.strategy, &imp, &cfg(seed)).unwrap().0 == Verdict::Fail)
        .count();
    assert!(fails > 0);
}

#[test]
fn blocking_mutation_is_rejected() {
    let spec = conveyor_spec();
    let end1 = spec.edges.iter().position(|e| spec.actions[e.action].name == "end1").unwrap();
    let muts = [
        Mutation::SetInvariant { location: "D1".into(), invariant: "x <= 1".into() },
        Mutation::DeleteEdge { edge: end1 },
    ];
    let err = make_impl(&spec, &muts, InputCompletion::AbsorbSelfLoop).unwrap_err();
    assert!(matches!(err, ExecError::Blocking(_)), "{err}");
    let bad = [Mutation::DeleteEdge { edge: 99 }];
    assert!(matches!(make_impl(&spec, &bad, InputCompletion::AbsorbSelfLoop), Err(ExecError::Mutation(_))));
}

#[test]
fn exhaustiveness_purpose_accepts_its_trace() {
    let spec = conveyor_spec();
    let tp = exhaustiveness_tp(&spec, &"".parse().unwrap(), Rational::from_integer(3), "waste").unwrap();
    let r = validate_tp(&tp, &spec);
    assert!(r.is_ok(), "{r}");
    let p = product(&spec, &tp).unwrap();
    let hit = |sigma: &str| {
        let s = after(&p, &sigma.parse().unwrap());
        p.accept.iter().any(|&l| !s.states.get(l).is_empty())
    };
    assert!(hit("3 · waste"));
    assert!(!hit("2 · waste"));
    assert!(!hit("3 · past"));
}

#[test]
fn exhaustiveness_purpose_rejects_bad_requests() {
    let spec = conveyor_spec();
    let none = "".parse().unwrap();
    for (delta, b) in [(4, "waste"), (1, "ship1"), (1, "nope")] {
        let r = exhaustiveness_tp(&spec, &none, Rational::from_integer(delta), b);
        assert!(matches!(r, Err(ExecError::Purpose(_))), "{delta} {b}");
    }
    assert!(exhaustiveness_tp(&spec, &none, Rational::new(1, 2), "waste").is_err());
}

#[test]
fn campaign_flags() {
    let s = conveyor_suite();
    let cases = vec![s.ship2.clone(), exhaustive_case("", 6, "past")];
    let base = CampaignConfig { seeds: (1..=5).collect(), ..CampaignConfig::default() };

    let empty = campaign(&s.spec, &cases, &[], &base).unwrap();
    assert!(empty.rows.is_empty() && empty.holds());

    let r = campaign(&s.spec, &cases, &s.impls, &base).unwrap();
    assert!(r.holds(), "{r}");
    assert_eq!(r.rows.len(), 2 * s.impls.len() * 5);
    assert_eq!(r.json_lines().lines().count(), r.rows.len());
    assert_eq!(r.json_lines(), campaign(&s.spec, &cases, &s.impls, &base).unwrap().json_lines());

    let forced = CampaignConfig { force_fail: true, ..base.clone() };
    let r = campaign(&s.spec, &cases[..1], &s.impls[..1], &forced).unwrap();
    assert_eq!(r.violated(), Some("soundness"));

    let impossible = CampaignConfig { expect_fail: vec![(cases[1].name.clone(), "conveyor_impl".into())], ..base };
    let r = campaign(&s.spec, &cases[1..], &s.impls[..1], &impossible).unwrap();
    assert_eq!(r.violated(), Some("exhaustiveness"));
}

#[test]
fn unchecked_implementation_still_runs() {
    let s = conveyor_suite();
    let imp = ImplModel::from_automaton(s.impls[1].automaton.clone(), InputCompletion::Explicit).unwrap();
    assert_eq!(imp.conformant(), None);
    let (v, _) = run_test(&s.ship2.game, &s.ship2.strategy, &imp, &cfg(1)).unwrap();
    assert_ne!(v, Verdict::Running);
}
