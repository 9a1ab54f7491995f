//! The bundled conveyor suite: specification, test cases, implementations.

use std::sync::OnceLock;

use tiotest_core::clockspace::Rational;
use tiotest_core::exec::{exhaustiveness_tp, ImplModel, InputCompletion, TestCase};
use tiotest_core::fixtures::{conveyor_dp, conveyor_dspec, conveyor_impl, conveyor_spec, mutants, ship2_tp};
use tiotest_core::model::Automaton;
use tiotest_core::pipeline::{synthesize_test_case, PipelineOptions};
use tiotest_core::semantics::DEFAULT_HORIZON;

pub struct Suite {
    pub spec: Automaton,
    pub ship2: TestCase,
    /// Conformant implementation first, then the mutants.
    pub impls: Vec<ImplModel>,
}

/// Built once per test binary.
pub fn conveyor_suite() -> &'static Suite {
    static SUITE: OnceLock<Suite> = OnceLock::new();
    SUITE.get_or_init(build_suite)
}

fn build_suite() -> Suite {
    let spec = conveyor_spec();
    let opts = PipelineOptions { dp: Some(conveyor_dp()), ..PipelineOptions::default() };
    let ship2 = synthesize_test_case(&spec, &ship2_tp(), &opts).expect("bundled suite synthesizes").test_case("ship2");
    let mut impls = Vec::new();
    for a in std::iter::once(conveyor_impl()).chain(mutants()) {
        let mut imp = ImplModel::from_automaton(a, InputCompletion::AbsorbSelfLoop).unwrap();
        imp.check_against(&spec, DEFAULT_HORIZON).unwrap();
        impls.push(imp);
    }
    Suite { spec, ship2, impls }
}

/// Per mutant: the spec trace `σ · δ · b` whose test purpose exposes it.
pub const EXHAUSTIVE: [(&str, &str, i64, &str); 3] =
    [("end2_early", "0 · ship2", 1, "end2"), ("waste_late", "", 3, "waste"), ("past_late", "", 6, "past")];

pub fn exhaustive_case(sigma: &str, delta: i64, b: &str) -> TestCase {
    let dspec = conveyor_dspec();
    let tp = exhaustiveness_tp(&dspec, &sigma.parse().unwrap(), Rational::from_integer(delta), b).unwrap();
    let name = format!("exh[{sigma} · {delta} · {b}]");
    synthesize_test_case(&dspec, &tp, &PipelineOptions::default()).expect("purpose is satisfiable").test_case(name)
}
