//! Benchmark inputs shared by the criterion benches.

use tiotest_core::exec::{ImplModel, InputCompletion};
use tiotest_core::fixtures::{conveyor_dp, conveyor_impl, conveyor_spec, ship2_tp};
use tiotest_core::pipeline::{synthesize_test_case, PipelineOptions, Synthesis};

pub use tiotest_core::{clockspace, exec, game, model, semantics};

pub fn conveyor_synthesis() -> Synthesis {
    let opts = PipelineOptions { dp: Some(conveyor_dp()), ..PipelineOptions::default() };
    synthesize_test_case(&conveyor_spec(), &ship2_tp(), &opts).expect("bundled models synthesize")
}

pub fn conveyor_implementation() -> ImplModel {
    ImplModel::from_automaton(conveyor_impl(), InputCompletion::AbsorbSelfLoop).expect("bundled implementation")
}
