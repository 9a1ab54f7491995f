//! End-to-end synthesis: validation, product, determinism, tester, game
//! solving and strategy extraction.

use crate::exec::TestCase;
use crate::game::{build_hierarchy, synthesize, GameView, RankMap, Strategy, StrategyError};
use crate::model::{
    auto_complete_tp, build_tester, check_deterministic, product, validate_spec, validate_tp, Automaton, ModelError,
    Tester, ValidationReport,
};
use crate::semantics::{bounded_trace_equiv, DEFAULT_HORIZON};

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("validation failed\n{0}")]
    Validation(ValidationReport),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("the product is not deterministic ({0}); supply a deterministic product with the same traces")]
    Nondeterministic(String),
    #[error("the supplied product differs from the computed one: {0}")]
    NotEquivalent(String),
    #[error("UNSATISFIABLE: the objective cannot be reached from the initial state")]
    Unsatisfiable(Box<RankMap>),
    #[error("{0}")]
    Semantics(String),
}

#[derive(Clone, Debug)]
pub struct PipelineOptions {
    /// Deterministic product to use instead of the computed one.
    pub dp: Option<Automaton>,
    /// Horizon of the trace-equivalence check on a supplied product.
    pub horizon: usize,
    pub auto_complete_tp: bool,
}

impl Default for PipelineOptions {
    fn default() -> PipelineOptions {
        PipelineOptions { dp: None, horizon: DEFAULT_HORIZON, auto_complete_tp: false }
    }
}

#[derive(Clone, Debug)]
pub struct Synthesis {
    pub spec: Automaton,
    pub tp: Automaton,
    pub product: Automaton,
    pub dp: Automaton,
    pub tester: Tester,
    pub game: GameView,
    pub ranks: RankMap,
    pub strategy: Strategy,
}

impl Synthesis {
    pub fn test_case(&self, name: impl Into<String>) -> TestCase {
        TestCase { name: name.into(), tp: self.tp.clone(), game: self.game.clone(), strategy: self.strategy.clone() }
    }
}

pub fn synthesize_test_case(spec: &Automaton, tp: &Automaton, opts: &PipelineOptions) -> Result<Synthesis, PipelineError> {
    let tp = if opts.auto_complete_tp { auto_complete_tp(tp) } else { tp.clone() };
    let mut report = validate_spec(spec);
    let tp_report = validate_tp(&tp, spec);
    report.checked.extend(tp_report.checked);
    report.issues.extend(tp_report.issues);
    if !report.is_ok() {
        return Err(PipelineError::Validation(report));
    }
    let prod = product(spec, &tp)?;
    let dp = match &opts.dp {
        None => {
            if let Some(issue) = check_deterministic(&prod).issues.first() {
                return Err(PipelineError::Nondeterministic(issue.to_string()));
            }
            prod.clone()
        }
        Some(dp) => {
            if let Some(issue) = check_deterministic(dp).issues.first() {
                return Err(PipelineError::Nondeterministic(issue.to_string()));
            }
            let eq = bounded_trace_equiv(&prod, dp, opts.horizon).map_err(|e| PipelineError::Semantics(e.to_string()))?;
            if let Some(w) = eq.witness {
                return Err(PipelineError::NotEquivalent(w.to_string()));
            }
            dp.clone()
        }
    };
    let tester = build_tester(&dp)?;
    let game = GameView::new(&tester);
    let ranks = build_hierarchy(&game);
    let strategy = match synthesize(&game, &ranks) {
        Ok(s) => s,
        Err(StrategyError::Unsatisfiable) => return Err(PipelineError::Unsatisfiable(Box::new(ranks))),
        Err(StrategyError::Semantics(e)) => return Err(PipelineError::Semantics(e.to_string())),
    };
    Ok(Synthesis { spec: spec.clone(), tp, product: prod, dp, tester, game, ranks, strategy })
}
