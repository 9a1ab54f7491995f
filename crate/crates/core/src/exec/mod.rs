//! Test execution against simulated implementations, verdicts and
//! conformance campaigns.

mod campaign;
mod impl_model;
mod purpose;
mod run;
mod scheduler;

pub use campaign::{campaign, CampaignConfig, CampaignReport, CampaignRow, TestCase};
pub use impl_model::{make_impl, ImplModel, InputCompletion, Mutation};
pub use purpose::exhaustiveness_tp;
pub use run::{run_test, Behaviour, Budget, Event, EventKind, RunConfig, Side, Verdict};
pub use scheduler::{Choice, FairScheduler};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExecError {
    #[error("implementation action {0} is outside the shared alphabet")]
    Alphabet(String),
    #[error("implementation does not accept {action} in {location}")]
    NotInputComplete { location: String, action: String },
    #[error("implementation may block time: {0}")]
    Blocking(String),
    #[error("implementation is stuck in {0}")]
    Blocked(String),
    #[error("bad mutation: {0}")]
    Mutation(String),
    #[error("bad test purpose request: {0}")]
    Purpose(String),
    #[error("strategy has no move in {0}")]
    StrategyUndefined(String),
    #[error("tester cannot follow {0}")]
    TesterIncomplete(String),
    #[error("inconsistent step: {0}")]
    Replay(String),
    #[error("{0}")]
    Model(String),
}
