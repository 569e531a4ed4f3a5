//! Structure-aware dispatching between direct prompting and the
//! tool-calling agent.
//!
//! Five cheap features summarize how hard a dynamic-graph query will be
//! for a text-only model; a small boosted-tree classifier turns them into
//! p(hard), and the router sends each query down exactly one of the two
//! solve paths.

pub mod features;
pub mod gbdt;
pub mod labels;
pub mod route;

pub use features::{extract_features, population_std, FeatureVector, FEATURE_NAMES};
pub use gbdt::{
    train_classifier, DifficultyModel, ModelMeta, TrainParams, TrainReport, Tree, TreeNode,
};
pub use labels::{
    build_label_dataset, read_labels_csv, write_labels_csv, LabelDataset, LabeledRow,
    LABEL_HEADER,
};
pub use route::{
    predict_difficulty, random_route, route_and_solve, route_summary, run_routed_benchmark,
    AgentSolver, DirectSolver, Route, RouteDecision, RoutePolicy, RouteRecord, RouteSummaryRow,
    SolveOutcome, Solver,
};

#[derive(Debug, thiserror::Error)]
pub enum DispatchError {
    #[error("feature vector has {got} entries; the model expects {expected}")]
    FeatureArity { expected: usize, got: usize },
    #[error("training data has a single class; need both easy and hard rows")]
    SingleClass,
    #[error("{0}")]
    Model(String),
    #[error("{0}")]
    Path(String),
    #[error(transparent)]
    Harness(#[from] eval_harness::HarnessError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl DispatchError {
    pub(crate) fn model_io(e: serde_json::Error) -> DispatchError {
        DispatchError::Model(e.to_string())
    }
}
