//! Evaluation harness: renders task instances into prompts, talks to a
//! chat-completions endpoint, parses and scores the answers, and
//! aggregates runs into per-task/per-motif accuracy and token-cost
//! summaries.

pub mod client;
pub mod parse;
pub mod prompt;
pub mod run;
pub mod score;
pub mod templates;

pub use client::{llm_complete, ClientError, EndpointConfig, RawCompletion};
pub use parse::{parse_answer, ParsedAnswer};
pub use prompt::{motif_list, question_body, render_prompt, PromptBundle, Strategy};
pub use run::{run_benchmark, summary_rows, write_summary_csv, ResultRecord, RunReport, SummaryRow};
pub use score::{score_instance, Score};
pub use templates::Templates;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("template error: {0}")]
    Template(String),
    #[error("bad instance: {0}")]
    BadInstance(String),
    #[error(transparent)]
    Client(#[from] ClientError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Jsonl(#[from] dygraph_core::JsonlError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
