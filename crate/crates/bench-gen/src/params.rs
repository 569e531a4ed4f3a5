use serde::{Deserialize, Serialize};

/// Generation parameters for one instance. `window` is the motif's time
/// window when the task has a single motif; multi-motif instances carry
/// per-motif windows in their motif definitions instead.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenParams {
    pub n: u64,
    pub p: f64,
    pub t_span: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub window: Option<u64>,
    pub del_prob: f64,
    pub seed: u64,
}

impl GenParams {
    pub fn validate(&self) -> Result<(), GenError> {
        if !(0.0..=1.0).contains(&self.p) {
            return Err(GenError::InvalidParams(format!("p={} outside [0,1]", self.p)));
        }
        if !(0.0..=1.0).contains(&self.del_prob) {
            return Err(GenError::InvalidParams(format!(
                "del_prob={} outside [0,1]",
                self.del_prob
            )));
        }
        if self.t_span < 1 {
            return Err(GenError::InvalidParams("t_span must be >= 1".into()));
        }
        if self.window == Some(0) {
            return Err(GenError::InvalidParams("window must be >= 1".into()));
        }
        Ok(())
    }

    /// The single-motif window; errors for multi-motif parameter sets.
    pub fn require_window(&self) -> Result<u64, GenError> {
        self.window
            .ok_or_else(|| GenError::InvalidParams("params carry no window".into()))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum GenError {
    #[error("invalid generation parameters: {0}")]
    InvalidParams(String),
    #[error("unknown motif {0:?}")]
    UnknownMotif(String),
    #[error("no {task} settings exist for motif {motif:?}")]
    MissingSetting { task: &'static str, motif: String },
    #[error("retry budget exhausted while {0} (parameters are likely inconsistent)")]
    RetryBudget(String),
    #[error("input error: {0}")]
    Input(String),
}
