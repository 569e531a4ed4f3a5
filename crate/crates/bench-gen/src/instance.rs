use std::collections::BTreeMap;

use dygraph_core::{
    active_edges_at, first_link_dislink, reverse_graph, sort_events, DynamicGraph, EdgeEvent,
};
use motif_engine::{
    classify_exact, construct_completion, detect, multi_count, multi_detect,
    multi_first_occurrence, MotifDef,
};
use serde::{Deserialize, Serialize};

use crate::params::GenParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskKind {
    Classification,
    Detection,
    Construction,
    MultiDetect,
    Occurrence,
    MultiCount,
    Level0SortEdge,
    Level0WhenLinkDislink,
    Level0WhatEdges,
    Level0ReverseGraph,
}

impl TaskKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TaskKind::Classification => "classification",
            TaskKind::Detection => "detection",
            TaskKind::Construction => "construction",
            TaskKind::MultiDetect => "multi_detect",
            TaskKind::Occurrence => "occurrence",
            TaskKind::MultiCount => "multi_count",
            TaskKind::Level0SortEdge => "level0_sort_edge",
            TaskKind::Level0WhenLinkDislink => "level0_when_link_dislink",
            TaskKind::Level0WhatEdges => "level0_what_edges",
            TaskKind::Level0ReverseGraph => "level0_reverse_graph",
        }
    }

    pub fn from_str(s: &str) -> Option<TaskKind> {
        ALL_TASKS.iter().copied().find(|t| t.as_str() == s)
    }

    /// The three multi-motif (Level 2) tasks share one instance shape.
    pub fn is_level2(self) -> bool {
        matches!(self, TaskKind::MultiDetect | TaskKind::Occurrence | TaskKind::MultiCount)
    }

    pub fn is_level0(self) -> bool {
        matches!(
            self,
            TaskKind::Level0SortEdge
                | TaskKind::Level0WhenLinkDislink
                | TaskKind::Level0WhatEdges
                | TaskKind::Level0ReverseGraph
        )
    }
}

pub const ALL_TASKS: [TaskKind; 10] = [
    TaskKind::Classification,
    TaskKind::Detection,
    TaskKind::Construction,
    TaskKind::MultiDetect,
    TaskKind::Occurrence,
    TaskKind::MultiCount,
    TaskKind::Level0SortEdge,
    TaskKind::Level0WhenLinkDislink,
    TaskKind::Level0WhatEdges,
    TaskKind::Level0ReverseGraph,
];

/// Which single aspect a classification negative violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationTag {
    Structural,
    Temporal,
    Duration,
}

pub const ALL_VIOLATIONS: [ViolationTag; 3] =
    [ViolationTag::Structural, ViolationTag::Temporal, ViolationTag::Duration];

/// Extra question input for the warm-up tasks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Query {
    Pair { pair: (u64, u64) },
    Time { time: u64 },
}

/// Task-specific answer payload, tagged by `kind`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroundTruth {
    /// Yes/no tasks (classification, detection).
    Bool { value: bool },
    /// Construction: the canonical single-Add completion.
    Event { value: EdgeEvent },
    /// Multi-motif tasks carry all three maps so one instance can serve
    /// any of them; absent motifs are omitted from the occurrence and
    /// count maps.
    Level2 {
        presence: BTreeMap<String, bool>,
        first_occurrence: BTreeMap<String, u64>,
        counts: BTreeMap<String, u64>,
    },
    /// Ordered event lists (sort, reverse).
    Events { value: Vec<EdgeEvent> },
    /// First link/dislink times of the queried pair.
    TimePair { link: u64, dislink: u64 },
    /// Active edges at the queried time, canonically ordered.
    Pairs { value: Vec<(u64, u64)> },
}

/// One benchmark instance: everything needed to pose the question, score
/// the answer, and regenerate the whole thing from scratch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskInstance {
    pub id: String,
    pub task: TaskKind,
    pub graph: Vec<EdgeEvent>,
    pub motifs: Vec<MotifDef>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub query: Option<Query>,
    pub ground_truth: GroundTruth,
    pub gen: GenParams,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub violation: Option<ViolationTag>,
}

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error("{id}: stored ground truth differs from recomputation")]
    Mismatch { id: String },
    #[error("{id}: {msg}")]
    Malformed { id: String, msg: String },
}

impl TaskInstance {
    pub fn dynamic_graph(&self) -> DynamicGraph {
        DynamicGraph::new(self.graph.clone())
    }

    /// The single motif of a single-motif task.
    pub fn motif(&self) -> Option<&MotifDef> {
        match self.motifs.as_slice() {
            [one] => Some(one),
            _ => None,
        }
    }

    /// Recomputes the ground truth from the graph and motif definitions.
    pub fn recompute_ground_truth(&self) -> Result<GroundTruth, VerifyError> {
        let malformed = |msg: &str| VerifyError::Malformed {
            id: self.id.clone(),
            msg: msg.to_owned(),
        };
        let g = self.dynamic_graph();
        let single_pattern = || {
            self.motif()
                .ok_or_else(|| malformed("expected exactly one motif"))?
                .to_pattern()
                .map_err(|e| malformed(&e.to_string()))
        };
        Ok(match self.task {
            TaskKind::Classification => {
                GroundTruth::Bool { value: classify_exact(&g, &single_pattern()?) }
            }
            TaskKind::Detection => GroundTruth::Bool { value: detect(&g, &single_pattern()?) },
            TaskKind::Construction => {
                let value = construct_completion(&g, &single_pattern()?)
                    .ok_or_else(|| malformed("stored construction instance is uncompletable"))?;
                GroundTruth::Event { value }
            }
            TaskKind::MultiDetect | TaskKind::Occurrence | TaskKind::MultiCount => {
                let patterns: Result<Vec<_>, _> =
                    self.motifs.iter().map(|d| d.to_pattern()).collect();
                let patterns = patterns.map_err(|e| malformed(&e.to_string()))?;
                GroundTruth::Level2 {
                    presence: multi_detect(&g, &patterns),
                    first_occurrence: multi_first_occurrence(&g, &patterns),
                    counts: multi_count(&g, &patterns),
                }
            }
            TaskKind::Level0SortEdge => GroundTruth::Events { value: sort_events(&g) },
            TaskKind::Level0WhenLinkDislink => {
                let Some(Query::Pair { pair: (u, v) }) = self.query else {
                    return Err(malformed("missing pair query"));
                };
                let (link, dislink) = first_link_dislink(&g, u, v);
                let (link, dislink) = link
                    .zip(dislink)
                    .ok_or_else(|| malformed("queried pair lacks a link or dislink event"))?;
                GroundTruth::TimePair { link, dislink }
            }
            TaskKind::Level0WhatEdges => {
                let Some(Query::Time { time }) = self.query else {
                    return Err(malformed("missing time query"));
                };
                GroundTruth::Pairs {
                    value: active_edges_at(&g, time).into_iter().map(|p| (p.0, p.1)).collect(),
                }
            }
            TaskKind::Level0ReverseGraph => GroundTruth::Events { value: reverse_graph(&g) },
        })
    }

    /// Checks the stored ground truth against a fresh recomputation.
    pub fn verify(&self) -> Result<(), VerifyError> {
        let fresh = self.recompute_ground_truth()?;
        if fresh == self.ground_truth {
            Ok(())
        } else {
            Err(VerifyError::Mismatch { id: self.id.clone() })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn task_kind_strings_round_trip() {
        for t in ALL_TASKS {
            assert_eq!(TaskKind::from_str(t.as_str()), Some(t));
            let json = serde_json::to_string(&t).unwrap();
            assert_eq!(json, format!("\"{}\"", t.as_str()));
        }
    }

    #[test]
    fn query_json_shapes() {
        assert_eq!(
            serde_json::to_string(&Query::Pair { pair: (1, 2) }).unwrap(),
            r#"{"pair":[1,2]}"#
        );
        assert_eq!(serde_json::to_string(&Query::Time { time: 3 }).unwrap(), r#"{"time":3}"#);
    }

    #[test]
    fn ground_truth_is_kind_tagged() {
        let gt = GroundTruth::Bool { value: true };
        assert_eq!(serde_json::to_string(&gt).unwrap(), r#"{"kind":"bool","value":true}"#);
        let gt = GroundTruth::TimePair { link: 1, dislink: 4 };
        assert_eq!(
            serde_json::to_string(&gt).unwrap(),
            r#"{"kind":"time_pair","link":1,"dislink":4}"#
        );
    }
}
