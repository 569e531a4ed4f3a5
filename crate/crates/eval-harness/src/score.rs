//! Scoring: a pure function of (ground truth, parsed answer), always in
//! [0, 1]. Parse failures score zero. Construction accepts ANY single
//! added edge whose insertion makes the motif present, not just the
//! stored canonical one.

use std::collections::BTreeMap;

use bench_gen::{GroundTruth, TaskInstance, TaskKind};
use dygraph_core::{DynamicGraph, EdgeEvent, NodePair, Op};
use motif_engine::detect;
use serde::{Deserialize, Serialize};

use crate::parse::ParsedAnswer;
use crate::HarnessError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Score {
    pub task: TaskKind,
    pub value: f64,
    /// Per-motif contribution for multi-motif tasks (1.0/0.0 per present
    /// motif); empty elsewhere.
    pub per_motif: BTreeMap<String, f64>,
}

impl Score {
    fn plain(task: TaskKind, value: f64) -> Score {
        Score { task, value, per_motif: BTreeMap::new() }
    }
}

/// Multiset of events, ignoring orientation and list order.
fn event_multiset(events: &[EdgeEvent]) -> BTreeMap<(NodePair, u64, Op), usize> {
    let mut m = BTreeMap::new();
    for e in events {
        *m.entry((e.pair(), e.t, e.op)).or_insert(0) += 1;
    }
    m
}

fn non_decreasing_times(events: &[EdgeEvent]) -> bool {
    events.windows(2).all(|w| w[0].t <= w[1].t)
}

pub fn score_instance(
    instance: &TaskInstance,
    parsed: &ParsedAnswer,
) -> Result<Score, HarnessError> {
    let task = instance.task;
    if *parsed == ParsedAnswer::ParseFailure {
        return Ok(Score::plain(task, 0.0));
    }
    let bad = |what: &str| {
        Err(HarnessError::BadInstance(format!(
            "{} ground truth does not fit task {}",
            what,
            task.as_str()
        )))
    };

    match (task, &instance.ground_truth, parsed) {
        (
            TaskKind::Classification | TaskKind::Detection,
            GroundTruth::Bool { value },
            ParsedAnswer::Bool(answer),
        ) => Ok(Score::plain(task, if answer == value { 1.0 } else { 0.0 })),

        (TaskKind::Construction, GroundTruth::Event { .. }, ParsedAnswer::Events(edits)) => {
            // Verified semantically: exactly one modification, it is an
            // add, and applying it makes the motif present.
            let def = instance.motif().ok_or_else(|| {
                HarnessError::BadInstance(format!("{}: expected exactly one motif", instance.id))
            })?;
            let pattern =
                def.to_pattern().map_err(|e| HarnessError::BadInstance(e.to_string()))?;
            let ok = edits.len() == 1 && edits[0].op == Op::Add && {
                let mut events = instance.graph.clone();
                events.push(edits[0]);
                detect(&DynamicGraph::new(events), &pattern)
            };
            Ok(Score::plain(task, if ok { 1.0 } else { 0.0 }))
        }

        (
            TaskKind::MultiDetect,
            GroundTruth::Level2 { presence, .. },
            ParsedAnswer::Names(names),
        ) => {
            let present: Vec<&str> =
                presence.iter().filter(|&(_, &p)| p).map(|(n, _)| n.as_str()).collect();
            let tp = names.iter().filter(|n| present.contains(&n.as_str())).count() as f64;
            let fp = names.len() as f64 - tp;
            let value = if present.is_empty() {
                if names.is_empty() { 1.0 } else { 0.0 }
            } else {
                ((tp - fp) / present.len() as f64).max(0.0)
            };
            let per_motif = present
                .iter()
                .map(|&n| {
                    (n.to_owned(), if names.iter().any(|x| x == n) { 1.0 } else { 0.0 })
                })
                .collect();
            Ok(Score { task, value, per_motif })
        }

        (
            TaskKind::Occurrence,
            GroundTruth::Level2 { first_occurrence, .. },
            ParsedAnswer::NameInts(answer),
        ) => {
            if first_occurrence.is_empty() {
                return Ok(Score::plain(task, 1.0));
            }
            let per_motif: BTreeMap<String, f64> = first_occurrence
                .iter()
                .map(|(n, t)| {
                    (n.clone(), if answer.get(n) == Some(t) { 1.0 } else { 0.0 })
                })
                .collect();
            let value = per_motif.values().sum::<f64>() / per_motif.len() as f64;
            Ok(Score { task, value, per_motif })
        }

        (
            TaskKind::MultiCount,
            GroundTruth::Level2 { counts, .. },
            ParsedAnswer::NameInts(answer),
        ) => {
            if counts.is_empty() {
                return Ok(Score::plain(task, 1.0));
            }
            let per_motif: BTreeMap<String, f64> = counts
                .iter()
                .map(|(n, &gt)| {
                    let pred = answer.get(n).copied().unwrap_or(0);
                    (n.clone(), pred.min(gt) as f64 / gt as f64)
                })
                .collect();
            let value = per_motif.values().sum::<f64>() / per_motif.len() as f64;
            Ok(Score { task, value, per_motif })
        }

        (
            TaskKind::Level0SortEdge | TaskKind::Level0ReverseGraph,
            GroundTruth::Events { value },
            ParsedAnswer::Events(answer),
        ) => {
            // The multiset must match and the times must be ascending; the
            // relative order of equal-timestamp events is ignored.
            let ok = event_multiset(answer) == event_multiset(value)
                && non_decreasing_times(answer);
            Ok(Score::plain(task, if ok { 1.0 } else { 0.0 }))
        }

        (
            TaskKind::Level0WhenLinkDislink,
            GroundTruth::TimePair { link, dislink },
            ParsedAnswer::IntPair(a, b),
        ) => Ok(Score::plain(task, if (*a, *b) == (*link, *dislink) { 1.0 } else { 0.0 })),

        (
            TaskKind::Level0WhatEdges,
            GroundTruth::Pairs { value },
            ParsedAnswer::NodePairs(answer),
        ) => {
            let gt: Vec<(u64, u64)> =
                value.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
            let mut gt_sorted = gt;
            gt_sorted.sort_unstable();
            gt_sorted.dedup();
            Ok(Score::plain(task, if *answer == gt_sorted { 1.0 } else { 0.0 }))
        }

        // A parsed payload of the wrong shape for the task scores zero
        // (the parser is task-directed, so this means a degenerate answer).
        (_, GroundTruth::Bool { .. }, _)
        | (_, GroundTruth::Event { .. }, _)
        | (_, GroundTruth::Level2 { .. }, _)
        | (_, GroundTruth::Events { .. }, _)
        | (_, GroundTruth::TimePair { .. }, _)
        | (_, GroundTruth::Pairs { .. }, _) => {
            if ground_truth_fits(task, &instance.ground_truth) {
                Ok(Score::plain(task, 0.0))
            } else {
                bad("stored")
            }
        }
    }
}

fn ground_truth_fits(task: TaskKind, gt: &GroundTruth) -> bool {
    matches!(
        (task, gt),
        (TaskKind::Classification | TaskKind::Detection, GroundTruth::Bool { .. })
            | (TaskKind::Construction, GroundTruth::Event { .. })
            | (
                TaskKind::MultiDetect | TaskKind::Occurrence | TaskKind::MultiCount,
                GroundTruth::Level2 { .. }
            )
            | (
                TaskKind::Level0SortEdge | TaskKind::Level0ReverseGraph,
                GroundTruth::Events { .. }
            )
            | (TaskKind::Level0WhenLinkDislink, GroundTruth::TimePair { .. })
            | (TaskKind::Level0WhatEdges, GroundTruth::Pairs { .. })
    )
}
