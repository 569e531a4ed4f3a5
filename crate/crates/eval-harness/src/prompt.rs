//! Prompt assembly. Every prompt is built from the same ordered
//! components: dynamic-graph instruction, motif instruction (with a
//! search-guidance extension under chain-of-thought), the catalog listing
//! for multi-motif tasks, the task instruction, the answer-format
//! instruction, an optional worked example, and the question.

use bench_gen::{Query, TaskInstance, TaskKind};
use dygraph_core::format_events;
use motif_engine::MotifPattern;

use crate::templates::Templates;
use crate::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    ZeroShot,
    OneShot,
    ZeroShotCot,
    OneShotCot,
}

impl Strategy {
    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::ZeroShot => "zero_shot",
            Strategy::OneShot => "one_shot",
            Strategy::ZeroShotCot => "zero_shot_cot",
            Strategy::OneShotCot => "one_shot_cot",
        }
    }

    pub fn one_shot(self) -> bool {
        matches!(self, Strategy::OneShot | Strategy::OneShotCot)
    }

    pub fn cot(self) -> bool {
        matches!(self, Strategy::ZeroShotCot | Strategy::OneShotCot)
    }
}

impl std::str::FromStr for Strategy {
    type Err = HarnessError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "zero_shot" => Ok(Strategy::ZeroShot),
            "one_shot" => Ok(Strategy::OneShot),
            "zero_shot_cot" => Ok(Strategy::ZeroShotCot),
            "one_shot_cot" => Ok(Strategy::OneShotCot),
            other => Err(HarnessError::BadInstance(format!(
                "unknown strategy {other:?} (expected zero_shot, one_shot, zero_shot_cot or one_shot_cot)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptBundle {
    /// Reserved for chat protocols that want a system message; the
    /// benchmark puts the entire prompt in the user message.
    pub system: String,
    pub user: String,
}

fn single_motif(instance: &TaskInstance) -> Result<MotifPattern, HarnessError> {
    let def = instance.motif().ok_or_else(|| {
        HarnessError::BadInstance(format!("{}: expected exactly one motif", instance.id))
    })?;
    def.to_pattern().map_err(|e| HarnessError::BadInstance(e.to_string()))
}

/// Phrase describing a motif: `a {name} temporal motif which is a
/// {k}-node, {l}-edge, {W}-temporal motif with the edges{[…]}`.
fn motif_phrase(p: &MotifPattern) -> String {
    format!(
        "a {} temporal motif which is a {}-node, {}-edge, {}-temporal motif with the edges{}",
        p.name(),
        p.k(),
        p.l(),
        p.delta(),
        p.edge_text()
    )
}

/// The question body, matching each task's fixed phrasing (including its
/// idiosyncratic spacing) so rendered prompts are stable golden text.
pub fn question_body(instance: &TaskInstance) -> Result<String, HarnessError> {
    let g = format_events(&instance.graph);
    Ok(match instance.task {
        TaskKind::Classification => {
            let p = single_motif(instance)?;
            format!(
                "Given an undirected dynamic graph with the edges {g}. Given {}. Whether the given undirected dynamic graph is the given motif?",
                motif_phrase(&p)
            )
        }
        TaskKind::Detection => {
            let p = single_motif(instance)?;
            format!(
                "Given an undirected dynamic graph with the edges {g}.Given {}. Whether the given undirected dynamic graph contains the given temporal motif?",
                motif_phrase(&p)
            )
        }
        TaskKind::Construction => {
            let p = single_motif(instance)?;
            format!(
                "Given an undirected dynamic graph with the edges {g}. Given {}. How to modify the given undirected dynamic graph so that it contains the given temporal motif?",
                motif_phrase(&p)
            )
        }
        TaskKind::MultiDetect => format!(
            "Given an undirected dynamic graph with the edges {g}. What temporal motifs present in the given undirected dynamic graph?"
        ),
        TaskKind::Occurrence => format!(
            "Given an undirected dynamic graph with the edges{g}. When does each of the above temporal motifs first appear in the given undirected dynamic graph?"
        ),
        TaskKind::MultiCount => format!(
            "Given an undirected dynamic graph with the edges {g}. How many times does each of the above temporal motifs appear in the given undirected dynamic graph?"
        ),
        TaskKind::Level0SortEdge => format!(
            "Given an undirected dynamic graph with the edges {g}. Sort the edges by their timestamps in ascending order."
        ),
        TaskKind::Level0WhenLinkDislink => {
            let Some(Query::Pair { pair: (u, v) }) = instance.query else {
                return Err(HarnessError::BadInstance(
                    "link/dislink instance is missing its pair query".into(),
                ));
            };
            format!(
                "Given an undirected dynamic graph with the edges {g}. When are node {u} and node {v} first linked and first dislinked?"
            )
        }
        TaskKind::Level0WhatEdges => {
            let Some(Query::Time { time }) = instance.query else {
                return Err(HarnessError::BadInstance(
                    "active-edges instance is missing its time query".into(),
                ));
            };
            format!(
                "Given an undirected dynamic graph with the edges {g}. What edges exist at time {time}?"
            )
        }
        TaskKind::Level0ReverseGraph => format!(
            "Given an undirected dynamic graph with the edges {g}. Reverse the graph."
        ),
    })
}

/// The catalog listing shown to multi-motif tasks, one motif per
/// paragraph under a fixed header.
pub fn motif_list(instance: &TaskInstance, templates: &Templates) -> Result<String, HarnessError> {
    let header = templates.get("motif_list_header")?;
    let mut lines = Vec::with_capacity(instance.motifs.len());
    for def in &instance.motifs {
        let p = def.to_pattern().map_err(|e| HarnessError::BadInstance(e.to_string()))?;
        lines.push(format!(
            "{}: a {}-node, {}-edge, {}-temporal motif with the edges {}",
            p.name(),
            p.k(),
            p.l(),
            p.delta(),
            p.edge_text()
        ));
    }
    Ok(format!("{header}\n\n{}", lines.join("\n\n")))
}

pub fn render_prompt(
    instance: &TaskInstance,
    strategy: Strategy,
    templates: &Templates,
) -> Result<PromptBundle, HarnessError> {
    let mut components: Vec<String> = Vec::new();
    components.push(templates.get("dyg_instruction")?.to_owned());

    if !instance.task.is_level0() {
        let mut motif_instruction = templates.get("motif_instruction")?.to_owned();
        if strategy.cot() {
            motif_instruction.push(' ');
            motif_instruction.push_str(templates.get("cot_extension")?);
        }
        components.push(motif_instruction);
    }
    if instance.task.is_level2() {
        components.push(motif_list(instance, templates)?);
    }

    components.push(templates.task_instruction(instance.task)?.to_owned());
    components.push(templates.answer_instruction(instance.task)?.to_owned());

    let body = question_body(instance)?;
    if strategy.one_shot() {
        let exemplar = templates.exemplar(instance.task, strategy.cot())?;
        components.push(format!("Here is an example:\n\n{exemplar}"));
        components.push(format!("Here is what you need to answer:\n\nQuestion: {body}"));
    } else {
        components.push(format!("Here is what you need to answer: Question: {body}"));
    }
    if strategy.cot() {
        components.push("Answer:".to_owned());
    }

    Ok(PromptBundle { system: String::new(), user: components.join("\n\n") })
}
