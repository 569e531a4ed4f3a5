//! Deterministic offline drivers.
//!
//! `ScriptedModel` replays a fixed sequence of turns, which is enough to
//! exercise every loop path without a network. `oracle_script` builds the
//! two-turn script of a model that behaves exactly as the prompt commands:
//! one well-formed tool call, then a Final Answer echoing the observation.

use std::sync::Mutex;

use bench_gen::{TaskInstance, TaskKind};
use eval_harness::{ClientError, PromptBundle, RawCompletion};
use motif_engine::MotifDef;
use serde_json::{json, Value};

use crate::agent::{AgentError, ChatModel};
use crate::react::{parse_react_step, StepBody};

/// One scripted turn: fixed text, or "echo the last observation as the
/// final answer" (the behavior the agent prompt demands).
#[derive(Debug, Clone)]
pub enum ScriptTurn {
    Text(String),
    EchoObservation,
}

/// Replays its turns in order; token usage is a fixed amount per call so
/// cumulative sums are predictable in tests.
pub struct ScriptedModel {
    turns: Mutex<std::vec::IntoIter<ScriptTurn>>,
    pub prompt_tokens_per_call: u64,
    pub completion_tokens_per_call: u64,
}

impl ScriptedModel {
    pub fn new(turns: Vec<ScriptTurn>) -> ScriptedModel {
        ScriptedModel {
            turns: Mutex::new(turns.into_iter()),
            prompt_tokens_per_call: 100,
            completion_tokens_per_call: 10,
        }
    }
}

/// The last observation in the rendered prompt's scratchpad.
fn last_observation(prompt: &str) -> Option<&str> {
    let at = prompt.rfind("\nObservation: ")?;
    let tail = &prompt[at + "\nObservation: ".len()..];
    Some(tail.split("\nThought:").next().unwrap_or(tail).trim_end())
}

impl ChatModel for ScriptedModel {
    fn complete(&self, prompt: &PromptBundle) -> Result<RawCompletion, ClientError> {
        let turn = self.turns.lock().expect("script lock").next().ok_or_else(|| {
            ClientError::BadResponse("script exhausted: unexpected extra model call".to_owned())
        })?;
        let text = match turn {
            ScriptTurn::Text(t) => t,
            ScriptTurn::EchoObservation => {
                let obs = last_observation(&prompt.user).unwrap_or("");
                format!(" I now know the final answer.\nFinal Answer: {obs}")
            }
        };
        Ok(RawCompletion {
            text,
            prompt_tokens: Some(self.prompt_tokens_per_call),
            completion_tokens: Some(self.completion_tokens_per_call),
            latency_ms: 0,
        })
    }
}

/// The tool an ideally-behaved model picks for each task. Classification
/// uses detection: classification graphs carry exactly the motif's edge
/// count, where containment and exact-match coincide.
pub fn tool_for_task(task: TaskKind) -> Option<&'static str> {
    Some(match task {
        TaskKind::Classification | TaskKind::Detection => "Motif_Detection",
        TaskKind::Construction => "Motif_Construction",
        TaskKind::MultiDetect => "Multi_Motif_Detection",
        TaskKind::Occurrence => "Motif_Occurrence_Prediction",
        TaskKind::MultiCount => "Multi_Motif_Count",
        _ => return None,
    })
}

fn def_entry(def: &MotifDef) -> Value {
    json!({"edge_pattern": def.edge_pattern, "time_window": def.time_window})
}

/// The well-formed Action Input for `instance`, exactly as the prompt
/// instructs: the question's edge list copied verbatim plus the motif
/// map under the right parameter name.
pub fn oracle_action_input(instance: &TaskInstance) -> Result<Value, AgentError> {
    let edge_list = serde_json::to_value(&instance.graph)
        .expect("events serialize infallibly");
    let defs: serde_json::Map<String, Value> = instance
        .motifs
        .iter()
        .map(|def| (def.name.clone(), def_entry(def)))
        .collect();
    if defs.is_empty() {
        return Err(AgentError::Harness(eval_harness::HarnessError::BadInstance(
            format!("instance {} has no motifs for a tool call", instance.id),
        )));
    }
    let param = if instance.task.is_level2() { "motif_definitions" } else { "motif_list" };
    Ok(json!({ "edge_list": edge_list, param: defs }))
}

/// A two-turn script: the correct tool call, then a Final Answer echoing
/// the observation.
pub fn oracle_script(instance: &TaskInstance) -> Result<ScriptedModel, AgentError> {
    let tool = tool_for_task(instance.task).ok_or_else(|| {
        AgentError::Harness(eval_harness::HarnessError::BadInstance(format!(
            "no tool covers task {}",
            instance.task.as_str()
        )))
    })?;
    let input = oracle_action_input(instance)?;
    let call = format!(
        " I should call the right tool with the data from the question.\nAction: {tool}\nAction Input: {input}"
    );
    let model = ScriptedModel::new(vec![ScriptTurn::Text(call), ScriptTurn::EchoObservation]);
    // Sanity: the scripted turn must parse as the action we intended.
    debug_assert!(matches!(
        parse_react_step(&format!("Action: {tool}\nAction Input: {input}")).body,
        StepBody::Action { .. }
    ));
    Ok(model)
}
