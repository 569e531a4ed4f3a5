//! The ReAct loop: prompt → parse → tool → observation, until the model
//! produces a Final Answer or runs out of budget.

use bench_gen::TaskInstance;
use eval_harness::{
    llm_complete, question_body, ClientError, EndpointConfig, HarnessError, PromptBundle,
    RawCompletion, Templates,
};

use crate::react::{parse_react_step, ReactStep, StepBody};
use crate::tools::{call_tool, render_tool_lines, tool_names};

/// Default step budget: one honest tool call plus generous slack for
/// repairs.
pub const DEFAULT_MAX_STEPS: usize = 5;

const PROMPT_TEMPLATE: &str = include_str!("../templates/agent_prompt.txt");

/// Anything that can complete a prompt: the real endpoint client or a
/// scripted stand-in for offline runs and tests.
pub trait ChatModel: Sync {
    fn complete(&self, prompt: &PromptBundle) -> Result<RawCompletion, ClientError>;
}

/// The production model: a chat-completions endpoint.
pub struct EndpointModel(pub EndpointConfig);

impl ChatModel for EndpointModel {
    fn complete(&self, prompt: &PromptBundle) -> Result<RawCompletion, ClientError> {
        llm_complete(prompt, &self.0)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum AgentError {
    #[error(transparent)]
    Harness(#[from] HarnessError),
    #[error(transparent)]
    Client(#[from] ClientError),
    #[error("max_steps must be at least 1")]
    ZeroBudget,
}

/// Why an episode ended without a final answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AbortReason {
    /// The step budget ran out before a Final Answer.
    StepBudget,
    /// Two consecutive completions had no parseable block.
    RepeatedParseFailure,
}

/// The outcome of one episode: the transcript, cumulative token usage,
/// and either a final answer or an abort reason.
#[derive(Debug)]
pub struct AgentOutcome {
    pub final_answer: Option<String>,
    pub transcript: Vec<ReactStep>,
    pub prompt_tokens: Option<u64>,
    pub completion_tokens: Option<u64>,
    pub abort: Option<AbortReason>,
}

/// The question shown to the agent: the task's question body, preceded by
/// the motif catalog listing for multi-motif tasks (the agent must copy
/// motif definitions out of its question).
pub fn agent_question(
    instance: &TaskInstance,
    templates: &Templates,
) -> Result<String, HarnessError> {
    let body = question_body(instance)?;
    if instance.task.is_level2() {
        Ok(format!("{}\n\n{body}", eval_harness::motif_list(instance, templates)?))
    } else {
        Ok(body)
    }
}

/// Render the agent prompt for `question` with the accumulated
/// scratchpad (model text, observations, and trailing "Thought:" cues).
pub fn render_agent_prompt(question: &str, scratchpad: &str) -> PromptBundle {
    let user = PROMPT_TEMPLATE
        .replace("{tools}", &render_tool_lines())
        .replace("{tool_names}", &tool_names())
        .replace("{input}", question)
        .replace("{agent_scratchpad}", scratchpad);
    PromptBundle { system: String::new(), user }
}

fn add_usage(total: &mut Option<u64>, step: Option<u64>) {
    if let Some(n) = step {
        *total = Some(total.unwrap_or(0) + n);
    }
}

/// Drive one episode. Client/transport errors abort the episode as a hard
/// error (the caller records and retries them); model misbehavior is
/// handled inside the loop.
pub fn run_agent(
    instance: &TaskInstance,
    model: &dyn ChatModel,
    templates: &Templates,
    max_steps: usize,
) -> Result<AgentOutcome, AgentError> {
    if max_steps == 0 {
        return Err(AgentError::ZeroBudget);
    }
    let question = agent_question(instance, templates)?;
    let mut scratchpad = String::new();
    let mut outcome = AgentOutcome {
        final_answer: None,
        transcript: Vec::new(),
        prompt_tokens: None,
        completion_tokens: None,
        abort: None,
    };
    let mut consecutive_failures = 0usize;

    for _ in 0..max_steps {
        let prompt = render_agent_prompt(&question, &scratchpad);
        let completion = model.complete(&prompt)?;
        add_usage(&mut outcome.prompt_tokens, completion.prompt_tokens);
        add_usage(&mut outcome.completion_tokens, completion.completion_tokens);

        let mut step = parse_react_step(&completion.text);
        match &step.body {
            StepBody::FinalAnswer(answer) => {
                outcome.final_answer = Some(answer.clone());
                outcome.transcript.push(step);
                return Ok(outcome);
            }
            StepBody::Action { name, input } => {
                consecutive_failures = 0;
                let observation = call_tool(name, input);
                scratchpad.push_str(completion.text.trim_end());
                scratchpad.push_str("\nObservation: ");
                scratchpad.push_str(&observation);
                scratchpad.push_str("\nThought:");
                step.observation = Some(observation);
                outcome.transcript.push(step);
            }
            StepBody::ParseFailure(reason) => {
                consecutive_failures += 1;
                let observation = format!(
                    "Error: could not parse the response ({reason}). Reply with either an \
                     Action line naming one of [{}] followed by an Action Input dictionary, \
                     or a Final Answer line.",
                    tool_names()
                );
                scratchpad.push_str(completion.text.trim_end());
                scratchpad.push_str("\nObservation: ");
                scratchpad.push_str(&observation);
                scratchpad.push_str("\nThought:");
                step.observation = Some(observation);
                outcome.transcript.push(step);
                if consecutive_failures >= 2 {
                    outcome.abort = Some(AbortReason::RepeatedParseFailure);
                    return Ok(outcome);
                }
            }
        }
    }
    outcome.abort = Some(AbortReason::StepBudget);
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prompt_carries_the_wire_contract() {
        let p = render_agent_prompt("What is 2 + 2?", "");
        assert!(p.system.is_empty());
        assert!(p.user.starts_with("You are a tool-using assistant for dynamic graph analysis."));
        assert!(p.user.contains("CRITICAL RULES FOR TOOL USAGE:"));
        assert!(p.user.contains("Use EXACTLY ONE tool - NEVER call multiple tools."));
        assert!(p.user.contains("a list of 4-element arrays"));
        assert!(p.user.contains("maps motif name to a nested object"));
        assert!(p.user.contains("Begin!"));
        assert!(p.user.contains("Question: What is 2 + 2?"));
        assert!(p.user.trim_end().ends_with("Thought:"));
        for tool in &crate::tools::REGISTRY {
            assert!(p.user.contains(tool.name));
        }
        // No unexpanded placeholders left behind.
        for ph in ["{tools}", "{tool_names}", "{input}", "{agent_scratchpad}"] {
            assert!(!p.user.contains(ph), "{ph} not substituted");
        }
    }

    #[test]
    fn scratchpad_is_appended_after_the_thought_cue() {
        let p = render_agent_prompt("q", " first thought\nAction: X");
        assert!(p.user.contains("Thought: first thought\nAction: X"));
    }
}
