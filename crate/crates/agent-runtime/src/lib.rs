//! ReAct tool-calling runtime for temporal-motif analysis.
//!
//! A fixed registry of five motif tools (detection, construction, and the
//! three multi-motif queries) exposes the exact wire contract the agent
//! prompt describes; a step loop drives any chat-completions model
//! against them. Scripted drivers make the whole loop testable offline.

pub mod agent;
pub mod literal;
pub mod react;
pub mod run;
pub mod scripted;
pub mod tools;

pub use agent::{
    agent_question, render_agent_prompt, run_agent, AbortReason, AgentError, AgentOutcome,
    ChatModel, EndpointModel, DEFAULT_MAX_STEPS,
};
pub use literal::parse_dict_literal;
pub use react::{parse_react_step, ReactStep, StepBody};
pub use run::run_agent_benchmark;
pub use scripted::{oracle_action_input, oracle_script, tool_for_task, ScriptTurn, ScriptedModel};
pub use tools::{call_tool, render_tool_lines, tool_names, ToolSpec, REGISTRY};
