//! Parsing model output into ReAct steps.
//!
//! A step is the model's continuation after "Thought:": it either calls a
//! tool (Action + Action Input) or terminates with a Final Answer. Models
//! restate earlier turns, so extraction always works on the LAST block in
//! the text, and a Final Answer anywhere after the last Action wins — it
//! is terminal by contract.

use serde_json::Value;

use crate::literal::parse_dict_literal;

/// One parsed step of the loop. The observation is filled in by the
/// runtime after executing the action; it stays `None` for terminal and
/// unparseable steps.
#[derive(Debug, Clone, PartialEq)]
pub struct ReactStep {
    /// Thought text preceding the action/answer (may be empty).
    pub thought: String,
    pub body: StepBody,
    pub observation: Option<String>,
    /// The raw model text this step was parsed from.
    pub raw: String,
}

/// What the model decided to do — exactly one of a tool call or a final
/// answer; anything else is a parse failure with a reason.
#[derive(Debug, Clone, PartialEq)]
pub enum StepBody {
    Action { name: String, input: Value },
    FinalAnswer(String),
    ParseFailure(String),
}

/// Byte-wise ASCII-case-insensitive search; markers are pure ASCII so a
/// match offset is always a char boundary.
fn rfind_marker(text: &str, marker: &str) -> Option<usize> {
    let (t, m) = (text.as_bytes(), marker.as_bytes());
    if m.len() > t.len() {
        return None;
    }
    (0..=t.len() - m.len()).rev().find(|&i| t[i..i + m.len()].eq_ignore_ascii_case(m))
}

fn find_marker(text: &str, marker: &str) -> Option<usize> {
    let (t, m) = (text.as_bytes(), marker.as_bytes());
    if m.len() > t.len() {
        return None;
    }
    (0..=t.len() - m.len()).find(|&i| t[i..i + m.len()].eq_ignore_ascii_case(m))
}

/// Thought text between the last "Thought:" before `end` and `end`.
fn thought_before(text: &str, end: usize) -> String {
    match rfind_marker(&text[..end], "thought:") {
        Some(at) => text[at + "thought:".len()..end].trim().to_owned(),
        None => String::new(),
    }
}

/// Parse the last Thought/Action/Action-Input or Final-Answer block out of
/// `text`.
pub fn parse_react_step(text: &str) -> ReactStep {
    let raw = text.to_owned();
    let final_at = rfind_marker(text, "final answer:");
    let action_at = rfind_marker(text, "action:");

    // Final Answer is terminal and wins over any Action in the same text.
    if let Some(fa) = final_at {
        let tail = &text[fa + "final answer:".len()..];
        // Should the model keep going after its final answer, cut the
        // answer at the next block marker.
        let end = find_marker(tail, "\naction:")
            .into_iter()
            .chain(find_marker(tail, "\nthought:"))
            .min()
            .unwrap_or(tail.len());
        return ReactStep {
            thought: thought_before(text, fa),
            body: StepBody::FinalAnswer(tail[..end].trim().to_owned()),
            observation: None,
            raw,
        };
    }

    let Some(aa) = action_at else {
        return ReactStep {
            thought: thought_before(text, text.len()),
            body: StepBody::ParseFailure(
                "no Action or Final Answer block found".to_owned(),
            ),
            observation: None,
            raw,
        };
    };

    let after_action = &text[aa + "action:".len()..];
    let name_line = after_action.lines().next().unwrap_or("");
    let name = name_line
        .trim()
        .trim_matches(|c: char| c == '[' || c == ']' || c == '"' || c == '\'' || c == '.')
        .trim()
        .to_owned();
    let thought = thought_before(text, aa);

    let Some(input_rel) = rfind_marker(after_action, "action input:") else {
        return ReactStep {
            thought,
            body: StepBody::ParseFailure("Action without an Action Input block".to_owned()),
            observation: None,
            raw,
        };
    };
    let input_text = &after_action[input_rel + "action input:".len()..];
    let input_text = match rfind_marker(input_text, "\nobservation") {
        Some(end) => &input_text[..end],
        None => input_text,
    };
    match parse_dict_literal(input_text) {
        Some(input) if !name.is_empty() => ReactStep {
            thought,
            body: StepBody::Action { name, input },
            observation: None,
            raw,
        },
        Some(_) => ReactStep {
            thought,
            body: StepBody::ParseFailure("empty Action name".to_owned()),
            observation: None,
            raw,
        },
        None => ReactStep {
            thought,
            body: StepBody::ParseFailure(
                "Action Input is not a dictionary literal".to_owned(),
            ),
            observation: None,
            raw,
        },
    }
}
