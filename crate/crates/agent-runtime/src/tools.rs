//! The five motif tools and their wire contract.
//!
//! Every tool takes a dictionary input with an `edge_list` (the dynamic
//! graph as 4-element arrays) plus either a `motif_list` (one query
//! motif) or `motif_definitions` (the full name → {edge_pattern,
//! time_window} map). Observations are plain text in exactly the shape
//! the corresponding benchmark answers use, so a model that copies the
//! observation verbatim into its Final Answer scores correctly.
//!
//! Invalid inputs never panic: they come back as `Error: ...` observation
//! text naming the schema path that failed, giving the model a repair
//! signal.

use std::fmt::Write as _;

use dygraph_core::{format_events, DynamicGraph, EdgeEvent, Op};
use motif_engine::{
    construct_completion, detect, multi_count, multi_detect, multi_first_occurrence, MotifDef,
    MotifPattern,
};
use serde_json::Value;

/// Static description of one tool: its name, the parameters it accepts
/// (name → schema text), and a one-line description for the agent prompt.
#[derive(Debug, Clone, Copy)]
pub struct ToolSpec {
    pub name: &'static str,
    pub description: &'static str,
    /// (parameter name, schema text) pairs.
    pub params: &'static [(&'static str, &'static str)],
}

const EDGE_LIST_SCHEMA: &str =
    "a list of 4-element arrays (u, v, t, operation); u, v, t are integers, operation is \"a\" or \"d\"";
const MOTIF_MAP_SCHEMA: &str =
    "a dictionary that maps motif name to a nested object containing its edge_pattern and time_window";

/// The fixed registry of the five tools.
pub const REGISTRY: [ToolSpec; 5] = [
    ToolSpec {
        name: "Motif_Detection",
        description: "Determine whether the dynamic graph contains the given temporal motif. Returns Yes or No.",
        params: &[("edge_list", EDGE_LIST_SCHEMA), ("motif_list", MOTIF_MAP_SCHEMA)],
    },
    ToolSpec {
        name: "Motif_Construction",
        description: "Find one added edge whose insertion makes the dynamic graph contain the given temporal motif. Returns the edit as [(u, v, t, a)].",
        params: &[("edge_list", EDGE_LIST_SCHEMA), ("motif_list", MOTIF_MAP_SCHEMA)],
    },
    ToolSpec {
        name: "Multi_Motif_Detection",
        description: "Determine which of the defined temporal motifs are present in the dynamic graph. Returns the present motif names.",
        params: &[("edge_list", EDGE_LIST_SCHEMA), ("motif_definitions", MOTIF_MAP_SCHEMA)],
    },
    ToolSpec {
        name: "Motif_Occurrence_Prediction",
        description: "For each defined temporal motif present in the dynamic graph, report the time of its first occurrence. Returns [(motif name, time), ...].",
        params: &[("edge_list", EDGE_LIST_SCHEMA), ("motif_definitions", MOTIF_MAP_SCHEMA)],
    },
    ToolSpec {
        name: "Multi_Motif_Count",
        description: "Count how many times each defined temporal motif appears in the dynamic graph. Returns [(motif name, count), ...].",
        params: &[("edge_list", EDGE_LIST_SCHEMA), ("motif_definitions", MOTIF_MAP_SCHEMA)],
    },
];

/// The `{tools}` block of the agent prompt: one "name: description" line
/// per tool, with its parameter names.
pub fn render_tool_lines() -> String {
    let mut out = String::new();
    for (i, tool) in REGISTRY.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let params: Vec<&str> = tool.params.iter().map(|(n, _)| *n).collect();
        let _ = write!(
            out,
            "{}: {} Parameters: {}.",
            tool.name,
            tool.description,
            params.join(", ")
        );
    }
    out
}

/// The `{tool_names}` list of the agent prompt.
pub fn tool_names() -> String {
    REGISTRY.iter().map(|t| t.name).collect::<Vec<_>>().join(", ")
}

#[derive(Debug, thiserror::Error)]
enum ToolError {
    #[error("unknown tool {name:?}; available tools: {available}")]
    UnknownTool { name: String, available: String },
    #[error("Action Input must be a dictionary of tool parameters")]
    NotADict,
    #[error("missing required parameter {0:?}")]
    MissingParam(&'static str),
    #[error("invalid value at '{path}': expected {expected}")]
    Schema { path: String, expected: String },
}

/// Execute `name` on `input`, returning the observation text. Errors are
/// returned as observation text too (prefixed `Error:`), never panics —
/// they are fed back to the model.
pub fn call_tool(name: &str, input: &Value) -> String {
    match dispatch(name, input) {
        Ok(observation) => observation,
        Err(e) => format!("Error: {e}"),
    }
}

fn dispatch(name: &str, input: &Value) -> Result<String, ToolError> {
    let spec = REGISTRY
        .iter()
        .find(|t| t.name.eq_ignore_ascii_case(name.trim()))
        .ok_or_else(|| ToolError::UnknownTool {
            name: name.trim().to_owned(),
            available: tool_names(),
        })?;
    let dict = input.as_object().ok_or(ToolError::NotADict)?;
    let events = parse_edge_list(
        dict.get("edge_list").ok_or(ToolError::MissingParam("edge_list"))?,
    )?;
    let g = DynamicGraph::new(events);

    match spec.name {
        "Motif_Detection" => {
            let pattern = parse_single_motif(dict)?;
            Ok(if detect(&g, &pattern) { "Yes" } else { "No" }.to_owned())
        }
        "Motif_Construction" => {
            let pattern = parse_single_motif(dict)?;
            Ok(match construct_completion(&g, &pattern) {
                Some(edit) => format_events(&[edit]),
                None => "No valid single-edge completion exists.".to_owned(),
            })
        }
        "Multi_Motif_Detection" => {
            let patterns = parse_motif_map(dict, "motif_definitions")?;
            let present: Vec<String> = multi_detect(&g, &patterns)
                .into_iter()
                .filter(|(_, p)| *p)
                .map(|(n, _)| n)
                .collect();
            Ok(if present.is_empty() { "[]".to_owned() } else { present.join(", ") })
        }
        "Motif_Occurrence_Prediction" => {
            let patterns = parse_motif_map(dict, "motif_definitions")?;
            Ok(format_name_ints(
                multi_first_occurrence(&g, &patterns).into_iter(),
            ))
        }
        "Multi_Motif_Count" => {
            let patterns = parse_motif_map(dict, "motif_definitions")?;
            Ok(format_name_ints(multi_count(&g, &patterns).into_iter()))
        }
        _ => unreachable!("registry names are exhaustive"),
    }
}

fn format_name_ints(entries: impl Iterator<Item = (String, u64)>) -> String {
    let parts: Vec<String> = entries.map(|(n, v)| format!("({n}, {v})")).collect();
    format!("[{}]", parts.join(", "))
}

fn parse_edge_list(value: &Value) -> Result<Vec<EdgeEvent>, ToolError> {
    let schema = |path: String, expected: &str| ToolError::Schema {
        path,
        expected: expected.to_owned(),
    };
    let rows = value
        .as_array()
        .ok_or_else(|| schema("edge_list".into(), "a list of 4-element arrays"))?;
    let mut events = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let path = format!("edge_list[{i}]");
        let tuple = row
            .as_array()
            .filter(|t| t.len() == 4)
            .ok_or_else(|| schema(path.clone(), "a 4-element array (u, v, t, operation)"))?;
        let int_at = |j: usize, what: &str| {
            as_integer(&tuple[j]).ok_or_else(|| {
                schema(format!("{path}[{j}]"), &format!("{what} as a non-negative integer"))
            })
        };
        let u = int_at(0, "node u")?;
        let v = int_at(1, "node v")?;
        let t = int_at(2, "time t")?;
        let op = match tuple[3].as_str().map(str::trim) {
            Some("a") => Op::Add,
            Some("d") => Op::Delete,
            _ => return Err(schema(format!("{path}[3]"), "operation \"a\" or \"d\"")),
        };
        if u == v {
            return Err(schema(path, "distinct endpoints (self-loops are not allowed)"));
        }
        events.push(EdgeEvent { u, v, t, op });
    }
    Ok(events)
}

/// Accept JSON integers and integer-looking strings (models quote numbers
/// surprisingly often).
fn as_integer(v: &Value) -> Option<u64> {
    match v {
        Value::Number(n) => n.as_u64(),
        Value::String(s) => s.trim().parse().ok(),
        _ => None,
    }
}

/// `motif_list` for the single-motif tools: exactly one entry.
fn parse_single_motif(
    dict: &serde_json::Map<String, Value>,
) -> Result<MotifPattern, ToolError> {
    let mut patterns = parse_motif_map(dict, "motif_list")?;
    if patterns.len() != 1 {
        return Err(ToolError::Schema {
            path: "motif_list".into(),
            expected: format!("exactly one motif, got {}", patterns.len()),
        });
    }
    Ok(patterns.pop().expect("length checked"))
}

/// A name → {edge_pattern, time_window} map under `key`, validated into
/// motif patterns. Every error names the exact path that failed.
fn parse_motif_map(
    dict: &serde_json::Map<String, Value>,
    key: &'static str,
) -> Result<Vec<MotifPattern>, ToolError> {
    let schema = |path: String, expected: String| ToolError::Schema { path, expected };
    let value = dict.get(key).ok_or(ToolError::MissingParam(key))?;
    let map = value.as_object().ok_or_else(|| {
        schema(key.into(), MOTIF_MAP_SCHEMA.to_owned())
    })?;
    if map.is_empty() {
        return Err(schema(key.into(), "at least one motif entry".to_owned()));
    }
    let mut patterns = Vec::with_capacity(map.len());
    for (name, entry) in map {
        let base = format!("{key}.{name}");
        let spec = entry.as_object().ok_or_else(|| {
            schema(base.clone(), "an object with edge_pattern and time_window".to_owned())
        })?;
        let time_window = spec
            .get("time_window")
            .ok_or_else(|| schema(format!("{base}.time_window"), "a required field".to_owned()))
            .and_then(|v| {
                as_integer(v).ok_or_else(|| {
                    schema(format!("{base}.time_window"), "a non-negative integer".to_owned())
                })
            })?;
        let rows = spec
            .get("edge_pattern")
            .and_then(Value::as_array)
            .ok_or_else(|| {
                schema(format!("{base}.edge_pattern"), "a list of 4-element arrays".to_owned())
            })?;
        let mut edge_pattern = Vec::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            let row_path = format!("{base}.edge_pattern[{i}]");
            let tuple = row.as_array().filter(|t| t.len() == 4).ok_or_else(|| {
                schema(row_path.clone(), "a 4-element array (u0, u1, t0, operation)".to_owned())
            })?;
            let tok_at = |j: usize| -> Result<String, ToolError> {
                match &tuple[j] {
                    Value::String(s) => Ok(s.trim().to_owned()),
                    other => Err(schema(
                        format!("{row_path}[{j}]"),
                        format!("a symbol string like \"u0\" or \"t0\", got {other}"),
                    )),
                }
            };
            edge_pattern.push([tok_at(0)?, tok_at(1)?, tok_at(2)?, tok_at(3)?]);
        }
        let def = MotifDef { name: name.clone(), edge_pattern, time_window };
        let pattern = def.to_pattern().map_err(|e| {
            schema(format!("{base}.edge_pattern"), e.to_string())
        })?;
        patterns.push(pattern);
    }
    Ok(patterns)
}
