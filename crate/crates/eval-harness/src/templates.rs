//! Prompt text assets. The defaults are compiled into the binary from
//! `templates/`; a directory override lets the wording be edited without a
//! rebuild (any file absent from the directory keeps its default).

use std::collections::BTreeMap;
use std::path::Path;

use bench_gen::TaskKind;

use crate::HarnessError;

macro_rules! default_templates {
    ($($name:literal),* $(,)?) => {
        [$(($name, include_str!(concat!("../templates/", $name, ".txt")))),*]
    };
}

const DEFAULTS: [(&str, &str); 30] = default_templates![
    "dyg_instruction",
    "motif_instruction",
    "cot_extension",
    "motif_list_header",
    "task_classification",
    "task_detection",
    "task_construction",
    "task_multi_detect",
    "task_occurrence",
    "task_multi_count",
    "task_level0_sort_edge",
    "task_level0_when_link_dislink",
    "task_level0_what_edges",
    "task_level0_reverse_graph",
    "answer_yes_no",
    "answer_edits",
    "answer_names",
    "answer_name_int_tuples",
    "answer_int_pair",
    "answer_node_pairs",
    "exemplar_classification",
    "exemplar_detection",
    "exemplar_construction",
    "exemplar_multi_detect",
    "exemplar_occurrence",
    "exemplar_multi_count",
    "exemplar_level0_sort_edge",
    "exemplar_level0_when_link_dislink",
    "exemplar_level0_what_edges",
    "exemplar_level0_reverse_graph",
];

#[derive(Debug, Clone)]
pub struct Templates {
    texts: BTreeMap<String, String>,
}

impl Default for Templates {
    fn default() -> Self {
        Templates {
            texts: DEFAULTS
                .iter()
                .map(|&(name, text)| (name.to_owned(), text.trim_end().to_owned()))
                .collect(),
        }
    }
}

impl Templates {
    /// Defaults, with any `<name>.txt` found in `dir` replacing its entry.
    pub fn with_overrides(dir: &Path) -> Result<Self, HarnessError> {
        let mut t = Templates::default();
        for name in DEFAULTS.iter().map(|&(n, _)| n) {
            let path = dir.join(format!("{name}.txt"));
            if path.is_file() {
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| HarnessError::Template(format!("{}: {e}", path.display())))?;
                t.texts.insert(name.to_owned(), text.trim_end().to_owned());
            }
        }
        Ok(t)
    }

    pub fn get(&self, name: &str) -> Result<&str, HarnessError> {
        self.texts
            .get(name)
            .map(String::as_str)
            .ok_or_else(|| HarnessError::Template(format!("no template named {name:?}")))
    }

    pub fn task_instruction(&self, task: TaskKind) -> Result<&str, HarnessError> {
        self.get(&format!("task_{}", task.as_str()))
    }

    pub fn answer_instruction(&self, task: TaskKind) -> Result<&str, HarnessError> {
        let name = match task {
            TaskKind::Classification | TaskKind::Detection => "answer_yes_no",
            TaskKind::Construction
            | TaskKind::Level0SortEdge
            | TaskKind::Level0ReverseGraph => "answer_edits",
            TaskKind::MultiDetect => "answer_names",
            TaskKind::Occurrence | TaskKind::MultiCount => "answer_name_int_tuples",
            TaskKind::Level0WhenLinkDislink => "answer_int_pair",
            TaskKind::Level0WhatEdges => "answer_node_pairs",
        };
        self.get(name)
    }

    /// The exemplar block for one-shot prompting. `with_reasoning` keeps
    /// the `[[COT]] … [[/COT]]` section; otherwise it is stripped.
    pub fn exemplar(&self, task: TaskKind, with_reasoning: bool) -> Result<String, HarnessError> {
        let raw = self.get(&format!("exemplar_{}", task.as_str()))?;
        Ok(strip_cot_markers(raw, with_reasoning))
    }
}

fn strip_cot_markers(raw: &str, keep_body: bool) -> String {
    let (Some(open), Some(close)) = (raw.find("[[COT]]"), raw.find("[[/COT]]")) else {
        return raw.trim().to_owned();
    };
    let head = raw[..open].trim();
    let body = raw[open + "[[COT]]".len()..close].trim();
    let tail = raw[close + "[[/COT]]".len()..].trim();
    let mut parts = vec![head];
    if keep_body {
        parts.push(body);
    }
    parts.push(tail);
    parts.retain(|p| !p.is_empty());
    parts.join("\n\n")
}
