//! Benchmark execution: render → complete → parse → score, fanned out
//! over worker threads, with an append-only JSONL record stream and a
//! CSV summary. Runs are resumable: ids that already have an answered
//! record are skipped; errored ids (no answer) are retried.

use std::collections::BTreeMap;
use std::io::Write as _;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{mpsc, Arc};

use bench_gen::{TaskInstance, TaskKind};
use serde::{Deserialize, Serialize};

use crate::client::{llm_complete, EndpointConfig};
use crate::parse::{parse_answer, ParsedAnswer};
use crate::prompt::{render_prompt, Strategy};
use crate::score::score_instance;
use crate::templates::Templates;
use crate::HarnessError;

/// One line of the run output. `answer_raw = null` marks an errored call
/// (retried on resume); a parse failure still carries its raw text.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub id: String,
    pub task: TaskKind,
    pub motif: Option<String>,
    pub answer_raw: Option<String>,
    pub parsed: Option<ParsedAnswer>,
    pub score: f64,
    pub prompt_tokens: Option<u64>,
    pub completion_tokens: Option<u64>,
    pub latency_ms: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub task: String,
    pub motif: String,
    pub accuracy: f64,
    pub avg_tokens: Option<f64>,
}

#[derive(Debug)]
pub struct RunReport {
    /// One record per instance id (the latest attempt wins).
    pub records: Vec<ResultRecord>,
    pub summary: Vec<SummaryRow>,
    /// Endpoint calls made by THIS invocation (0 on a completed rerun).
    pub calls_made: usize,
}

fn instance_motif(instance: &TaskInstance) -> Option<String> {
    instance.motif().map(|d| d.name.clone())
}

fn evaluate_one(
    instance: &TaskInstance,
    strategy: Strategy,
    templates: &Templates,
    endpoint: &EndpointConfig,
) -> Result<ResultRecord, HarnessError> {
    let prompt = render_prompt(instance, strategy, templates)?;
    match llm_complete(&prompt, endpoint) {
        Err(err) => {
            eprintln!("{}: endpoint error: {err}", instance.id);
            Ok(ResultRecord {
                id: instance.id.clone(),
                task: instance.task,
                motif: instance_motif(instance),
                answer_raw: None,
                parsed: None,
                score: 0.0,
                prompt_tokens: None,
                completion_tokens: None,
                latency_ms: None,
            })
        }
        Ok(completion) => {
            let parsed = parse_answer(&completion.text, instance.task);
            let score = score_instance(instance, &parsed)?;
            Ok(ResultRecord {
                id: instance.id.clone(),
                task: instance.task,
                motif: instance_motif(instance),
                answer_raw: Some(completion.text),
                parsed: Some(parsed),
                score: score.value,
                prompt_tokens: completion.prompt_tokens,
                completion_tokens: completion.completion_tokens,
                latency_ms: Some(completion.latency_ms),
            })
        }
    }
}

/// Run the benchmark over `instances`, appending records to `out_path`
/// (which may already contain records from an interrupted run).
pub fn run_benchmark(
    instances: &[TaskInstance],
    strategy: Strategy,
    templates: &Templates,
    endpoint: &EndpointConfig,
    concurrency: usize,
    out_path: &Path,
) -> Result<RunReport, HarnessError> {
    let mut by_id: BTreeMap<String, ResultRecord> = BTreeMap::new();
    if out_path.exists() {
        for record in dygraph_core::read_jsonl::<ResultRecord>(out_path)? {
            by_id.insert(record.id.clone(), record);
        }
    }
    let pending: Vec<TaskInstance> = instances
        .iter()
        .filter(|i| by_id.get(&i.id).map_or(true, |r| r.answer_raw.is_none()))
        .cloned()
        .collect();

    if let Some(parent) = out_path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    let mut out = std::fs::OpenOptions::new().create(true).append(true).open(out_path)?;

    let calls_made = pending.len();
    let workers = concurrency.max(1).min(pending.len().max(1));
    let pending = Arc::new(pending);
    let next = Arc::new(AtomicUsize::new(0));
    let (tx, rx) = mpsc::channel::<Result<ResultRecord, HarnessError>>();

    std::thread::scope(|scope| -> Result<(), HarnessError> {
        for _ in 0..workers {
            let pending = Arc::clone(&pending);
            let next = Arc::clone(&next);
            let tx = tx.clone();
            let endpoint = endpoint.clone();
            let templates = templates.clone();
            scope.spawn(move || loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(instance) = pending.get(i) else { break };
                let outcome = evaluate_one(instance, strategy, &templates, &endpoint);
                if tx.send(outcome).is_err() {
                    break;
                }
            });
        }
        drop(tx);

        for outcome in rx {
            let record = outcome?;
            let mut line = serde_json::to_string(&record)
                .map_err(|e| HarnessError::BadInstance(e.to_string()))?;
            line.push('\n');
            out.write_all(line.as_bytes())?;
            out.flush()?;
            by_id.insert(record.id.clone(), record);
        }
        Ok(())
    })?;

    let records: Vec<ResultRecord> = by_id.into_values().collect();
    let summary = summary_rows(&records);
    Ok(RunReport { records, summary, calls_made })
}

/// Aggregate records into `task,motif` rows: mean score and mean total
/// tokens (over records that reported usage; `None` when none did).
pub fn summary_rows(records: &[ResultRecord]) -> Vec<SummaryRow> {
    let mut groups: BTreeMap<(String, String), Vec<&ResultRecord>> = BTreeMap::new();
    for r in records {
        let key = (r.task.as_str().to_owned(), r.motif.clone().unwrap_or_else(|| "-".into()));
        groups.entry(key).or_default().push(r);
    }
    groups
        .into_iter()
        .map(|((task, motif), rs)| {
            let accuracy = rs.iter().map(|r| r.score).sum::<f64>() / rs.len() as f64;
            let with_usage: Vec<u64> = rs
                .iter()
                .filter(|r| r.prompt_tokens.is_some() || r.completion_tokens.is_some())
                .map(|r| r.prompt_tokens.unwrap_or(0) + r.completion_tokens.unwrap_or(0))
                .collect();
            let avg_tokens = (!with_usage.is_empty())
                .then(|| with_usage.iter().sum::<u64>() as f64 / with_usage.len() as f64);
            SummaryRow { task, motif, accuracy, avg_tokens }
        })
        .collect()
}

/// `task,motif,accuracy,avg_tokens` with four-decimal accuracy; the token
/// column is empty when no record reported usage.
pub fn write_summary_csv(rows: &[SummaryRow], path: &Path) -> Result<(), HarnessError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["task", "motif", "accuracy", "avg_tokens"])?;
    for row in rows {
        w.write_record([
            row.task.as_str(),
            row.motif.as_str(),
            &format!("{:.4}", row.accuracy),
            &row.avg_tokens.map(|t| format!("{t:.1}")).unwrap_or_default(),
        ])?;
    }
    w.flush().map_err(HarnessError::Io)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(id: &str, task: TaskKind, motif: Option<&str>, score: f64) -> ResultRecord {
        ResultRecord {
            id: id.into(),
            task,
            motif: motif.map(Into::into),
            answer_raw: Some("Answer: Yes".into()),
            parsed: Some(ParsedAnswer::Bool(true)),
            score,
            prompt_tokens: Some(100),
            completion_tokens: Some(10),
            latency_ms: Some(5),
        }
    }

    #[test]
    fn summary_groups_by_task_and_motif() {
        let records = vec![
            record("a", TaskKind::Detection, Some("triangle"), 1.0),
            record("b", TaskKind::Detection, Some("triangle"), 0.0),
            record("c", TaskKind::MultiCount, None, 0.5),
        ];
        let rows = summary_rows(&records);
        assert_eq!(rows.len(), 2);
        let det = rows.iter().find(|r| r.task == "detection").unwrap();
        assert_eq!(det.motif, "triangle");
        assert!((det.accuracy - 0.5).abs() < 1e-12);
        assert_eq!(det.avg_tokens, Some(110.0));
        let count = rows.iter().find(|r| r.task == "multi_count").unwrap();
        assert_eq!(count.motif, "-");
    }

    #[test]
    fn summary_omits_tokens_when_usage_is_unknown() {
        let mut r = record("a", TaskKind::Detection, Some("triangle"), 1.0);
        r.prompt_tokens = None;
        r.completion_tokens = None;
        let rows = summary_rows(&[r]);
        assert_eq!(rows[0].avg_tokens, None);
    }

    #[test]
    fn result_record_wire_format_has_all_keys() {
        let r = record("x", TaskKind::Detection, Some("triangle"), 1.0);
        let json = serde_json::to_string(&r).unwrap();
        for key in [
            "\"id\"",
            "\"task\"",
            "\"motif\"",
            "\"answer_raw\"",
            "\"parsed\"",
            "\"score\"",
            "\"prompt_tokens\"",
            "\"completion_tokens\"",
            "\"latency_ms\"",
        ] {
            assert!(json.contains(key), "{key} missing from {json}");
        }
        let mut errored = r.clone();
        errored.answer_raw = None;
        errored.parsed = None;
        let json = serde_json::to_string(&errored).unwrap();
        assert!(json.contains("\"answer_raw\":null"));
    }
}
