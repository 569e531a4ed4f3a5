//! Batch agent runs mirroring the direct benchmark runner: same record
//! schema, same append-only JSONL stream, same resume semantics.
//!
//! An episode that ends without a final answer (step budget, repeated
//! parse failures) is a terminal outcome scored 0 — it is recorded with
//! the model's last raw text and NOT retried on resume. Only transport
//! errors leave `answer_raw = null` for retry.

use std::collections::BTreeMap;
use std::io::Write as _;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{mpsc, Arc};
use std::time::Instant;

use bench_gen::TaskInstance;
use eval_harness::{
    parse_answer, score_instance, summary_rows, HarnessError, ParsedAnswer, ResultRecord,
    RunReport, Templates,
};

use crate::agent::{run_agent, AgentError, ChatModel};

fn instance_motif(instance: &TaskInstance) -> Option<String> {
    instance.motif().map(|d| d.name.clone())
}

fn episode_record(
    instance: &TaskInstance,
    model: &dyn ChatModel,
    templates: &Templates,
    max_steps: usize,
) -> Result<ResultRecord, AgentError> {
    let started = Instant::now();
    let outcome = match run_agent(instance, model, templates, max_steps) {
        Ok(outcome) => outcome,
        Err(AgentError::Client(err)) => {
            eprintln!("{}: endpoint error: {err}", instance.id);
            return Ok(ResultRecord {
                id: instance.id.clone(),
                task: instance.task,
                motif: instance_motif(instance),
                answer_raw: None,
                parsed: None,
                score: 0.0,
                prompt_tokens: None,
                completion_tokens: None,
                latency_ms: None,
            });
        }
        Err(other) => return Err(other),
    };
    let latency_ms = Some(started.elapsed().as_millis() as u64);

    let (answer_raw, parsed, score) = match &outcome.final_answer {
        Some(answer) => {
            let parsed = parse_answer(&format!("Answer: {answer}"), instance.task);
            let score = score_instance(instance, &parsed)?;
            (Some(answer.clone()), parsed, score.value)
        }
        None => {
            // Unresolved: keep the model's last words for debugging, score 0.
            let last = outcome.transcript.last().map(|s| s.raw.clone()).unwrap_or_default();
            (Some(last), ParsedAnswer::ParseFailure, 0.0)
        }
    };
    Ok(ResultRecord {
        id: instance.id.clone(),
        task: instance.task,
        motif: instance_motif(instance),
        answer_raw,
        parsed: Some(parsed),
        score,
        prompt_tokens: outcome.prompt_tokens,
        completion_tokens: outcome.completion_tokens,
        latency_ms,
    })
}

/// Run agent episodes over `instances`, appending records to `out_path`.
/// `calls_made` in the report counts episodes executed by THIS invocation.
pub fn run_agent_benchmark(
    instances: &[TaskInstance],
    model: &dyn ChatModel,
    templates: &Templates,
    max_steps: usize,
    concurrency: usize,
    out_path: &Path,
) -> Result<RunReport, AgentError> {
    let mut by_id: BTreeMap<String, ResultRecord> = BTreeMap::new();
    if out_path.exists() {
        for record in
            dygraph_core::read_jsonl::<ResultRecord>(out_path).map_err(HarnessError::from)?
        {
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
            std::fs::create_dir_all(parent).map_err(HarnessError::from)?;
        }
    }
    let mut out = std::fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(out_path)
        .map_err(HarnessError::from)?;

    let calls_made = pending.len();
    let workers = concurrency.max(1).min(pending.len().max(1));
    let pending = Arc::new(pending);
    let next = Arc::new(AtomicUsize::new(0));
    let (tx, rx) = mpsc::channel::<Result<ResultRecord, AgentError>>();

    std::thread::scope(|scope| -> Result<(), AgentError> {
        for _ in 0..workers {
            let pending = Arc::clone(&pending);
            let next = Arc::clone(&next);
            let tx = tx.clone();
            scope.spawn(move || loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(instance) = pending.get(i) else { break };
                let outcome = episode_record(instance, model, templates, max_steps);
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
            out.write_all(line.as_bytes()).map_err(HarnessError::from)?;
            out.flush().map_err(HarnessError::from)?;
            by_id.insert(record.id.clone(), record);
        }
        Ok(())
    })?;

    let records: Vec<ResultRecord> = by_id.into_values().collect();
    let summary = summary_rows(&records);
    Ok(RunReport { records, summary, calls_made })
}
