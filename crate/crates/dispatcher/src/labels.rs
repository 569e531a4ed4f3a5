//! Building the difficulty-label dataset: one row per instance with a
//! direct-run result, labeled hard = 1 iff the direct path answered
//! incorrectly.

use std::collections::BTreeMap;
use std::path::Path;

use bench_gen::TaskInstance;
use eval_harness::ResultRecord;

use crate::features::{extract_features, FEATURE_NAMES};
use crate::DispatchError;

pub const LABEL_HEADER: &str = "num_edges,cyclomatic,ratio_eq_2,ratio_ge_3,edge_locality,label";

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledRow {
    pub features: [f64; 5],
    /// 1 = hard (direct path wrong), 0 = easy.
    pub label: u8,
}

#[derive(Debug)]
pub struct LabelDataset {
    pub rows: Vec<LabeledRow>,
    /// Instances without a usable (answered) direct-run record.
    pub skipped: usize,
    /// Motif names seen, for model metadata.
    pub motifs: Vec<String>,
}

/// Join instances with their direct-run records. Records with no answer
/// (transport errors) carry no correctness signal and are skipped — the
/// count is surfaced so callers can warn.
pub fn build_label_dataset(
    instances: &[TaskInstance],
    records: &[ResultRecord],
) -> LabelDataset {
    let by_id: BTreeMap<&str, &ResultRecord> = records
        .iter()
        .filter(|r| r.answer_raw.is_some())
        .map(|r| (r.id.as_str(), r))
        .collect();
    let mut rows = Vec::with_capacity(instances.len());
    let mut skipped = 0usize;
    let mut motifs: Vec<String> = Vec::new();
    for instance in instances {
        let Some(record) = by_id.get(instance.id.as_str()) else {
            skipped += 1;
            continue;
        };
        let features = extract_features(&instance.dynamic_graph()).to_array();
        rows.push(LabeledRow { features, label: u8::from(record.score < 1.0) });
        if let Some(def) = instance.motif() {
            if !motifs.contains(&def.name) {
                motifs.push(def.name.clone());
            }
        }
    }
    LabelDataset { rows, skipped, motifs }
}

pub fn write_labels_csv(rows: &[LabeledRow], path: &Path) -> Result<(), DispatchError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(LABEL_HEADER.split(','))?;
    for row in rows {
        let mut record: Vec<String> = row.features.iter().map(|f| format!("{f}")).collect();
        record.push(row.label.to_string());
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_labels_csv(path: &Path) -> Result<Vec<LabeledRow>, DispatchError> {
    let mut reader = csv::Reader::from_path(path)?;
    {
        let headers = reader.headers()?;
        let expected: Vec<&str> = LABEL_HEADER.split(',').collect();
        if headers.iter().collect::<Vec<_>>() != expected {
            return Err(DispatchError::Model(format!(
                "unexpected label CSV header {:?}; expected {LABEL_HEADER:?}",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
    }
    let mut rows = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        let parse = |i: usize| -> Result<f64, DispatchError> {
            record
                .get(i)
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| {
                    DispatchError::Model(format!(
                        "bad value in column {:?} on data row {line}",
                        FEATURE_NAMES.get(i).copied().unwrap_or("label")
                    ))
                })
        };
        let features = [parse(0)?, parse(1)?, parse(2)?, parse(3)?, parse(4)?];
        let label = parse(5)? as u8;
        if label > 1 {
            return Err(DispatchError::Model(format!("label on data row {line} is not 0/1")));
        }
        rows.push(LabeledRow { features, label });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use bench_gen::{gen_dataset, TaskKind};
    use eval_harness::ParsedAnswer;

    fn record(id: &str, score: f64, answered: bool) -> ResultRecord {
        ResultRecord {
            id: id.to_owned(),
            task: TaskKind::Detection,
            motif: Some("triangle".to_owned()),
            answer_raw: answered.then(|| "Answer: Yes".to_owned()),
            parsed: answered.then_some(ParsedAnswer::Bool(true)),
            score,
            prompt_tokens: None,
            completion_tokens: None,
            latency_ms: None,
        }
    }

    #[test]
    fn labels_follow_direct_correctness_and_missing_records_are_skipped() {
        let instances = gen_dataset(TaskKind::Detection, Some("triangle"), 4, 900).unwrap();
        let records = vec![
            record(&instances[0].id, 1.0, true),
            record(&instances[1].id, 0.0, true),
            record(&instances[2].id, 0.0, false), // errored: no signal
        ];
        let ds = build_label_dataset(&instances, &records);
        assert_eq!(ds.rows.len(), 2);
        assert_eq!(ds.rows[0].label, 0);
        assert_eq!(ds.rows[1].label, 1);
        assert_eq!(ds.skipped, 2, "one errored + one absent");
        assert_eq!(ds.motifs, vec!["triangle".to_owned()]);
    }

    #[test]
    fn all_correct_run_gives_all_easy_labels() {
        let instances = gen_dataset(TaskKind::Detection, Some("triangle"), 5, 910).unwrap();
        let records: Vec<ResultRecord> =
            instances.iter().map(|i| record(&i.id, 1.0, true)).collect();
        let ds = build_label_dataset(&instances, &records);
        assert_eq!(ds.rows.len(), 5);
        assert!(ds.rows.iter().all(|r| r.label == 0));
        assert_eq!(ds.skipped, 0);
    }

    #[test]
    fn csv_round_trips_with_the_fixed_header() {
        let rows = vec![
            LabeledRow { features: [4.0, 0.0, 0.0, 1.0 / 6.0, 1.2472], label: 1 },
            LabeledRow { features: [3.0, 1.0, 1.0, 0.0, 0.816496580927726], label: 0 },
        ];
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("labels.csv");
        write_labels_csv(&rows, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with(LABEL_HEADER), "{text}");
        let back = read_labels_csv(&path).unwrap();
        assert_eq!(back, rows);
    }
}
