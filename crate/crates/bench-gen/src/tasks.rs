//! Per-task instance generators. Every generator owns a ChaCha stream
//! seeded from the instance seed, verifies its ground truth via the motif
//! engine before emitting, and is deterministic end to end.

use dygraph_core::{DynamicGraph, EdgeEvent, NodePair, Op};
use motif_engine::{
    catalog_pattern, classify_exact, construct_completion, detect, multi_count, multi_detect,
    multi_first_occurrence, MotifDef, MotifPattern, CATALOG,
};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::graph_gen::{gen_events, rng_for, sort_canonical};
use crate::instance::{GroundTruth, Query, TaskInstance, TaskKind, ViolationTag};
use crate::params::{GenError, GenParams};
use crate::settings;

const RETRY_BUDGET: usize = 200;

fn instance_id(task: TaskKind, motif: Option<&str>, seed: u64) -> String {
    match motif {
        Some(m) => format!("{}-{}-{}", task.as_str(), m, seed),
        None => format!("{}-{}", task.as_str(), seed),
    }
}

fn lookup(motif: &str, window: u64) -> Result<MotifPattern, GenError> {
    catalog_pattern(motif, window).ok_or_else(|| GenError::UnknownMotif(motif.to_owned()))
}

/// `count` distinct values from `0..span`, sorted ascending.
fn distinct_times(rng: &mut ChaCha8Rng, span: u64, count: usize) -> Result<Vec<u64>, GenError> {
    if (span as usize) < count {
        return Err(GenError::InvalidParams(format!(
            "cannot draw {count} distinct timestamps from a span of {span}"
        )));
    }
    let mut times: Vec<u64> =
        rand::seq::index::sample(rng, span as usize, count).iter().map(|i| i as u64).collect();
    times.sort_unstable();
    Ok(times)
}

// ---------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------

/// A graph that IS the motif: its symbols mapped onto a random permutation
/// of `0..k`, with distinct increasing timestamps drawn from the span.
fn positive_motif_events(
    pattern: &MotifPattern,
    params: &GenParams,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<EdgeEvent>, GenError> {
    let mut nodes: Vec<u64> = (0..params.n).collect();
    nodes.shuffle(rng);
    let times = distinct_times(rng, params.t_span, pattern.l())?;
    Ok(pattern
        .edges()
        .iter()
        .zip(&times)
        .map(|(&(a, b), &t)| EdgeEvent::new(nodes[a], nodes[b], t, Op::Add).unwrap())
        .collect())
}

/// Exactly-one-aspect perturbations of a positive. Each returns events
/// whose violation is the named one and nothing else; the caller verifies
/// the result with the matcher.
fn perturb(
    events: &[EdgeEvent],
    pattern: &MotifPattern,
    params: &GenParams,
    tag: ViolationTag,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<EdgeEvent>, GenError> {
    let window = params.require_window()?;
    let l = events.len();
    match tag {
        ViolationTag::Structural => {
            // Rewire one endpoint of one edge to a different node; times
            // and the strictly increasing order stay untouched.
            for _ in 0..RETRY_BUDGET {
                let mut out = events.to_vec();
                let e = rng.gen_range(0..l);
                let take_u = rng.gen_bool(0.5);
                let (kept, moved) = if take_u { (out[e].v, out[e].u) } else { (out[e].u, out[e].v) };
                let choices: Vec<u64> =
                    (0..params.n).filter(|&c| c != kept && c != moved).collect();
                if choices.is_empty() {
                    break;
                }
                let new_node = choices[rng.gen_range(0..choices.len())];
                if take_u {
                    out[e].u = new_node;
                } else {
                    out[e].v = new_node;
                }
                if !classify_exact(&DynamicGraph::new(out.clone()), pattern) {
                    return Ok(out);
                }
            }
            Err(GenError::RetryBudget("rewiring a structural negative".into()))
        }
        ViolationTag::Temporal => {
            // Reassign the same timestamps to different edges. Shapes that
            // match under every distinct-time ordering (stars, triangles)
            // cannot be broken this way, so fall back to collapsing the
            // second timestamp onto the first: strict increase dies, the
            // span and the structure survive.
            let times: Vec<u64> = events.iter().map(|e| e.t).collect();
            for _ in 0..RETRY_BUDGET {
                let mut shuffled = times.clone();
                shuffled.shuffle(rng);
                let mut out = events.to_vec();
                for (ev, &t) in out.iter_mut().zip(&shuffled) {
                    ev.t = t;
                }
                out.sort_by_key(|e| e.t);
                if !classify_exact(&DynamicGraph::new(out.clone()), pattern) {
                    return Ok(out);
                }
            }
            let mut out = events.to_vec();
            out[1].t = out[0].t;
            debug_assert!(!classify_exact(&DynamicGraph::new(out.clone()), pattern));
            Ok(out)
        }
        ViolationTag::Duration => {
            // Stretch the final timestamp past the window; order is still
            // strictly increasing, the structure is untouched.
            let mut out = events.to_vec();
            let overshoot = rng.gen_range(1..=3);
            out[l - 1].t = out[0].t + window + overshoot;
            Ok(out)
        }
    }
}

/// One classification instance. Negatives are derived from the positive
/// the same seed would generate, so regenerating with `positive = true`
/// recovers the unperturbed graph.
pub fn gen_classification_instance(
    motif: &str,
    params: &GenParams,
    positive: bool,
    violation: Option<ViolationTag>,
) -> Result<TaskInstance, GenError> {
    params.validate()?;
    let window = params.require_window()?;
    let pattern = lookup(motif, window)?;
    if !positive && violation.is_none() {
        return Err(GenError::InvalidParams("negatives need a violation tag".into()));
    }

    let mut rng = rng_for(params.seed);
    let base = positive_motif_events(&pattern, params, &mut rng)?;
    let (events, violation) = if positive {
        (base, None)
    } else {
        let tag = violation.unwrap();
        (perturb(&base, &pattern, params, tag, &mut rng)?, Some(tag))
    };

    let is_motif = classify_exact(&DynamicGraph::new(events.clone()), &pattern);
    if is_motif != positive {
        return Err(GenError::RetryBudget(format!(
            "classification instance failed verification (motif {motif}, seed {})",
            params.seed
        )));
    }

    Ok(TaskInstance {
        id: instance_id(TaskKind::Classification, Some(motif), params.seed),
        task: TaskKind::Classification,
        graph: events,
        motifs: vec![MotifDef::from_pattern(&pattern)],
        query: None,
        ground_truth: GroundTruth::Bool { value: positive },
        gen: *params,
        violation,
    })
}

// ---------------------------------------------------------------------
// Detection
// ---------------------------------------------------------------------

/// Natural generation, no forcing: the label is whatever the matcher says.
pub fn gen_detection_instance(motif: &str, params: &GenParams) -> Result<TaskInstance, GenError> {
    params.validate()?;
    let pattern = lookup(motif, params.require_window()?)?;
    let mut rng = rng_for(params.seed);
    let events = gen_events(params, &mut rng);
    let value = detect(&DynamicGraph::new(events.clone()), &pattern);
    Ok(TaskInstance {
        id: instance_id(TaskKind::Detection, Some(motif), params.seed),
        task: TaskKind::Detection,
        graph: events,
        motifs: vec![MotifDef::from_pattern(&pattern)],
        query: None,
        ground_truth: GroundTruth::Bool { value },
        gen: *params,
        violation: None,
    })
}

// ---------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------

/// ER background plus an implanted prefix (the motif minus its final
/// edge), retried until the complete motif is absent. The stored answer is
/// the engine's canonical completion; present-after-insert is asserted.
pub fn gen_construction_instance(
    motif: &str,
    params: &GenParams,
) -> Result<TaskInstance, GenError> {
    params.validate()?;
    let window = params.require_window()?;
    let pattern = lookup(motif, window)?;
    let l = pattern.l();
    if l < 2 {
        return Err(GenError::InvalidParams("construction needs l >= 2".into()));
    }
    if params.n < pattern.k() as u64 {
        return Err(GenError::InvalidParams("n smaller than the motif".into()));
    }
    let mut rng = rng_for(params.seed);

    for _ in 0..RETRY_BUDGET {
        let mut events = gen_events(params, &mut rng);

        // Implant mapping and l-1 strictly increasing times that leave at
        // least one tick of the window unused, so completion stays open.
        let nodes: Vec<u64> = rand::seq::index::sample(&mut rng, params.n as usize, pattern.k())
            .iter()
            .map(|i| i as u64)
            .collect();
        let times = loop {
            let t = distinct_times(&mut rng, params.t_span, l - 1)?;
            if t[l - 2] - t[0] < window {
                break t;
            }
        };
        for (&(a, b), &t) in pattern.edges()[..l - 1].iter().zip(&times) {
            events.push(EdgeEvent::new(nodes[a], nodes[b], t, Op::Add).unwrap());
        }
        sort_canonical(&mut events);

        let g = DynamicGraph::new(events.clone());
        if detect(&g, &pattern) {
            continue; // complete motif arose naturally; need it absent
        }
        let completion = construct_completion(&g, &pattern)
            .expect("implanted prefix leaves room, a completion must exist");
        let mut completed = events.clone();
        completed.push(completion);
        assert!(
            detect(&DynamicGraph::new(completed), &pattern),
            "canonical completion must verify"
        );
        return Ok(TaskInstance {
            id: instance_id(TaskKind::Construction, Some(motif), params.seed),
            task: TaskKind::Construction,
            graph: events,
            motifs: vec![MotifDef::from_pattern(&pattern)],
            query: None,
            ground_truth: GroundTruth::Event { value: completion },
            gen: *params,
            violation: None,
        });
    }
    Err(GenError::RetryBudget(format!(
        "implanting a {motif} construction prefix (seed {})",
        params.seed
    )))
}

// ---------------------------------------------------------------------
// Level 2 (multi-motif)
// ---------------------------------------------------------------------

/// All nine catalog patterns with their multi-task windows.
pub fn level2_patterns() -> Vec<MotifPattern> {
    CATALOG
        .iter()
        .map(|s| s.pattern(settings::level2_window(s.name).expect("catalog is covered")))
        .collect()
}

/// One multi-motif instance. The ground truth carries presence, first
/// occurrence and counts together; `task` picks which one the question
/// asks about.
pub fn gen_level2_instance(task: TaskKind, seed: u64) -> Result<TaskInstance, GenError> {
    if !task.is_level2() {
        return Err(GenError::InvalidParams(format!(
            "{} is not a multi-motif task",
            task.as_str()
        )));
    }
    let params = settings::level2_params(seed);
    let mut rng = rng_for(seed);
    let events = gen_events(&params, &mut rng);
    let g = DynamicGraph::new(events.clone());
    let patterns = level2_patterns();
    Ok(TaskInstance {
        id: instance_id(task, None, seed),
        task,
        graph: events,
        motifs: patterns.iter().map(MotifDef::from_pattern).collect(),
        query: None,
        ground_truth: GroundTruth::Level2 {
            presence: multi_detect(&g, &patterns),
            first_occurrence: multi_first_occurrence(&g, &patterns),
            counts: multi_count(&g, &patterns),
        },
        gen: params,
        violation: None,
    })
}

// ---------------------------------------------------------------------
// Level 0 (warm-up)
// ---------------------------------------------------------------------

pub fn gen_level0_instance(task: TaskKind, seed: u64) -> Result<TaskInstance, GenError> {
    if !task.is_level0() {
        return Err(GenError::InvalidParams(format!("{} is not a warm-up task", task.as_str())));
    }
    let params = settings::level0_params(seed);
    let mut rng = rng_for(seed);

    let (events, query) = match task {
        TaskKind::Level0SortEdge => {
            // Present the events shuffled, otherwise sorting is a no-op.
            let mut events = gen_events(&params, &mut rng);
            events.shuffle(&mut rng);
            (events, None)
        }
        TaskKind::Level0WhenLinkDislink => {
            // Resample until some pair carries both an add and a delete,
            // then query one such pair.
            let mut found = None;
            for _ in 0..RETRY_BUDGET {
                let events = gen_events(&params, &mut rng);
                let g = DynamicGraph::new(events.clone());
                let qualifying: Vec<NodePair> = g
                    .pairs()
                    .filter(|&p| {
                        let evs = g.events_on_pair(p);
                        evs.iter().any(|&i| g.events()[i].op == Op::Add)
                            && evs.iter().any(|&i| g.events()[i].op == Op::Delete)
                    })
                    .collect();
                if !qualifying.is_empty() {
                    let pair = qualifying[rng.gen_range(0..qualifying.len())];
                    found = Some((events, Some(Query::Pair { pair: (pair.0, pair.1) })));
                    break;
                }
            }
            found.ok_or_else(|| {
                GenError::RetryBudget("sampling a pair with both event types".into())
            })?
        }
        TaskKind::Level0WhatEdges => {
            let events = gen_events(&params, &mut rng);
            let time = rng.gen_range(0..params.t_span);
            (events, Some(Query::Time { time }))
        }
        TaskKind::Level0ReverseGraph => (gen_events(&params, &mut rng), None),
        _ => unreachable!("guarded above"),
    };

    let mut instance = TaskInstance {
        id: instance_id(task, None, seed),
        task,
        graph: events,
        motifs: Vec::new(),
        query: match &query {
            Some(q) => Some(*q),
            None => None,
        },
        ground_truth: GroundTruth::Bool { value: false }, // placeholder
        gen: params,
        violation: None,
    };
    instance.ground_truth = instance
        .recompute_ground_truth()
        .map_err(|e| GenError::InvalidParams(e.to_string()))?;
    Ok(instance)
}

// ---------------------------------------------------------------------
// Datasets
// ---------------------------------------------------------------------

/// A batch of instances with seeds `base_seed..base_seed+count`.
/// Classification datasets alternate positive/negative and rotate the
/// violation tags across negatives.
pub fn gen_dataset(
    task: TaskKind,
    motif: Option<&str>,
    count: usize,
    base_seed: u64,
) -> Result<Vec<TaskInstance>, GenError> {
    let need_motif = || {
        motif.ok_or_else(|| {
            GenError::InvalidParams(format!("{} needs a motif name", task.as_str()))
        })
    };
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let seed = base_seed + i as u64;
        let inst = match task {
            TaskKind::Classification => {
                let m = need_motif()?;
                let params = settings::classification_params(m, seed)?;
                let positive = i % 2 == 0;
                let violation =
                    (!positive).then(|| crate::instance::ALL_VIOLATIONS[(i / 2) % 3]);
                gen_classification_instance(m, &params, positive, violation)?
            }
            TaskKind::Detection => {
                let m = need_motif()?;
                gen_detection_instance(m, &settings::detection_params(m, seed)?)?
            }
            TaskKind::Construction => {
                let m = need_motif()?;
                gen_construction_instance(m, &settings::construction_params(m, seed)?)?
            }
            TaskKind::MultiDetect | TaskKind::Occurrence | TaskKind::MultiCount => {
                gen_level2_instance(task, seed)?
            }
            _ => gen_level0_instance(task, seed)?,
        };
        out.push(inst);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::ALL_VIOLATIONS;

    #[test]
    fn classification_positive_negative_and_restore() {
        for motif in ["triangle", "3-star", "4-cycle", "butterfly"] {
            for seed in 0..12 {
                let params = settings::classification_params(motif, seed).unwrap();
                let pos = gen_classification_instance(motif, &params, true, None).unwrap();
                assert_eq!(pos.ground_truth, GroundTruth::Bool { value: true });
                pos.verify().unwrap();

                for tag in ALL_VIOLATIONS {
                    let neg =
                        gen_classification_instance(motif, &params, false, Some(tag)).unwrap();
                    assert_eq!(neg.ground_truth, GroundTruth::Bool { value: false });
                    neg.verify().unwrap();
                    assert_eq!(neg.violation, Some(tag));
                    // The negative is the same seed's positive, perturbed:
                    // same add count, and for temporal/duration tags the
                    // same pair multiset.
                    assert_eq!(neg.graph.len(), pos.graph.len());
                    if tag != ViolationTag::Structural {
                        let mut a: Vec<_> = pos.graph.iter().map(|e| e.pair()).collect();
                        let mut b: Vec<_> = neg.graph.iter().map(|e| e.pair()).collect();
                        a.sort();
                        b.sort();
                        assert_eq!(a, b);
                    }
                }
            }
        }
    }

    #[test]
    fn duration_negative_overshoots_span_only() {
        let params = settings::classification_params("4-path", 5).unwrap();
        let neg = gen_classification_instance(
            "4-path",
            &params,
            false,
            Some(ViolationTag::Duration),
        )
        .unwrap();
        let times: Vec<u64> = neg.graph.iter().map(|e| e.t).collect();
        assert!(times.windows(2).all(|w| w[0] < w[1]), "order stays strict");
        let span = times.last().unwrap() - times[0];
        assert!(span > params.window.unwrap());
    }

    #[test]
    fn detection_label_is_the_matcher_output() {
        for seed in 0..8 {
            let params = settings::detection_params("triangle", seed).unwrap();
            let inst = gen_detection_instance("triangle", &params).unwrap();
            inst.verify().unwrap();
        }
    }

    #[test]
    fn construction_contract() {
        for motif in settings::construction_motifs() {
            for seed in 0..6 {
                let params = settings::construction_params(motif, seed).unwrap();
                let inst = gen_construction_instance(motif, &params).unwrap();
                let pattern = inst.motif().unwrap().to_pattern().unwrap();
                let g = inst.dynamic_graph();
                assert!(!detect(&g, &pattern), "{motif} seed {seed}: must be absent");
                let GroundTruth::Event { value } = inst.ground_truth else {
                    panic!("construction ground truth is a single event");
                };
                assert_eq!(value.op, Op::Add);
                let mut events = inst.graph.clone();
                events.push(value);
                assert!(detect(&DynamicGraph::new(events), &pattern));
                inst.verify().unwrap();
            }
        }
    }

    #[test]
    fn level2_maps_recompute() {
        for seed in 0..4 {
            let inst = gen_level2_instance(TaskKind::MultiDetect, seed).unwrap();
            inst.verify().unwrap();
            let GroundTruth::Level2 { presence, first_occurrence, counts } =
                &inst.ground_truth
            else {
                panic!("level-2 payload expected");
            };
            assert_eq!(presence.len(), 9);
            for (name, &p) in presence {
                assert_eq!(first_occurrence.contains_key(name), p);
                assert_eq!(counts.contains_key(name), p);
            }
        }
    }

    #[test]
    fn level0_instances_verify() {
        for task in [
            TaskKind::Level0SortEdge,
            TaskKind::Level0WhenLinkDislink,
            TaskKind::Level0WhatEdges,
            TaskKind::Level0ReverseGraph,
        ] {
            for seed in 0..6 {
                let inst = gen_level0_instance(task, seed).unwrap();
                inst.verify().unwrap();
                match task {
                    TaskKind::Level0WhenLinkDislink => {
                        assert!(matches!(inst.query, Some(Query::Pair { .. })))
                    }
                    TaskKind::Level0WhatEdges => {
                        assert!(matches!(inst.query, Some(Query::Time { .. })))
                    }
                    _ => assert!(inst.query.is_none()),
                }
            }
        }
    }

    #[test]
    fn datasets_are_deterministic_and_balanced() {
        let a = gen_dataset(TaskKind::Classification, Some("triangle"), 12, 100).unwrap();
        let b = gen_dataset(TaskKind::Classification, Some("triangle"), 12, 100).unwrap();
        let bytes_a = serde_json::to_string(&a).unwrap();
        assert_eq!(bytes_a, serde_json::to_string(&b).unwrap());

        let positives = a
            .iter()
            .filter(|i| i.ground_truth == GroundTruth::Bool { value: true })
            .count();
        assert_eq!(positives, 6);
        for tag in ALL_VIOLATIONS {
            assert_eq!(a.iter().filter(|i| i.violation == Some(tag)).count(), 2, "{tag:?}");
        }
        let ids: std::collections::BTreeSet<_> = a.iter().map(|i| i.id.clone()).collect();
        assert_eq!(ids.len(), 12, "ids are unique");
    }
}
