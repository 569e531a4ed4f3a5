//! Ego-network sampling from real edge-stream snapshots: BFS out from a
//! center node, keep the induced events, relabel densely and shift time
//! so the sample looks like a generated instance.

use std::collections::{BTreeMap, BTreeSet};

use dygraph_core::{EdgeEvent, Op};
use rand::Rng;

use crate::graph_gen::{rng_for, sort_canonical};
use crate::params::GenError;

/// Parse a whitespace-separated `u v t` snapshot, one interaction per
/// line. Blank lines are skipped; self-loops (common in raw dumps) are
/// dropped; anything else malformed is an error naming the line.
pub fn parse_snapshot(text: &str) -> Result<Vec<EdgeEvent>, GenError> {
    let mut events = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(GenError::Input(format!(
                "line {}: expected `u v t`, got {line:?}",
                lineno + 1
            )));
        }
        let parse = |s: &str, what: &str| {
            s.parse::<u64>().map_err(|_| {
                GenError::Input(format!("line {}: {what} {s:?} is not a non-negative integer", lineno + 1))
            })
        };
        let u = parse(fields[0], "node")?;
        let v = parse(fields[1], "node")?;
        let t = parse(fields[2], "timestamp")?;
        if u == v {
            continue;
        }
        events.push(EdgeEvent::new(u, v, t, Op::Add).expect("self-loops filtered above"));
    }
    Ok(events)
}

/// Breadth-first ego sample around `center` (drawn uniformly from the
/// nodes when not given). Keeps at most `node_cap` nodes in discovery
/// order — the center, then each hop's neighbors in ascending order —
/// then returns the events with both endpoints kept, densely relabeled by
/// discovery order and time-shifted so the earliest kept event is at 0.
///
/// `hops = 0` keeps only the center and therefore yields no events.
pub fn ego_sample(
    events: &[EdgeEvent],
    center: Option<u64>,
    hops: u32,
    node_cap: usize,
    seed: u64,
) -> Result<Vec<EdgeEvent>, GenError> {
    if node_cap == 0 {
        return Err(GenError::InvalidParams("node_cap must be at least 1".into()));
    }
    let mut adjacency: BTreeMap<u64, BTreeSet<u64>> = BTreeMap::new();
    for e in events {
        adjacency.entry(e.u).or_default().insert(e.v);
        adjacency.entry(e.v).or_default().insert(e.u);
    }

    let center = match center {
        Some(c) => c,
        None => {
            if adjacency.is_empty() {
                return Err(GenError::Input("cannot sample a center from an empty snapshot".into()));
            }
            let nodes: Vec<u64> = adjacency.keys().copied().collect();
            nodes[rng_for(seed).gen_range(0..nodes.len())]
        }
    };

    // Discovery order doubles as the dense relabeling.
    let mut kept: Vec<u64> = vec![center];
    let mut seen: BTreeSet<u64> = BTreeSet::from([center]);
    let mut frontier = vec![center];
    'bfs: for _ in 0..hops {
        let mut next = Vec::new();
        for &node in &frontier {
            if let Some(neighbors) = adjacency.get(&node) {
                for &nb in neighbors {
                    if seen.insert(nb) {
                        kept.push(nb);
                        next.push(nb);
                        if kept.len() == node_cap {
                            break 'bfs;
                        }
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }

    let label: BTreeMap<u64, u64> =
        kept.iter().enumerate().map(|(i, &node)| (node, i as u64)).collect();
    let mut induced: Vec<EdgeEvent> = events
        .iter()
        .filter(|e| label.contains_key(&e.u) && label.contains_key(&e.v))
        .map(|e| EdgeEvent::new(label[&e.u], label[&e.v], e.t, e.op).unwrap())
        .collect();
    if let Some(min_t) = induced.iter().map(|e| e.t).min() {
        for e in &mut induced {
            e.t -= min_t;
        }
    }
    sort_canonical(&mut induced);
    Ok(induced)
}
