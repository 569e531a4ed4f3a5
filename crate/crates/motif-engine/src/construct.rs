//! Minimal-modification construction: the single Add event that completes
//! a motif whose first `l - 1` edges are already matchable.

use std::collections::BTreeSet;

use dygraph_core::{DynamicGraph, EdgeEvent, Op};

use crate::matcher::enumerate_instances;
use crate::pattern::MotifPattern;

/// Finds one Add event whose insertion makes `pattern` detectable, by
/// completing the best prefix instance (the pattern minus its final edge).
///
/// Determinism: among all feasible completions the smallest timestamp wins,
/// then the lexicographically smallest prefix event-index set. The
/// completion timestamp for a prefix instance is the smallest integer after
/// the instance's last edge that still fits the window. A symbol the final
/// edge introduces is mapped to the smallest node id not used by the
/// instance. Returns `None` when no prefix instance leaves room in its
/// window (or, for single-edge patterns, never: those complete trivially).
pub fn construct_completion(g: &DynamicGraph, pattern: &MotifPattern) -> Option<EdgeEvent> {
    let edges = pattern.edges();
    let (last_a, last_b) = *edges.last().expect("patterns are non-empty");

    if pattern.l() == 1 {
        // No prefix to match: both symbols are fresh.
        return Some(EdgeEvent::new(0, 1, 0, Op::Add).expect("0 != 1"));
    }

    // Prefix symbols keep their first-appearance order so instance node
    // vectors line up with the original symbols.
    let prefix_edges = &edges[..edges.len() - 1];
    let mut symbol_map: Vec<Option<usize>> = vec![None; pattern.k()];
    let mut next = 0;
    let mut remapped = Vec::with_capacity(prefix_edges.len());
    for &(a, b) in prefix_edges {
        for s in [a, b] {
            if symbol_map[s].is_none() {
                symbol_map[s] = Some(next);
                next += 1;
            }
        }
        remapped.push((symbol_map[a].unwrap(), symbol_map[b].unwrap()));
    }
    // A prefix of a valid pattern is itself valid: connectivity, pair
    // distinctness and symbol coverage all survive truncation + remapping.
    let prefix = MotifPattern::new(
        format!("{}-prefix", pattern.name()),
        next,
        remapped,
        pattern.delta(),
    )
    .expect("prefix of a valid pattern is valid");

    let mut best: Option<(u64, Vec<usize>, EdgeEvent)> = None;
    for inst in enumerate_instances(g, &prefix) {
        let deadline = inst.t_first.saturating_add(pattern.delta());
        if inst.t_last >= deadline {
            continue; // window already saturated, no room for one more tick
        }
        let t = inst.t_last + 1;

        let mut used: BTreeSet<u64> = inst.nodes.iter().copied().collect();
        let mut node_for = |sym: usize| match symbol_map[sym] {
            Some(m) => inst.nodes[m],
            None => {
                let fresh = (0..).find(|n| !used.contains(n)).unwrap();
                used.insert(fresh);
                fresh
            }
        };
        let (u, v) = (node_for(last_a), node_for(last_b));
        let ev = EdgeEvent::new(u, v, t, Op::Add).expect("distinct mapped nodes");

        let better = match &best {
            None => true,
            Some((bt, bi, _)) => (t, &inst.event_indices) < (*bt, bi),
        };
        if better {
            best = Some((t, inst.event_indices, ev));
        }
    }
    best.map(|(_, _, ev)| ev)
}
