//! Exact matching of temporal motif patterns against dynamic graphs.
//!
//! Matching semantics:
//! - only Add events participate; Delete events never match and never
//!   disqualify anything;
//! - host timestamps must be strictly increasing along the pattern's rank
//!   order, with `t_last - t_first <= delta` (equal timestamps never match);
//! - node symbols map injectively onto host nodes, and the mapping is a
//!   monomorphism: extra host edges among the mapped nodes are fine;
//! - an instance is identified by its set of Add event indices. Distinct
//!   symbol mappings over the same event set are one instance.

use std::collections::BTreeMap;

use dygraph_core::{DynamicGraph, Op};
use serde::{Deserialize, Serialize};

use crate::pattern::MotifPattern;

/// One matched occurrence of a pattern.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MotifInstance {
    /// Indices into the host event list, in rank (= time) order.
    pub event_indices: Vec<usize>,
    /// Host node for each pattern symbol.
    pub nodes: Vec<u64>,
    pub t_first: u64,
    pub t_last: u64,
}

#[derive(Clone, Copy)]
struct Add {
    idx: usize,
    u: u64,
    v: u64,
    t: u64,
}

struct Search<'a> {
    adds: Vec<Add>,
    pattern: &'a MotifPattern,
}

impl<'a> Search<'a> {
    fn new(g: &DynamicGraph, pattern: &'a MotifPattern) -> Search<'a> {
        let adds = g
            .events()
            .iter()
            .enumerate()
            .filter(|(_, e)| e.op == Op::Add)
            .map(|(idx, e)| Add { idx, u: e.u, v: e.v, t: e.t })
            .collect();
        Search { adds, pattern }
    }

    /// Depth-first extension over pattern ranks. `visit` sees each complete
    /// match; returning `true` stops the whole search.
    fn run(&self, visit: &mut dyn FnMut(&[usize], &[Option<u64>], u64, u64) -> bool) {
        let mut mapping: Vec<Option<u64>> = vec![None; self.pattern.k()];
        let mut chosen: Vec<usize> = Vec::with_capacity(self.pattern.l());
        self.extend(0, &mut mapping, &mut chosen, 0, 0, visit);
    }

    fn extend(
        &self,
        rank: usize,
        mapping: &mut Vec<Option<u64>>,
        chosen: &mut Vec<usize>,
        t_first: u64,
        t_prev: u64,
        visit: &mut dyn FnMut(&[usize], &[Option<u64>], u64, u64) -> bool,
    ) -> bool {
        if rank == self.pattern.l() {
            return visit(chosen, mapping, t_first, t_prev);
        }
        let (a, b) = self.pattern.edges()[rank];
        for add in &self.adds {
            if rank > 0 && (add.t <= t_prev || add.t - t_first > self.pattern.delta()) {
                continue;
            }
            let first = if rank == 0 { add.t } else { t_first };
            // Orientations of the host event consistent with the partial
            // mapping. Both endpoints unmapped only happens at rank 0
            // (connectivity guarantees a shared symbol later).
            let assignments: &[(u64, u64)] = &[(add.u, add.v), (add.v, add.u)];
            for &(na, nb) in assignments {
                if !self.compatible(mapping, a, na) || !self.compatible(mapping, b, nb) {
                    continue;
                }
                // Injectivity for newly introduced symbols. (na != nb
                // always, so two fresh symbols cannot collide with each
                // other, only with previously mapped nodes.)
                if mapping[a].is_none() && mapping.iter().any(|m| *m == Some(na)) {
                    continue;
                }
                if mapping[b].is_none() && mapping.iter().any(|m| *m == Some(nb)) {
                    continue;
                }
                let (prev_a, prev_b) = (mapping[a], mapping[b]);
                mapping[a] = Some(na);
                mapping[b] = Some(nb);
                chosen.push(add.idx);
                let stop = self.extend(rank + 1, mapping, chosen, first, add.t, visit);
                chosen.pop();
                mapping[a] = prev_a;
                mapping[b] = prev_b;
                if stop {
                    return true;
                }
                // If both endpoints were already mapped, the second
                // orientation can never introduce a new match.
                if prev_a.is_some() && prev_b.is_some() {
                    break;
                }
            }
        }
        false
    }

    fn compatible(&self, mapping: &[Option<u64>], symbol: usize, node: u64) -> bool {
        match mapping[symbol] {
            Some(m) => m == node,
            None => true,
        }
    }
}

/// Is there at least one instance of `pattern` in `g`?
pub fn detect(g: &DynamicGraph, pattern: &MotifPattern) -> bool {
    let mut found = false;
    Search::new(g, pattern).run(&mut |_, _, _, _| {
        found = true;
        true
    });
    found
}

/// All instances, ordered lexicographically by their sorted event index
/// sets. `event_indices` stays in rank order, which is time order, not
/// necessarily index order (source event lists may be chronologically
/// shuffled).
pub fn enumerate_instances(g: &DynamicGraph, pattern: &MotifPattern) -> Vec<MotifInstance> {
    let mut by_events: BTreeMap<Vec<usize>, MotifInstance> = BTreeMap::new();
    Search::new(g, pattern).run(&mut |chosen, mapping, t_first, t_last| {
        let mut key = chosen.to_vec();
        key.sort_unstable();
        by_events.entry(key).or_insert_with(|| MotifInstance {
            event_indices: chosen.to_vec(),
            nodes: mapping.iter().map(|m| m.expect("complete mapping")).collect(),
            t_first,
            t_last,
        });
        false
    });
    by_events.into_values().collect()
}

/// Number of distinct instances (distinct sets of Add event indices).
pub fn count_instances(g: &DynamicGraph, pattern: &MotifPattern) -> u64 {
    let mut seen: std::collections::BTreeSet<Vec<usize>> = Default::default();
    Search::new(g, pattern).run(&mut |chosen, _, _, _| {
        let mut key = chosen.to_vec();
        key.sort_unstable();
        seen.insert(key);
        false
    });
    seen.len() as u64
}

/// Earliest time the pattern completes: the minimum over instances of the
/// last edge's timestamp. `None` when the pattern is absent.
pub fn first_occurrence(g: &DynamicGraph, pattern: &MotifPattern) -> Option<u64> {
    let mut best: Option<u64> = None;
    Search::new(g, pattern).run(&mut |_, _, _, t_last| {
        best = Some(best.map_or(t_last, |b| b.min(t_last)));
        false
    });
    best
}

/// Is the graph exactly this motif? Requires the Add events to number
/// exactly `l`, the node set over all events (deletes included) to number
/// exactly `k`, and the whole thing to match the pattern.
pub fn classify_exact(g: &DynamicGraph, pattern: &MotifPattern) -> bool {
    let adds = g.events().iter().filter(|e| e.op == Op::Add).count();
    adds == pattern.l() && g.nodes().len() == pattern.k() && detect(g, pattern)
}
