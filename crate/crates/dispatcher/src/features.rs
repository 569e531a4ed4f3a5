//! The five structural/cognitive-load features of a dynamic graph.
//!
//! Three conceptual levels: scale (event count), structural complexity
//! (cyclomatic number and degree-proportion ratios on the static Add
//! projection), and sequential cognitive load (edge locality: how spread
//! out a busy node's events are across the event sequence the model
//! reads).

use std::collections::{BTreeMap, BTreeSet};

use dygraph_core::DynamicGraph;
use serde::{Deserialize, Serialize};

pub const FEATURE_NAMES: [&str; 5] =
    ["num_edges", "cyclomatic", "ratio_eq_2", "ratio_ge_3", "edge_locality"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    /// Count of ALL events (adds and deletes): the length of the text
    /// representation the model has to read.
    pub num_edges: u64,
    /// C = E − N + P on the static projection (distinct added pairs,
    /// their nodes, connected components).
    pub cyclomatic: i64,
    /// Fraction of projection nodes with exactly two distinct neighbors.
    pub ratio_eq_2: f64,
    /// Fraction of projection nodes with three or more distinct neighbors.
    pub ratio_ge_3: f64,
    /// Mean over core nodes (degree ≥ 2) of the population standard
    /// deviation of the indices of events incident to the node — adds
    /// and deletes alike, since both occupy the model's context.
    pub edge_locality: f64,
}

impl FeatureVector {
    pub fn zero() -> FeatureVector {
        FeatureVector {
            num_edges: 0,
            cyclomatic: 0,
            ratio_eq_2: 0.0,
            ratio_ge_3: 0.0,
            edge_locality: 0.0,
        }
    }

    /// The model-input layout, in `FEATURE_NAMES` order.
    pub fn to_array(self) -> [f64; 5] {
        [
            self.num_edges as f64,
            self.cyclomatic as f64,
            self.ratio_eq_2,
            self.ratio_ge_3,
            self.edge_locality,
        ]
    }
}

/// Connected-component count of an undirected adjacency map.
fn component_count(adj: &BTreeMap<u64, BTreeSet<u64>>) -> usize {
    let mut seen: BTreeSet<u64> = BTreeSet::new();
    let mut components = 0;
    for &start in adj.keys() {
        if seen.contains(&start) {
            continue;
        }
        components += 1;
        let mut stack = vec![start];
        while let Some(node) = stack.pop() {
            if !seen.insert(node) {
                continue;
            }
            if let Some(neighbors) = adj.get(&node) {
                stack.extend(neighbors.iter().copied().filter(|n| !seen.contains(n)));
            }
        }
    }
    components
}

pub fn extract_features(g: &DynamicGraph) -> FeatureVector {
    let events = g.events();
    if events.is_empty() {
        return FeatureVector::zero();
    }

    // Static projection: distinct unordered pairs that ever appear in an
    // Add event, and the nodes they touch.
    let mut adj: BTreeMap<u64, BTreeSet<u64>> = BTreeMap::new();
    let mut edges: BTreeSet<(u64, u64)> = BTreeSet::new();
    for e in events.iter().filter(|e| e.op == dygraph_core::Op::Add) {
        let p = e.pair();
        edges.insert((p.0, p.1));
        adj.entry(p.0).or_default().insert(p.1);
        adj.entry(p.1).or_default().insert(p.0);
    }

    let e_count = edges.len() as i64;
    let n_count = adj.len() as i64;
    let p_count = component_count(&adj) as i64;
    let cyclomatic = e_count - n_count + p_count;

    let (mut eq2, mut ge3) = (0usize, 0usize);
    for neighbors in adj.values() {
        match neighbors.len() {
            2 => eq2 += 1,
            d if d >= 3 => ge3 += 1,
            _ => {}
        }
    }
    let (ratio_eq_2, ratio_ge_3) = if adj.is_empty() {
        (0.0, 0.0)
    } else {
        (eq2 as f64 / adj.len() as f64, ge3 as f64 / adj.len() as f64)
    };

    // Edge locality: population std of incident event INDICES (adds and
    // deletes), averaged over core nodes.
    let core: Vec<u64> =
        adj.iter().filter(|(_, nbrs)| nbrs.len() >= 2).map(|(&v, _)| v).collect();
    let edge_locality = if core.is_empty() {
        0.0
    } else {
        let mut total = 0.0;
        for &v in &core {
            let indices: Vec<f64> = events
                .iter()
                .enumerate()
                .filter(|(_, e)| e.u == v || e.v == v)
                .map(|(i, _)| i as f64)
                .collect();
            total += population_std(&indices);
        }
        total / core.len() as f64
    };

    FeatureVector {
        num_edges: events.len() as u64,
        cyclomatic,
        ratio_eq_2,
        ratio_ge_3,
        edge_locality,
    }
}

/// Population standard deviation; 0 for empty or singleton samples.
pub fn population_std(values: &[f64]) -> f64 {
    if values.len() <= 1 {
        return 0.0;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    var.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use dygraph_core::{DynamicGraph, EdgeEvent, Op};

    fn adds(pairs: &[(u64, u64)]) -> DynamicGraph {
        let events = pairs
            .iter()
            .enumerate()
            .map(|(i, &(u, v))| EdgeEvent { u, v, t: i as u64, op: Op::Add })
            .collect();
        DynamicGraph::new(events)
    }

    #[test]
    fn triangle_has_cyclomatic_one() {
        let f = extract_features(&adds(&[(0, 1), (1, 2), (2, 0)]));
        assert_eq!(f.cyclomatic, 3 - 3 + 1);
        assert_eq!(f.num_edges, 3);
        assert_eq!(f.ratio_eq_2, 1.0);
        assert_eq!(f.ratio_ge_3, 0.0);
    }

    #[test]
    fn two_disjoint_edges_have_cyclomatic_zero() {
        let f = extract_features(&adds(&[(0, 1), (2, 3)]));
        assert_eq!(f.cyclomatic, 2 - 4 + 2);
        assert_eq!(f.ratio_eq_2, 0.0);
        assert_eq!(f.edge_locality, 0.0, "no core nodes");
    }

    #[test]
    fn worked_edge_locality_example() {
        // Four adds; node 0 is the only core node, touching event
        // indices {0, 1, 3}: population std = sqrt(14/9).
        let f = extract_features(&adds(&[(0, 1), (0, 2), (3, 4), (0, 5)]));
        assert!((f.edge_locality - (14.0f64 / 9.0).sqrt()).abs() < 1e-12);
        assert!((f.edge_locality - 1.2472).abs() < 1e-4);
        assert_eq!(f.cyclomatic, 4 - 6 + 2);
        assert_eq!(f.ratio_ge_3, 1.0 / 6.0);
    }

    #[test]
    fn empty_graph_is_all_zero() {
        assert_eq!(extract_features(&DynamicGraph::new(vec![])), FeatureVector::zero());
    }

    #[test]
    fn deletes_count_toward_num_edges_and_locality_only() {
        let base = adds(&[(0, 1), (0, 2), (1, 2)]);
        let f1 = extract_features(&base);
        let mut events = base.events().to_vec();
        events.push(EdgeEvent { u: 0, v: 1, t: 9, op: Op::Delete });
        let f2 = extract_features(&DynamicGraph::new(events));
        assert_eq!(f2.num_edges, f1.num_edges + 1);
        assert_eq!(f2.cyclomatic, f1.cyclomatic);
        assert_eq!(f2.ratio_eq_2, f1.ratio_eq_2);
        assert_eq!(f2.ratio_ge_3, f1.ratio_ge_3);
        assert_ne!(f2.edge_locality, f1.edge_locality);
    }

    #[test]
    fn delete_on_an_unseen_pair_does_not_create_projection_nodes() {
        let mut events = adds(&[(0, 1), (1, 2), (2, 0)]).events().to_vec();
        events.push(EdgeEvent { u: 7, v: 8, t: 9, op: Op::Delete });
        let f = extract_features(&DynamicGraph::new(events));
        assert_eq!(f.cyclomatic, 1);
        assert_eq!(f.ratio_eq_2, 1.0, "nodes 7 and 8 are not projection nodes");
    }
}
