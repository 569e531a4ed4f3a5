use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::event::{EdgeEvent, NodePair, Op};

/// An undirected dynamic graph: an ordered list of add/delete events.
///
/// The position of an event in `events` is its event index; everything
/// downstream (instance identity, locality features, tie-breaking) refers to
/// that index, so the order given at construction is preserved verbatim.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DynamicGraph {
    events: Vec<EdgeEvent>,
    nodes: BTreeSet<u64>,
    by_pair: BTreeMap<NodePair, Vec<usize>>,
}

impl DynamicGraph {
    pub fn new(events: Vec<EdgeEvent>) -> DynamicGraph {
        debug_assert!(events.iter().all(|e| e.u != e.v), "self-loop event");
        let mut nodes = BTreeSet::new();
        let mut by_pair: BTreeMap<NodePair, Vec<usize>> = BTreeMap::new();
        for (i, ev) in events.iter().enumerate() {
            nodes.insert(ev.u);
            nodes.insert(ev.v);
            by_pair.entry(ev.pair()).or_default().push(i);
        }
        DynamicGraph { events, nodes, by_pair }
    }

    pub fn empty() -> DynamicGraph {
        DynamicGraph::new(Vec::new())
    }

    pub fn events(&self) -> &[EdgeEvent] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Every node id that appears in any event, add or delete.
    pub fn nodes(&self) -> &BTreeSet<u64> {
        &self.nodes
    }

    /// Indices of the events touching an undirected pair, in event order.
    pub fn events_on_pair(&self, pair: NodePair) -> &[usize] {
        self.by_pair.get(&pair).map(Vec::as_slice).unwrap_or(&[])
    }

    /// All pairs touched by at least one event.
    pub fn pairs(&self) -> impl Iterator<Item = NodePair> + '_ {
        self.by_pair.keys().copied()
    }

    /// Indices of Add events, in event order.
    pub fn add_indices(&self) -> Vec<usize> {
        self.events
            .iter()
            .enumerate()
            .filter(|(_, e)| e.op == Op::Add)
            .map(|(i, _)| i)
            .collect()
    }

    /// Collapses time away: which pairs were ever added, plus every node
    /// that appears anywhere, and the component count of that picture.
    pub fn static_projection(&self) -> StaticProjection {
        let nodes = self.nodes.clone();
        let edges: BTreeSet<NodePair> = self
            .events
            .iter()
            .filter(|e| e.op == Op::Add)
            .map(|e| e.pair())
            .collect();
        let components = count_components(&nodes, &edges);
        StaticProjection { nodes, edges, components }
    }
}

/// The time-collapsed view of a dynamic graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StaticProjection {
    /// Every node mentioned by any event (including delete-only nodes).
    pub nodes: BTreeSet<u64>,
    /// Distinct pairs that were added at least once.
    pub edges: BTreeSet<NodePair>,
    /// Connected components of `(nodes, edges)`; isolated nodes count.
    pub components: usize,
}

fn count_components(nodes: &BTreeSet<u64>, edges: &BTreeSet<NodePair>) -> usize {
    let idx: BTreeMap<u64, usize> = nodes.iter().enumerate().map(|(i, &n)| (n, i)).collect();
    let mut parent: Vec<usize> = (0..nodes.len()).collect();

    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }

    for pair in edges {
        let a = find(&mut parent, idx[&pair.0]);
        let b = find(&mut parent, idx[&pair.1]);
        if a != b {
            parent[a] = b;
        }
    }
    let roots: BTreeSet<usize> = (0..nodes.len()).map(|i| find(&mut parent, i)).collect();
    roots.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_graph;

    #[test]
    fn projection_counts_components_and_delete_only_nodes() {
        // 7-8 never has an add event, so it contributes two isolated nodes.
        let g = parse_graph("[(0, 1, 0, a), (1, 2, 1, a), (4, 5, 0, a), (7, 8, 2, d)]").unwrap();
        let p = g.static_projection();
        assert_eq!(p.nodes.len(), 7);
        assert_eq!(p.edges.len(), 3);
        assert_eq!(p.components, 4);
    }

    #[test]
    fn duplicate_adds_project_to_one_edge() {
        let g = parse_graph("[(0, 1, 0, a), (1, 0, 3, a)]").unwrap();
        let p = g.static_projection();
        assert_eq!(p.edges.len(), 1);
        assert_eq!(p.components, 1);
    }

    #[test]
    fn empty_graph_projection() {
        let p = DynamicGraph::empty().static_projection();
        assert_eq!((p.nodes.len(), p.edges.len(), p.components), (0, 0, 0));
    }

    #[test]
    fn pair_index_keeps_event_order() {
        let g = parse_graph("[(2, 1, 5, a), (0, 3, 1, a), (1, 2, 2, d)]").unwrap();
        assert_eq!(g.events_on_pair(NodePair::new(1, 2)), &[0, 2]);
    }
}
