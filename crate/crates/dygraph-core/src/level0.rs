//! Elementary temporal operations. These double as ground-truth builders
//! for the warm-up benchmark tasks, so their tie-breaking rules are part of
//! the contract: see each function's doc.

use std::collections::BTreeSet;

use crate::event::{EdgeEvent, NodePair, Op};
use crate::graph::DynamicGraph;

/// Chronological order, stable: events with equal timestamps keep their
/// original relative order (callers that compare answers must ignore order
/// inside an equal-timestamp group).
pub fn sort_events(g: &DynamicGraph) -> Vec<EdgeEvent> {
    let mut evs = g.events().to_vec();
    evs.sort_by_key(|e| e.t);
    evs
}

/// Earliest add ("link") and earliest delete ("dislink") timestamps for an
/// undirected pair, in either orientation.
pub fn first_link_dislink(g: &DynamicGraph, u: u64, v: u64) -> (Option<u64>, Option<u64>) {
    let pair = NodePair::new(u, v);
    let mut link = None;
    let mut dislink = None;
    for &i in g.events_on_pair(pair) {
        let ev = g.events()[i];
        let slot = match ev.op {
            Op::Add => &mut link,
            Op::Delete => &mut dislink,
        };
        *slot = Some(slot.map_or(ev.t, |cur: u64| cur.min(ev.t)));
    }
    (link, dislink)
}

/// Pairs whose most recent event at or before `t` is an add. Among events
/// of a pair sharing that latest timestamp, the later event index wins.
pub fn active_edges_at(g: &DynamicGraph, t: u64) -> BTreeSet<NodePair> {
    let mut active = BTreeSet::new();
    for pair in g.pairs() {
        let last = g
            .events_on_pair(pair)
            .iter()
            .map(|&i| (g.events()[i].t, i))
            .filter(|&(et, _)| et <= t)
            .max();
        if let Some((_, i)) = last {
            if g.events()[i].op == Op::Add {
                active.insert(pair);
            }
        }
    }
    active
}

/// Flips every operation (add <-> delete) and re-sorts chronologically,
/// with additions processed before deletions at equal timestamps. The sort
/// is stable beyond that tie-break.
pub fn reverse_graph(g: &DynamicGraph) -> Vec<EdgeEvent> {
    let mut evs: Vec<EdgeEvent> = g.events().iter().map(EdgeEvent::flipped).collect();
    evs.sort_by_key(|e| (e.t, e.op));
    evs
}
