use std::collections::{BTreeMap, BTreeSet};

use dygraph_core::{
    active_edges_at, first_link_dislink, format_events, parse_events, reverse_graph, sort_events,
    DynamicGraph, EdgeEvent, NodePair, Op,
};
use proptest::prelude::*;

fn arb_event() -> impl Strategy<Value = EdgeEvent> {
    (0u64..8, 0u64..8, 0u64..10, prop::bool::ANY)
        .prop_filter("no self-loops", |(u, v, _, _)| u != v)
        .prop_map(|(u, v, t, add)| {
            EdgeEvent::new(u, v, t, if add { Op::Add } else { Op::Delete }).unwrap()
        })
}

fn arb_events() -> impl Strategy<Value = Vec<EdgeEvent>> {
    prop::collection::vec(arb_event(), 0..40)
}

fn multiset(evs: &[EdgeEvent]) -> BTreeMap<(NodePair, u64, bool), usize> {
    let mut m = BTreeMap::new();
    for e in evs {
        *m.entry((e.pair(), e.t, e.op == Op::Add)).or_insert(0) += 1;
    }
    m
}

proptest! {
    #[test]
    fn text_form_round_trips(evs in arb_events()) {
        let text = format_events(&evs);
        prop_assert_eq!(parse_events(&text).unwrap(), evs);
    }

    #[test]
    fn json_form_round_trips(evs in arb_events()) {
        let json = serde_json::to_string(&evs).unwrap();
        let back: Vec<EdgeEvent> = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, evs);
    }

    #[test]
    fn sort_is_a_stable_permutation(evs in arb_events()) {
        let g = DynamicGraph::new(evs.clone());
        let sorted = sort_events(&g);
        prop_assert_eq!(multiset(&sorted), multiset(&evs));
        prop_assert!(sorted.windows(2).all(|w| w[0].t <= w[1].t));

        // Stability: within an equal-timestamp group the original relative
        // order survives; check by tagging events with their source index.
        let tagged: Vec<(usize, &EdgeEvent)> = evs.iter().enumerate().collect();
        let mut expect = tagged.clone();
        expect.sort_by_key(|(i, e)| (e.t, *i));
        let expect: Vec<EdgeEvent> = expect.into_iter().map(|(_, e)| *e).collect();
        prop_assert_eq!(sorted, expect);
    }

    #[test]
    fn reverse_flips_every_event_and_orders_canonically(evs in arb_events()) {
        let g = DynamicGraph::new(evs.clone());
        let rev = reverse_graph(&g);
        let flipped: Vec<EdgeEvent> = evs.iter().map(EdgeEvent::flipped).collect();
        prop_assert_eq!(multiset(&rev), multiset(&flipped));
        prop_assert!(rev.windows(2).all(|w| (w[0].t, w[0].op) <= (w[1].t, w[1].op)));
    }

    #[test]
    fn active_edges_matches_replay(evs in arb_events(), t in 0u64..10) {
        let g = DynamicGraph::new(evs.clone());

        // Independent oracle: replay events in (time, index) order and keep
        // the resulting on/off state per pair.
        let mut order: Vec<usize> = (0..evs.len()).collect();
        order.sort_by_key(|&i| (evs[i].t, i));
        let mut state: BTreeMap<NodePair, bool> = BTreeMap::new();
        for i in order {
            if evs[i].t > t {
                continue;
            }
            state.insert(evs[i].pair(), evs[i].op == Op::Add);
        }
        let expect: BTreeSet<NodePair> =
            state.into_iter().filter(|&(_, on)| on).map(|(p, _)| p).collect();
        prop_assert_eq!(active_edges_at(&g, t), expect);
    }

    #[test]
    fn first_link_dislink_matches_filter_scan(evs in arb_events(), u in 0u64..8, v in 0u64..8) {
        prop_assume!(u != v);
        let g = DynamicGraph::new(evs.clone());
        let pair = NodePair::new(u, v);
        let link = evs.iter().filter(|e| e.pair() == pair && e.op == Op::Add).map(|e| e.t).min();
        let dislink =
            evs.iter().filter(|e| e.pair() == pair && e.op == Op::Delete).map(|e| e.t).min();
        prop_assert_eq!(first_link_dislink(&g, u, v), (link, dislink));
    }
}
