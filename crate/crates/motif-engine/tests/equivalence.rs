//! The backtracking matcher against the exhaustive reference, on random
//! small graphs and on the fully enumerated timestamped-K4 family.

use std::collections::BTreeSet;

use dygraph_core::{DynamicGraph, EdgeEvent, Op};
use motif_engine::{
    catalog, construct_completion, count_instances, detect, enumerate_instances,
    first_occurrence, oracle,
};
use proptest::prelude::*;

fn arb_graph() -> impl Strategy<Value = DynamicGraph> {
    let event = (0u64..8, 0u64..8, 0u64..6, 0u32..5)
        .prop_filter("no self-loops", |(u, v, _, _)| u != v)
        .prop_map(|(u, v, t, op)| {
            // Bias towards adds; deletes must be inert for matching.
            let op = if op == 0 { Op::Delete } else { Op::Add };
            EdgeEvent::new(u, v, t, op).unwrap()
        });
    prop::collection::vec(event, 0..14).prop_map(DynamicGraph::new)
}

fn arb_motif() -> impl Strategy<Value = (&'static str, u64)> {
    (0usize..catalog::CATALOG.len(), 0u64..8)
        .prop_map(|(i, d)| (catalog::CATALOG[i].name, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn matcher_equals_reference((name, delta) in arb_motif(), g in arb_graph()) {
        let p = catalog::pattern(name, delta).unwrap();
        let expect = oracle::instances(&g, &p);
        let got: BTreeSet<Vec<usize>> = enumerate_instances(&g, &p)
            .into_iter()
            .map(|i| {
                let mut v = i.event_indices;
                v.sort_unstable();
                v
            })
            .collect();
        prop_assert_eq!(&got, &expect);
        prop_assert_eq!(detect(&g, &p), !expect.is_empty());
        prop_assert_eq!(count_instances(&g, &p), expect.len() as u64);
        prop_assert_eq!(first_occurrence(&g, &p), oracle::first_occurrence(&g, &p));
    }

    #[test]
    fn deletes_are_inert((name, delta) in arb_motif(), g in arb_graph()) {
        let p = catalog::pattern(name, delta).unwrap();
        let adds_only: Vec<EdgeEvent> =
            g.events().iter().copied().filter(|e| e.op == Op::Add).collect();
        let stripped = DynamicGraph::new(adds_only);
        // Event indices shift when deletes vanish, so compare as event
        // tuples rather than indices.
        let key = |g: &DynamicGraph, idxs: &[usize]| -> Vec<EdgeEvent> {
            idxs.iter().map(|&i| g.events()[i]).collect()
        };
        let a: BTreeSet<_> = enumerate_instances(&g, &p)
            .iter()
            .map(|i| {
                let mut k = key(&g, &i.event_indices);
                k.sort_by_key(|e| (e.t, e.u, e.v));
                format!("{k:?}")
            })
            .collect();
        let b: BTreeSet<_> = enumerate_instances(&stripped, &p)
            .iter()
            .map(|i| {
                let mut k = key(&stripped, &i.event_indices);
                k.sort_by_key(|e| (e.t, e.u, e.v));
                format!("{k:?}")
            })
            .collect();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn relabeling_preserves_detection((name, delta) in arb_motif(), g in arb_graph(), shift in 1u64..50) {
        let p = catalog::pattern(name, delta).unwrap();
        let relabeled: Vec<EdgeEvent> = g
            .events()
            .iter()
            .map(|e| EdgeEvent::new(e.u + shift, e.v + shift, e.t, e.op).unwrap())
            .collect();
        let relabeled = DynamicGraph::new(relabeled);
        prop_assert_eq!(detect(&g, &p), detect(&relabeled, &p));
        prop_assert_eq!(count_instances(&g, &p), count_instances(&relabeled, &p));
    }

    #[test]
    fn widening_the_window_is_monotone((name, delta) in arb_motif(), g in arb_graph()) {
        let narrow = catalog::pattern(name, delta).unwrap();
        let wide = catalog::pattern(name, delta + 1).unwrap();
        prop_assert!(count_instances(&g, &narrow) <= count_instances(&g, &wide));
        if detect(&g, &narrow) {
            prop_assert!(detect(&g, &wide));
        }
    }

    #[test]
    fn completions_verify_and_respect_the_oracle((name, delta) in arb_motif(), g in arb_graph()) {
        let p = catalog::pattern(name, delta).unwrap();
        if let Some(ev) = construct_completion(&g, &p) {
            let mut events = g.events().to_vec();
            events.push(ev);
            prop_assert!(oracle::detect(&DynamicGraph::new(events), &p));
        }
    }
}

/// Every assignment of distinct timestamps 0..=5 to the six K4 edges, all
/// nine shapes, matcher vs reference; and the documented fact that some
/// assignment realizes every 4-node shape at once within window 10.
#[test]
fn k4_timestamp_family_exhaustive() {
    let pairs: [(u64, u64); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let mut times: Vec<u64> = (0..6).collect();
    let mut all_present_example: Option<Vec<u64>> = None;

    // Heap-style permutation enumeration, checked at each leaf.
    fn visit(
        times: &mut Vec<u64>,
        at: usize,
        pairs: &[(u64, u64); 6],
        all_present_example: &mut Option<Vec<u64>>,
    ) {
        if at == times.len() {
            let events: Vec<EdgeEvent> = pairs
                .iter()
                .zip(times.iter())
                .map(|(&(u, v), &t)| EdgeEvent::new(u, v, t, Op::Add).unwrap())
                .collect();
            let g = DynamicGraph::new(events);
            let mut all = true;
            for shape in &catalog::CATALOG {
                let p = shape.pattern(10);
                let fast = detect(&g, &p);
                assert_eq!(fast, oracle::detect(&g, &p), "{} on {:?}", shape.name, times);
                if shape.k <= 4 && !fast {
                    all = false;
                }
            }
            if all && all_present_example.is_none() {
                *all_present_example = Some(times.clone());
            }
            return;
        }
        for i in at..times.len() {
            times.swap(at, i);
            visit(times, at + 1, pairs, all_present_example);
            times.swap(at, i);
        }
    }

    visit(&mut times, 0, &pairs, &mut all_present_example);
    let example = all_present_example.expect("some K4 timing realizes all 4-node shapes");
    eprintln!("K4 assignment with every 4-node shape present: {example:?}");
}
