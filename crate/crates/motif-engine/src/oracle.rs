//! Reference implementation by exhaustive search.
//!
//! This module re-derives every matcher answer from first principles:
//! enumerate all `l`-subsets of Add events, check the temporal constraints
//! on the time-sorted subset, then try every bijection of pattern symbols
//! onto the subset's nodes. It shares no code with the backtracking
//! matcher, runs in time exponential in the subset count, and exists so the
//! fast path can be checked against it. Keep it simple, not fast.

use std::collections::BTreeSet;

use dygraph_core::{DynamicGraph, Op};

use crate::pattern::MotifPattern;

/// All instances as sorted Add-event-index vectors.
pub fn instances(g: &DynamicGraph, pattern: &MotifPattern) -> BTreeSet<Vec<usize>> {
    let adds: Vec<(usize, u64, u64, u64)> = g
        .events()
        .iter()
        .enumerate()
        .filter(|(_, e)| e.op == Op::Add)
        .map(|(i, e)| (i, e.u, e.v, e.t))
        .collect();

    let mut found = BTreeSet::new();
    let mut subset = Vec::with_capacity(pattern.l());
    choose(&adds, pattern.l(), 0, &mut subset, &mut |chosen| {
        if subset_matches(chosen, pattern) {
            found.insert(chosen.iter().map(|&(i, ..)| i).collect());
        }
    });
    found
}

pub fn detect(g: &DynamicGraph, pattern: &MotifPattern) -> bool {
    !instances(g, pattern).is_empty()
}

pub fn count(g: &DynamicGraph, pattern: &MotifPattern) -> u64 {
    instances(g, pattern).len() as u64
}

pub fn first_occurrence(g: &DynamicGraph, pattern: &MotifPattern) -> Option<u64> {
    instances(g, pattern)
        .iter()
        .map(|idxs| {
            idxs.iter()
                .map(|&i| g.events()[i].t)
                .max()
                .expect("instances are non-empty")
        })
        .min()
}

fn subset_matches(subset: &[(usize, u64, u64, u64)], pattern: &MotifPattern) -> bool {
    // Temporal constraints on the time-sorted subset.
    let mut ordered = subset.to_vec();
    ordered.sort_by_key(|&(_, _, _, t)| t);
    if ordered.windows(2).any(|w| w[0].3 >= w[1].3) {
        return false; // equal timestamps never match
    }
    let span = ordered.last().unwrap().3 - ordered.first().unwrap().3;
    if span > pattern.delta() {
        return false;
    }

    // Node bijection: the subset must touch exactly k distinct nodes ...
    let nodes: Vec<u64> = ordered
        .iter()
        .flat_map(|&(_, u, v, _)| [u, v])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if nodes.len() != pattern.k() {
        return false;
    }

    // ... and some assignment of symbols to those nodes must reproduce the
    // pattern edges in time order.
    let mut perm = nodes.clone();
    let matches = |perm: &[u64]| {
        pattern.edges().iter().zip(&ordered).all(|(&(a, b), &(_, u, v, _))| {
            (perm[a], perm[b]) == (u, v) || (perm[a], perm[b]) == (v, u)
        })
    };
    permute(&mut perm, 0, &mut |p| matches(p))
}

/// Enumerates `k`-subsets of `items` in index order.
fn choose<T: Copy>(
    items: &[T],
    k: usize,
    start: usize,
    acc: &mut Vec<T>,
    visit: &mut impl FnMut(&[T]),
) {
    if acc.len() == k {
        visit(acc);
        return;
    }
    let needed = k - acc.len();
    for i in start..items.len() {
        if items.len() - i < needed {
            break;
        }
        acc.push(items[i]);
        choose(items, k, i + 1, acc, visit);
        acc.pop();
    }
}

/// Tries every permutation of `items[at..]`; true as soon as `test` passes.
fn permute(items: &mut [u64], at: usize, test: &mut impl FnMut(&[u64]) -> bool) -> bool {
    if at == items.len() {
        return test(items);
    }
    for i in at..items.len() {
        items.swap(at, i);
        if permute(items, at + 1, test) {
            items.swap(at, i);
            return true;
        }
        items.swap(at, i);
    }
    false
}
