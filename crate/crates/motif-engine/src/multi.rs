//! Catalog-wide queries: presence, first appearance and counts for a set
//! of patterns over one graph.

use std::collections::BTreeMap;

use dygraph_core::DynamicGraph;

use crate::matcher::{count_instances, detect, first_occurrence};
use crate::pattern::MotifPattern;

/// Presence flag for every pattern, keyed by name.
pub fn multi_detect(g: &DynamicGraph, patterns: &[MotifPattern]) -> BTreeMap<String, bool> {
    patterns
        .iter()
        .map(|p| (p.name().to_owned(), detect(g, p)))
        .collect()
}

/// First-appearance time (last edge of the earliest-completing instance)
/// for each pattern that is present; absent patterns are omitted.
pub fn multi_first_occurrence(
    g: &DynamicGraph,
    patterns: &[MotifPattern],
) -> BTreeMap<String, u64> {
    patterns
        .iter()
        .filter_map(|p| first_occurrence(g, p).map(|t| (p.name().to_owned(), t)))
        .collect()
}

/// Instance count for each pattern that is present; absent patterns are
/// omitted.
pub fn multi_count(g: &DynamicGraph, patterns: &[MotifPattern]) -> BTreeMap<String, u64> {
    patterns
        .iter()
        .filter_map(|p| {
            let c = count_instances(g, p);
            (c > 0).then(|| (p.name().to_owned(), c))
        })
        .collect()
}
