//! Benchmark generation for temporal-motif reasoning over dynamic graphs.
//!
//! This crate turns the exact matcher in `motif-engine` into datasets:
//! - single-motif tasks (classification, detection, construction),
//! - multi-motif tasks over the full catalog (presence, first occurrence,
//!   counts),
//! - warm-up tasks about the raw event stream (sorting, link/dislink
//!   times, active edges, reversal),
//! - parameter sweeps of mean motif counts, and
//! - ego-network samples of real edge-stream snapshots.
//!
//! Everything is seeded: the same seed always reproduces the same
//! instance, byte for byte, and every stored ground truth is re-derivable
//! from the stored graph.

pub mod ego;
pub mod graph_gen;
pub mod instance;
pub mod params;
pub mod settings;
pub mod sweep;
pub mod tasks;

pub use ego::{ego_sample, parse_snapshot};
pub use graph_gen::{gen_dynamic_graph, gen_events, rng_for, sort_canonical};
pub use instance::{
    GroundTruth, Query, TaskInstance, TaskKind, VerifyError, ViolationTag, ALL_TASKS,
    ALL_VIOLATIONS,
};
pub use params::{GenError, GenParams};
pub use sweep::{parameter_sweep, sweep_csv, SweepRow};
pub use tasks::{
    gen_classification_instance, gen_construction_instance, gen_dataset, gen_detection_instance,
    gen_level0_instance, gen_level2_instance, level2_patterns,
};
