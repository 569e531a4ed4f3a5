//! Core types for undirected dynamic graphs.
//!
//! A dynamic graph is an ordered sequence of events `(u, v, t, op)` where
//! `op` is `a` (add) or `d` (delete), the pair is undirected, and node ids
//! and timestamps are non-negative integers. Event order in the source is
//! significant and preserved; identical duplicate events are allowed and
//! remain distinct by index.

pub mod event;
pub mod graph;
pub mod jsonl;
pub mod level0;
pub mod parse;

pub use event::{EdgeEvent, NodePair, Op};
pub use graph::{DynamicGraph, StaticProjection};
pub use level0::{active_edges_at, first_link_dislink, reverse_graph, sort_events};
pub use jsonl::{read_jsonl, write_jsonl, JsonlError};
pub use parse::{format_events, parse_events, parse_graph, GraphRecord, ParseError};
