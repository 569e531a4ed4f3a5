use std::fmt;

use serde::de::{self, SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Operation carried by an event: an edge is either added or deleted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Op {
    Add,
    Delete,
}

impl Op {
    pub fn as_str(self) -> &'static str {
        match self {
            Op::Add => "a",
            Op::Delete => "d",
        }
    }

    pub fn from_token(tok: &str) -> Option<Op> {
        match tok {
            "a" => Some(Op::Add),
            "d" => Some(Op::Delete),
            _ => None,
        }
    }

    /// The opposite operation (add <-> delete).
    pub fn flipped(self) -> Op {
        match self {
            Op::Add => Op::Delete,
            Op::Delete => Op::Add,
        }
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A single timestamped event `(u, v, t, op)` on an undirected pair.
///
/// Invariant: `u != v` (no self-loops). Node ids and timestamps are
/// non-negative integers. The pair is undirected, so `(u, v)` and `(v, u)`
/// refer to the same edge; the stored orientation is whatever the source
/// used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EdgeEvent {
    pub u: u64,
    pub v: u64,
    pub t: u64,
    pub op: Op,
}

impl EdgeEvent {
    /// Builds an event, rejecting self-loops.
    pub fn new(u: u64, v: u64, t: u64, op: Op) -> Result<EdgeEvent, SelfLoop> {
        if u == v {
            return Err(SelfLoop { node: u, t });
        }
        Ok(EdgeEvent { u, v, t, op })
    }

    /// The undirected pair this event touches, in canonical order.
    pub fn pair(&self) -> NodePair {
        NodePair::new(self.u, self.v)
    }

    /// Same event with the operation flipped.
    pub fn flipped(&self) -> EdgeEvent {
        EdgeEvent { op: self.op.flipped(), ..*self }
    }
}

impl fmt::Display for EdgeEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.u, self.v, self.t, self.op)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("self-loop on node {node} at time {t}")]
pub struct SelfLoop {
    pub node: u64,
    pub t: u64,
}

// Events serialize as `[u, v, t, "a"]` so that a graph is a plain JSON
// array of arrays.
impl Serialize for EdgeEvent {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(4))?;
        seq.serialize_element(&self.u)?;
        seq.serialize_element(&self.v)?;
        seq.serialize_element(&self.t)?;
        seq.serialize_element(self.op.as_str())?;
        seq.end()
    }
}

impl<'de> Deserialize<'de> for EdgeEvent {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<EdgeEvent, D::Error> {
        struct EventVisitor;

        impl<'de> Visitor<'de> for EventVisitor {
            type Value = EdgeEvent;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an event array [u, v, t, op]")
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<EdgeEvent, A::Error> {
                let u: u64 = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::invalid_length(0, &self))?;
                let v: u64 = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::invalid_length(1, &self))?;
                let t: u64 = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::invalid_length(2, &self))?;
                let op: String = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::invalid_length(3, &self))?;
                if seq.next_element::<serde::de::IgnoredAny>()?.is_some() {
                    return Err(de::Error::invalid_length(5, &self));
                }
                let op = Op::from_token(&op)
                    .ok_or_else(|| de::Error::custom(format!("unknown op token {op:?}")))?;
                EdgeEvent::new(u, v, t, op).map_err(de::Error::custom)
            }
        }

        deserializer.deserialize_seq(EventVisitor)
    }
}

/// An undirected node pair stored in canonical `(min, max)` order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodePair(pub u64, pub u64);

impl NodePair {
    /// Canonicalizes the orientation; `u` and `v` may come in either order.
    pub fn new(u: u64, v: u64) -> NodePair {
        if u <= v {
            NodePair(u, v)
        } else {
            NodePair(v, u)
        }
    }
}

impl fmt::Display for NodePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.0, self.1)
    }
}
