//! The built-in motif catalog: nine named shapes with fixed edge orderings.
//!
//! The ordering of each shape's edges is part of its identity: matching
//! requires host timestamps to increase along exactly this rank order (up
//! to the pattern's automorphisms). The orderings below follow the
//! canonical presentation of each shape: cycles are walked around, the
//! triangle-based shapes close the triangle before attaching extras, and
//! the butterfly walks its two wings so that consecutive edges always share
//! a node (a plain cycle walk would make it indistinguishable from the
//! 4-cycle).

use crate::pattern::MotifPattern;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MotifShape {
    pub name: &'static str,
    pub k: usize,
    pub edges: &'static [(usize, usize)],
}

impl MotifShape {
    pub fn l(&self) -> usize {
        self.edges.len()
    }

    /// Instantiates the shape with a concrete time window.
    pub fn pattern(&self, delta: u64) -> MotifPattern {
        MotifPattern::new(self.name, self.k, self.edges.to_vec(), delta)
            .expect("catalog shapes are valid by construction")
    }
}

/// All known shapes, in the order they are listed to models.
pub const CATALOG: [MotifShape; 9] = [
    MotifShape { name: "triangle", k: 3, edges: &[(0, 1), (1, 2), (2, 0)] },
    MotifShape { name: "3-star", k: 4, edges: &[(0, 1), (0, 2), (0, 3)] },
    MotifShape { name: "4-path", k: 4, edges: &[(0, 1), (1, 2), (2, 3)] },
    MotifShape { name: "4-cycle", k: 4, edges: &[(0, 1), (1, 2), (2, 3), (3, 0)] },
    // Chord (1, 3): exactly the first five clique edges after dropping
    // (0, 1), so a timestamped K4 that realizes the 4-clique realizes the
    // chordal cycle too (the `equivalence` suite checks this exhaustively).
    MotifShape {
        name: "4-chordalcycle",
        k: 4,
        edges: &[(0, 1), (1, 2), (2, 3), (3, 0), (1, 3)],
    },
    MotifShape {
        name: "4-tailedtriangle",
        k: 4,
        edges: &[(0, 1), (1, 2), (2, 0), (0, 3)],
    },
    MotifShape {
        name: "4-clique",
        k: 4,
        edges: &[(0, 1), (1, 2), (2, 0), (0, 3), (1, 3), (2, 3)],
    },
    MotifShape { name: "butterfly", k: 4, edges: &[(0, 1), (1, 2), (0, 3), (3, 2)] },
    MotifShape {
        name: "bitriangle",
        k: 6,
        edges: &[(0, 1), (1, 3), (3, 5), (5, 4), (4, 2), (2, 0)],
    },
];

pub fn shape(name: &str) -> Option<&'static MotifShape> {
    CATALOG.iter().find(|s| s.name == name)
}

/// Shape instantiated with a window, or `None` for unknown names.
pub fn pattern(name: &str, delta: u64) -> Option<MotifPattern> {
    shape(name).map(|s| s.pattern(delta))
}

/// Names in catalog order.
pub fn names() -> Vec<&'static str> {
    CATALOG.iter().map(|s| s.name).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_shape_validates() {
        for s in &CATALOG {
            let p = s.pattern(10);
            assert_eq!(p.k(), s.k, "{}", s.name);
            assert_eq!(p.l(), s.edges.len(), "{}", s.name);
        }
    }

    #[test]
    fn lookup_by_name() {
        assert_eq!(shape("4-clique").unwrap().l(), 6);
        assert_eq!(shape("bitriangle").unwrap().k, 6);
        assert!(shape("pentagon").is_none());
    }

    #[test]
    fn consecutive_edges_share_a_node_except_butterfly_wings() {
        // Every shape but the butterfly even satisfies the stronger
        // "consecutive edges share a node" form of connectivity. The
        // butterfly interleaves its two wedges (0-1-2 and 0-3-2), so its
        // middle pair (1,2) -> (0,3) is disjoint; only the union form of
        // connectivity holds there (checked by the pattern validator).
        for s in &CATALOG {
            let breaks: Vec<usize> = s
                .edges
                .windows(2)
                .enumerate()
                .filter(|(_, w)| {
                    let (a, b) = w[0];
                    let (c, d) = w[1];
                    a != c && a != d && b != c && b != d
                })
                .map(|(i, _)| i)
                .collect();
            if s.name == "butterfly" {
                assert_eq!(breaks, vec![1], "butterfly wings interleave once");
            } else {
                assert!(breaks.is_empty(), "{}: disjoint consecutive edges", s.name);
            }
        }
    }
}
