use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

/// A temporal motif pattern: `l` rank-ordered symbolic edges over `k` node
/// symbols, to be matched with strictly increasing timestamps spanning at
/// most `delta`.
///
/// Invariants (checked by [`MotifPattern::new`]):
/// - symbols are exactly `0..k` and every symbol is used;
/// - no self-loops, no repeated unordered symbol pair;
/// - every edge after the first shares a symbol with the union of symbols
///   of the edges before it (connectivity in rank order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MotifPattern {
    name: String,
    k: usize,
    delta: u64,
    edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PatternError {
    #[error("pattern has no edges")]
    Empty,
    #[error("edge {rank} is a self-loop on symbol {symbol}")]
    SelfLoop { rank: usize, symbol: usize },
    #[error("edge {rank} repeats the symbol pair ({a}, {b})")]
    DuplicateEdge { rank: usize, a: usize, b: usize },
    #[error("symbol {symbol} out of range for k={k}")]
    SymbolOutOfRange { symbol: usize, k: usize },
    #[error("symbol {symbol} is never used")]
    UnusedSymbol { symbol: usize },
    #[error("edge {rank} shares no symbol with the edges before it")]
    Disconnected { rank: usize },
    #[error("edge {rank} token {token:?} is malformed: {reason}")]
    BadToken { rank: usize, token: String, reason: String },
}

impl MotifPattern {
    pub fn new(
        name: impl Into<String>,
        k: usize,
        edges: Vec<(usize, usize)>,
        delta: u64,
    ) -> Result<MotifPattern, PatternError> {
        if edges.is_empty() {
            return Err(PatternError::Empty);
        }
        let mut seen_pairs = BTreeSet::new();
        let mut seen_symbols = BTreeSet::new();
        for (rank, &(a, b)) in edges.iter().enumerate() {
            if a == b {
                return Err(PatternError::SelfLoop { rank, symbol: a });
            }
            for s in [a, b] {
                if s >= k {
                    return Err(PatternError::SymbolOutOfRange { symbol: s, k });
                }
            }
            if !seen_pairs.insert((a.min(b), a.max(b))) {
                return Err(PatternError::DuplicateEdge { rank, a, b });
            }
            if rank > 0 && !seen_symbols.contains(&a) && !seen_symbols.contains(&b) {
                return Err(PatternError::Disconnected { rank });
            }
            seen_symbols.insert(a);
            seen_symbols.insert(b);
        }
        if let Some(missing) = (0..k).find(|s| !seen_symbols.contains(s)) {
            return Err(PatternError::UnusedSymbol { symbol: missing });
        }
        Ok(MotifPattern { name: name.into(), k, delta, edges })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of node symbols.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of edges.
    pub fn l(&self) -> usize {
        self.edges.len()
    }

    /// Time window: matched instances must satisfy `t_last - t_first <= delta`.
    pub fn delta(&self) -> u64 {
        self.delta
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn with_delta(&self, delta: u64) -> MotifPattern {
        MotifPattern { delta, ..self.clone() }
    }

    /// Symbolic text form used in prompts:
    /// `[(u0, u1, t0, a), (u1, u2, t1, a), ...]`.
    pub fn edge_text(&self) -> String {
        let parts: Vec<String> = self
            .edges
            .iter()
            .enumerate()
            .map(|(r, (a, b))| format!("(u{a}, u{b}, t{r}, a)"))
            .collect();
        format!("[{}]", parts.join(", "))
    }
}

/// Wire form of a motif definition, as exchanged with models and tools:
/// `{"name": ..., "edge_pattern": [["u0","u1","t0","a"], ...], "time_window": N}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MotifDef {
    pub name: String,
    pub edge_pattern: Vec<[String; 4]>,
    pub time_window: u64,
}

impl MotifDef {
    pub fn from_pattern(p: &MotifPattern) -> MotifDef {
        MotifDef {
            name: p.name().to_owned(),
            edge_pattern: p
                .edges()
                .iter()
                .enumerate()
                .map(|(r, (a, b))| {
                    [format!("u{a}"), format!("u{b}"), format!("t{r}"), "a".to_owned()]
                })
                .collect(),
            time_window: p.delta,
        }
    }

    /// Parses the symbolic tokens back into a validated pattern. Node
    /// tokens are `u<digits>`, time tokens must be `t<rank>` in listed
    /// order, and the op must be `a`.
    pub fn to_pattern(&self) -> Result<MotifPattern, PatternError> {
        let mut edges = Vec::with_capacity(self.edge_pattern.len());
        let mut max_sym = 0;
        for (rank, tok) in self.edge_pattern.iter().enumerate() {
            let a = parse_symbol(&tok[0], 'u', rank)?;
            let b = parse_symbol(&tok[1], 'u', rank)?;
            let t = parse_symbol(&tok[2], 't', rank)?;
            if t != rank {
                return Err(PatternError::BadToken {
                    rank,
                    token: tok[2].clone(),
                    reason: format!("expected t{rank}"),
                });
            }
            if tok[3] != "a" {
                return Err(PatternError::BadToken {
                    rank,
                    token: tok[3].clone(),
                    reason: "motif edges must be add events".to_owned(),
                });
            }
            max_sym = max_sym.max(a).max(b);
            edges.push((a, b));
        }
        MotifPattern::new(self.name.clone(), max_sym + 1, edges, self.time_window)
    }
}

fn parse_symbol(token: &str, prefix: char, rank: usize) -> Result<usize, PatternError> {
    let bad = |reason: &str| PatternError::BadToken {
        rank,
        token: token.to_owned(),
        reason: reason.to_owned(),
    };
    let rest = token
        .strip_prefix(prefix)
        .ok_or_else(|| bad(&format!("expected prefix '{prefix}'")))?;
    rest.parse().map_err(|_| bad("expected an integer suffix"))
}
