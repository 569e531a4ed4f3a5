use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::event::{EdgeEvent, Op};
use crate::graph::DynamicGraph;

/// Error with the byte offset in the input where parsing stopped making
/// sense.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl ParseError {
    fn new(pos: usize, msg: impl Into<String>) -> ParseError {
        ParseError { pos, msg: msg.into() }
    }
}

/// Parses the text form of an event list: `[(u, v, t, a), (u, v, t, d), ...]`.
///
/// Whitespace is free-form, op tokens may be bare or quoted (`a`, 'a', "a"),
/// and a trailing comma before `]` is tolerated. Self-loops and non-integer
/// fields are rejected with the offending position.
pub fn parse_events(input: &str) -> Result<Vec<EdgeEvent>, ParseError> {
    let mut p = Cursor { src: input.as_bytes(), pos: 0 };
    p.skip_ws();
    p.expect(b'[')?;
    let mut events = Vec::new();
    loop {
        p.skip_ws();
        match p.peek() {
            Some(b']') => {
                p.pos += 1;
                break;
            }
            Some(b'(') => {
                events.push(parse_tuple(&mut p)?);
                p.skip_ws();
                match p.peek() {
                    Some(b',') => {
                        p.pos += 1;
                    }
                    Some(b']') => {}
                    _ => return Err(ParseError::new(p.pos, "expected ',' or ']' after event")),
                }
            }
            _ => return Err(ParseError::new(p.pos, "expected '(' starting an event or ']'")),
        }
    }
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(ParseError::new(p.pos, "trailing input after event list"));
    }
    Ok(events)
}

/// `parse_events` plus graph construction.
pub fn parse_graph(input: &str) -> Result<DynamicGraph, ParseError> {
    Ok(DynamicGraph::new(parse_events(input)?))
}

fn parse_tuple(p: &mut Cursor) -> Result<EdgeEvent, ParseError> {
    let start = p.pos;
    p.expect(b'(')?;
    let u = p.parse_u64()?;
    p.expect_comma()?;
    let v = p.parse_u64()?;
    p.expect_comma()?;
    let t = p.parse_u64()?;
    p.expect_comma()?;
    let op = p.parse_op()?;
    p.skip_ws();
    p.expect(b')')?;
    EdgeEvent::new(u, v, t, op).map_err(|e| ParseError::new(start, e.to_string()))
}

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b) if b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, b: u8) -> Result<(), ParseError> {
        self.skip_ws();
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(ParseError::new(self.pos, format!("expected '{}'", b as char)))
        }
    }

    fn expect_comma(&mut self) -> Result<(), ParseError> {
        self.expect(b',')
    }

    fn parse_u64(&mut self) -> Result<u64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(ParseError::new(start, "expected a non-negative integer"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        text.parse()
            .map_err(|_| ParseError::new(start, "integer out of range"))
    }

    fn parse_op(&mut self) -> Result<Op, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let quote = match self.peek() {
            Some(q @ (b'\'' | b'"')) => {
                self.pos += 1;
                Some(q)
            }
            _ => None,
        };
        let tok_start = self.pos;
        while matches!(self.peek(), Some(b) if b.is_ascii_alphabetic()) {
            self.pos += 1;
        }
        let tok = std::str::from_utf8(&self.src[tok_start..self.pos]).unwrap().to_owned();
        if let Some(q) = quote {
            if self.peek() != Some(q) {
                return Err(ParseError::new(self.pos, "unterminated quote around op"));
            }
            self.pos += 1;
        }
        Op::from_token(&tok)
            .ok_or_else(|| ParseError::new(start, format!("expected op 'a' or 'd', got {tok:?}")))
    }
}

/// Renders events in the canonical text form: `[(1, 2, 0, a), (0, 2, 1, a)]`.
pub fn format_events(events: &[EdgeEvent]) -> String {
    let mut out = String::from("[");
    for (i, ev) in events.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        let _ = write!(out, "{ev}");
    }
    out.push(']');
    out
}

/// One graph per JSONL line: `{"events": [[u, v, t, "a"], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphRecord {
    pub events: Vec<EdgeEvent>,
}

impl GraphRecord {
    pub fn into_graph(self) -> DynamicGraph {
        DynamicGraph::new(self.events)
    }
}

impl From<&DynamicGraph> for GraphRecord {
    fn from(g: &DynamicGraph) -> GraphRecord {
        GraphRecord { events: g.events().to_vec() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_canonical_text() {
        let evs = parse_events("[(1, 4, 0, a), (2, 3, 1, a), (0, 3, 5, d)]").unwrap();
        assert_eq!(evs.len(), 3);
        assert_eq!(evs[2], EdgeEvent::new(0, 3, 5, Op::Delete).unwrap());
    }

    #[test]
    fn tolerates_quotes_newlines_and_trailing_comma() {
        let evs = parse_events("[\n  (1, 4, 0, 'a'),\n  (2, 3, 1, \"d\"),\n]").unwrap();
        assert_eq!(evs[1].op, Op::Delete);
    }

    #[test]
    fn empty_list_is_fine() {
        assert_eq!(parse_events("[]").unwrap(), Vec::new());
        assert_eq!(parse_events(" [ ] ").unwrap(), Vec::new());
    }

    #[test]
    fn reports_positions() {
        let err = parse_events("[(1, 4, 0, a), (2, 2, 1, a)]").unwrap_err();
        assert_eq!(err.pos, 15);
        assert!(err.msg.contains("self-loop"));

        let err = parse_events("[(1, 4, 0, x)]").unwrap_err();
        assert_eq!(err.pos, 11);

        let err = parse_events("[(1, 4, 0, a)] junk").unwrap_err();
        assert!(err.msg.contains("trailing"));
    }

    #[test]
    fn format_round_trips() {
        let text = "[(1, 4, 0, a), (2, 3, 1, a), (4, 2, 2, d)]";
        let evs = parse_events(text).unwrap();
        assert_eq!(format_events(&evs), text);
        assert_eq!(format_events(&[]), "[]");
    }

    #[test]
    fn graph_record_json_shape() {
        let g = parse_graph("[(1, 2, 0, a)]").unwrap();
        let json = serde_json::to_string(&GraphRecord::from(&g)).unwrap();
        assert_eq!(json, r#"{"events":[[1,2,0,"a"]]}"#);
    }
}
