//! Tolerant answer parsing. Only the text after the LAST `Answer:` marker
//! is interpreted; markdown decoration is ignored. Failures never error —
//! they become `ParsedAnswer::ParseFailure`, which scores zero.

use std::collections::{BTreeMap, BTreeSet};

use bench_gen::TaskKind;
use dygraph_core::{EdgeEvent, Op};
use motif_engine::CATALOG;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum ParsedAnswer {
    Bool(bool),
    /// Edge events, e.g. a construction edit list.
    Events(Vec<EdgeEvent>),
    /// Motif names, deduplicated and sorted.
    Names(Vec<String>),
    /// Motif name → integer (first-occurrence times or counts).
    NameInts(BTreeMap<String, u64>),
    /// Two integers, e.g. first link / first dislink times.
    IntPair(u64, u64),
    /// Unordered node pairs, deduplicated and sorted.
    NodePairs(Vec<(u64, u64)>),
    ParseFailure,
}

/// The answer region: everything after the last `Answer:` marker
/// (case-insensitive), with markdown decoration characters removed.
fn answer_tail(raw: &str) -> Option<String> {
    let cleaned: String = raw.chars().filter(|c| !matches!(c, '*' | '_' | '`' | '#')).collect();
    let lower = cleaned.to_lowercase();
    let pos = lower.rfind("answer:")?;
    Some(cleaned[pos + "answer:".len()..].to_owned())
}

fn parse_bool(tail: &str) -> Option<bool> {
    for token in tail.split(|c: char| !c.is_ascii_alphanumeric()) {
        match token.to_ascii_lowercase().as_str() {
            "yes" => return Some(true),
            "no" => return Some(false),
            "" => continue,
            _ => continue,
        }
    }
    None
}

/// All parenthesized tuples in the tail, as raw comma-split fields with
/// quotes and whitespace trimmed.
fn tuples(tail: &str) -> Vec<Vec<String>> {
    let mut out = Vec::new();
    let mut rest = tail;
    while let Some(open) = rest.find('(') {
        let Some(close_rel) = rest[open..].find(')') else { break };
        let inner = &rest[open + 1..open + close_rel];
        out.push(
            inner
                .split(',')
                .map(|f| f.trim().trim_matches(|c| c == '\'' || c == '"').trim().to_owned())
                .collect(),
        );
        rest = &rest[open + close_rel + 1..];
    }
    out
}

fn field_u64(s: &str) -> Option<u64> {
    s.parse::<u64>().ok()
}

fn parse_events_impl(tail: &str) -> Option<Vec<EdgeEvent>> {
    let tuples = tuples(tail);
    let four: Vec<&Vec<String>> = tuples.iter().filter(|t| t.len() == 4).collect();
    if four.is_empty() {
        return None;
    }
    let mut events = Vec::with_capacity(four.len());
    for t in four {
        let u = field_u64(&t[0])?;
        let v = field_u64(&t[1])?;
        let time = field_u64(&t[2])?;
        let op = Op::from_token(&t[3])?;
        events.push(EdgeEvent::new(u, v, time, op).ok()?);
    }
    Some(events)
}

/// Tokens that can name a motif or carry an integer, in order.
enum Token {
    Name(&'static str),
    Int(u64),
}

fn name_int_tokens(tail: &str) -> Vec<Token> {
    tail.split(|c: char| !(c.is_ascii_alphanumeric() || c == '-'))
        .filter(|t| !t.is_empty())
        .filter_map(|t| {
            if let Some(shape) = CATALOG.iter().find(|s| s.name.eq_ignore_ascii_case(t)) {
                Some(Token::Name(shape.name))
            } else {
                t.parse::<u64>().ok().map(Token::Int)
            }
        })
        .collect()
}

fn parse_names(tail: &str) -> Vec<String> {
    let mut names = BTreeSet::new();
    for token in name_int_tokens(tail) {
        if let Token::Name(n) = token {
            names.insert(n.to_owned());
        }
    }
    names.into_iter().collect()
}

fn parse_name_ints(tail: &str) -> BTreeMap<String, u64> {
    let mut map = BTreeMap::new();
    let tokens = name_int_tokens(tail);
    let mut i = 0;
    while i < tokens.len() {
        if let Token::Name(name) = tokens[i] {
            if let Some(Token::Int(value)) = tokens.get(i + 1) {
                map.insert(name.to_owned(), *value);
                i += 2;
                continue;
            }
        }
        i += 1;
    }
    map
}

fn parse_int_pair(tail: &str) -> Option<(u64, u64)> {
    let mut ints = tail
        .split(|c: char| !c.is_ascii_digit())
        .filter(|t| !t.is_empty())
        .filter_map(|t| t.parse::<u64>().ok());
    Some((ints.next()?, ints.next()?))
}

fn parse_node_pairs(tail: &str) -> Option<Vec<(u64, u64)>> {
    let tuples = tuples(tail);
    let two: Vec<&Vec<String>> = tuples.iter().filter(|t| t.len() == 2).collect();
    if two.is_empty() {
        // An explicitly empty list is a valid "no edges" answer.
        return tail.contains("[]").then(Vec::new);
    }
    let mut pairs = BTreeSet::new();
    for t in two {
        let a = field_u64(&t[0])?;
        let b = field_u64(&t[1])?;
        pairs.insert((a.min(b), a.max(b)));
    }
    Some(pairs.into_iter().collect())
}

/// Parse a raw model response for the given task. Never fails: anything
/// uninterpretable comes back as `ParseFailure`.
pub fn parse_answer(raw: &str, task: TaskKind) -> ParsedAnswer {
    let Some(tail) = answer_tail(raw) else {
        return ParsedAnswer::ParseFailure;
    };
    match task {
        TaskKind::Classification | TaskKind::Detection => match parse_bool(&tail) {
            Some(b) => ParsedAnswer::Bool(b),
            None => ParsedAnswer::ParseFailure,
        },
        TaskKind::Construction
        | TaskKind::Level0SortEdge
        | TaskKind::Level0ReverseGraph => match parse_events_impl(&tail) {
            Some(events) => ParsedAnswer::Events(events),
            None => ParsedAnswer::ParseFailure,
        },
        TaskKind::MultiDetect => ParsedAnswer::Names(parse_names(&tail)),
        TaskKind::Occurrence | TaskKind::MultiCount => {
            ParsedAnswer::NameInts(parse_name_ints(&tail))
        }
        TaskKind::Level0WhenLinkDislink => match parse_int_pair(&tail) {
            Some((a, b)) => ParsedAnswer::IntPair(a, b),
            None => ParsedAnswer::ParseFailure,
        },
        TaskKind::Level0WhatEdges => match parse_node_pairs(&tail) {
            Some(pairs) => ParsedAnswer::NodePairs(pairs),
            None => ParsedAnswer::ParseFailure,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn last_answer_marker_wins() {
        let raw = "Thinking... Answer: No. Wait, let me reconsider.\nAnswer: Yes";
        assert_eq!(parse_answer(raw, TaskKind::Detection), ParsedAnswer::Bool(true));
    }

    #[test]
    fn markdown_and_case_are_tolerated() {
        assert_eq!(
            parse_answer("**Answer:** YES", TaskKind::Classification),
            ParsedAnswer::Bool(true)
        );
        assert_eq!(
            parse_answer("**Answer**: no", TaskKind::Classification),
            ParsedAnswer::Bool(false)
        );
        // "no" must be a standalone word: "node" is not an answer.
        assert_eq!(
            parse_answer("Answer: node", TaskKind::Classification),
            ParsedAnswer::ParseFailure
        );
    }

    #[test]
    fn missing_marker_is_a_parse_failure() {
        assert_eq!(parse_answer("Yes, definitely", TaskKind::Detection), ParsedAnswer::ParseFailure);
    }

    #[test]
    fn event_lists_parse_with_quote_variants() {
        let expect = ParsedAnswer::Events(vec![
            EdgeEvent::new(5, 7, 5, Op::Add).unwrap(),
            EdgeEvent::new(1, 2, 3, Op::Delete).unwrap(),
        ]);
        for raw in [
            "Answer: [(5, 7, 5, a), (1, 2, 3, d)]",
            "Answer: [(5, 7, 5, 'a'), (1, 2, 3, 'd')]",
            "Answer: [(5,7,5,\"a\"), (1,2,3,\"d\")]",
            "Answer: (5, 7, 5, a), (1, 2, 3, d)",
        ] {
            assert_eq!(parse_answer(raw, TaskKind::Construction), expect, "{raw}");
        }
        assert_eq!(
            parse_answer("Answer: [(5, 7, -1, a)]", TaskKind::Construction),
            ParsedAnswer::ParseFailure
        );
        assert_eq!(
            parse_answer("Answer: [(5, 5, 1, a)]", TaskKind::Construction),
            ParsedAnswer::ParseFailure,
            "self-loops are not valid events"
        );
    }

    #[test]
    fn name_lists_match_whole_tokens_only() {
        let parsed = parse_answer(
            "Answer: triangle, 4-tailedtriangle and bitriangle",
            TaskKind::MultiDetect,
        );
        assert_eq!(
            parsed,
            ParsedAnswer::Names(vec![
                "4-tailedtriangle".into(),
                "bitriangle".into(),
                "triangle".into(),
            ])
        );
        assert_eq!(
            parse_answer("Answer: none", TaskKind::MultiDetect),
            ParsedAnswer::Names(vec![])
        );
    }

    #[test]
    fn name_int_tuples_parse_in_several_shapes() {
        let expect: BTreeMap<String, u64> =
            [("triangle".to_owned(), 3), ("3-star".to_owned(), 5)].into();
        for raw in [
            "Answer: [(triangle, 3), (3-star, 5)]",
            "Answer: [('triangle', 3), ('3-star', 5)]",
            "Answer: triangle: 3, 3-star: 5",
        ] {
            assert_eq!(
                parse_answer(raw, TaskKind::MultiCount),
                ParsedAnswer::NameInts(expect.clone()),
                "{raw}"
            );
        }
        assert_eq!(
            parse_answer("Answer: []", TaskKind::Occurrence),
            ParsedAnswer::NameInts(BTreeMap::new())
        );
    }

    #[test]
    fn int_pairs_and_node_pairs() {
        assert_eq!(
            parse_answer("Answer: (0, 2)", TaskKind::Level0WhenLinkDislink),
            ParsedAnswer::IntPair(0, 2)
        );
        assert_eq!(
            parse_answer("Answer: first linked at 1, first dislinked at 4", TaskKind::Level0WhenLinkDislink),
            ParsedAnswer::IntPair(1, 4)
        );
        assert_eq!(
            parse_answer("Answer: [(2, 1), (3, 4), (1, 2)]", TaskKind::Level0WhatEdges),
            ParsedAnswer::NodePairs(vec![(1, 2), (3, 4)])
        );
        assert_eq!(
            parse_answer("Answer: []", TaskKind::Level0WhatEdges),
            ParsedAnswer::NodePairs(vec![])
        );
        assert_eq!(
            parse_answer("Answer: nothing", TaskKind::Level0WhatEdges),
            ParsedAnswer::ParseFailure
        );
    }

    #[test]
    fn parsed_answers_roundtrip_as_json() {
        for parsed in [
            ParsedAnswer::Bool(true),
            ParsedAnswer::Events(vec![EdgeEvent::new(0, 1, 2, Op::Add).unwrap()]),
            ParsedAnswer::Names(vec!["triangle".into()]),
            ParsedAnswer::NameInts([("triangle".to_owned(), 2)].into()),
            ParsedAnswer::IntPair(1, 2),
            ParsedAnswer::NodePairs(vec![(0, 1)]),
            ParsedAnswer::ParseFailure,
        ] {
            let json = serde_json::to_string(&parsed).unwrap();
            let back: ParsedAnswer = serde_json::from_str(&json).unwrap();
            assert_eq!(back, parsed);
        }
    }
}
