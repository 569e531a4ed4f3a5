//! Tolerant parsing of the Action Input dictionary literal.
//!
//! Models are told the input "MUST be a dictionary", but in practice emit
//! a mix of JSON and Python literal syntax: single-quoted strings, tuples
//! in place of arrays, `True`/`False`/`None`, and trailing commas. This
//! module normalizes those forms to JSON before handing the text to
//! serde_json; anything beyond that is rejected.

/// Extract and parse the dictionary literal inside `text`. Returns `None`
/// when no parseable `{...}` object is present.
pub fn parse_dict_literal(text: &str) -> Option<serde_json::Value> {
    let start = text.find('{')?;
    let end = text.rfind('}')?;
    if end <= start {
        return None;
    }
    let normalized = normalize(&text[start..=end]);
    let value: serde_json::Value = serde_json::from_str(&normalized).ok()?;
    value.is_object().then_some(value)
}

/// Rewrite Python-flavored literal syntax to JSON. Operates outside string
/// contents only; double-quoted strings pass through untouched.
fn normalize(src: &str) -> String {
    #[derive(PartialEq)]
    enum Ctx {
        Plain,
        Double,
        Single,
    }
    let mut out = String::with_capacity(src.len());
    let mut ctx = Ctx::Plain;
    let mut chars = src.chars().peekable();
    while let Some(c) = chars.next() {
        match ctx {
            Ctx::Double => {
                out.push(c);
                if c == '\\' {
                    if let Some(next) = chars.next() {
                        out.push(next);
                    }
                } else if c == '"' {
                    ctx = Ctx::Plain;
                }
            }
            Ctx::Single => {
                if c == '\\' {
                    match chars.next() {
                        Some('\'') => out.push('\''),
                        Some(next) => {
                            out.push('\\');
                            out.push(next);
                        }
                        None => {}
                    }
                } else if c == '\'' {
                    out.push('"');
                    ctx = Ctx::Plain;
                } else if c == '"' {
                    out.push_str("\\\"");
                } else {
                    out.push(c);
                }
            }
            Ctx::Plain => match c {
                '"' => {
                    out.push(c);
                    ctx = Ctx::Double;
                }
                '\'' => {
                    out.push('"');
                    ctx = Ctx::Single;
                }
                '(' => out.push('['),
                ')' => out.push(']'),
                ',' => {
                    // Drop trailing commas before a closing bracket.
                    let mut lookahead = chars.clone();
                    loop {
                        match lookahead.peek() {
                            Some(w) if w.is_whitespace() => {
                                lookahead.next();
                            }
                            Some(']') | Some('}') => break,
                            _ => {
                                out.push(',');
                                break;
                            }
                        }
                    }
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let mut word = String::new();
                    word.push(c);
                    while let Some(&next) = chars.peek() {
                        if next.is_ascii_alphanumeric() || next == '_' {
                            word.push(next);
                            chars.next();
                        } else {
                            break;
                        }
                    }
                    match word.as_str() {
                        "True" => out.push_str("true"),
                        "False" => out.push_str("false"),
                        "None" => out.push_str("null"),
                        other => out.push_str(other),
                    }
                }
                other => out.push(other),
            },
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::parse_dict_literal;
    use serde_json::json;

    #[test]
    fn plain_json_passes_through() {
        let v = parse_dict_literal(r#"{"edge_list": [[0, 1, 2, "a"]], "n": 3}"#).unwrap();
        assert_eq!(v, json!({"edge_list": [[0, 1, 2, "a"]], "n": 3}));
    }

    #[test]
    fn python_flavors_are_normalized() {
        let v = parse_dict_literal(
            "{'edge_list': [(0, 1, 2, 'a'), (1, 2, 3, 'd'),], 'flag': True, 'x': None}",
        )
        .unwrap();
        assert_eq!(
            v,
            json!({"edge_list": [[0, 1, 2, "a"], [1, 2, 3, "d"]], "flag": true, "x": null})
        );
    }

    #[test]
    fn surrounding_prose_is_ignored() {
        let v = parse_dict_literal("here you go:\n{'a': 1}\nthanks").unwrap();
        assert_eq!(v, json!({"a": 1}));
    }

    #[test]
    fn garbage_is_rejected() {
        assert_eq!(parse_dict_literal("no dict here"), None);
        assert_eq!(parse_dict_literal("{broken"), None);
        assert_eq!(parse_dict_literal("[1, 2, 3]"), None);
    }

    #[test]
    fn brace_words_inside_strings_survive() {
        let v = parse_dict_literal(r#"{"note": "keep (parens) and 'quotes'"}"#).unwrap();
        assert_eq!(v, json!({"note": "keep (parens) and 'quotes'"}));
    }
}
