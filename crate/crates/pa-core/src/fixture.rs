//! Plain-text PA format and the bundled example fixtures.
//!
//! ```text
//! # comment
//! state s
//! state t
//! init s
//! trans s tau { t:1/1 }
//! trans s a { s:1/2, t:1/2 }
//! ```
//!
//! States must be declared before they are used. Probabilities may be written `p/q` or as
//! an integer. Labels are single tokens; `tau` is the unobservable action.

use thiserror::Error;

use crate::dist::{parse_prob, Distribution};
use crate::pa::{Label, Pa, PaBuilder};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct FixtureError {
    pub line: usize,
    pub message: String,
}

pub fn parse_fixture(text: &str) -> Result<Pa, FixtureError> {
    let mut builder = PaBuilder::new();
    let mut initial_seen = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let err = |message: String| FixtureError { line: line_no, message };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match keyword {
            "state" => {
                if rest.is_empty() || rest.contains(char::is_whitespace) {
                    return Err(err(format!("expected a single state name, found `{rest}`")));
                }
                builder.add_state(rest).map_err(|e| err(e.to_string()))?;
            }
            "init" => {
                let s = builder
                    .state_id(rest)
                    .ok_or_else(|| err(format!("undeclared state `{rest}`")))?;
                if initial_seen {
                    return Err(err("initial state declared twice".into()));
                }
                initial_seen = true;
                builder.set_initial(s);
            }
            "trans" => {
                let (src, rest) = rest
                    .split_once(char::is_whitespace)
                    .ok_or_else(|| err("expected `trans <src> <label> { ... }`".into()))?;
                let rest = rest.trim_start();
                let (label, rest) = rest
                    .split_once(char::is_whitespace)
                    .ok_or_else(|| err("expected a label and a distribution".into()))?;
                let src = builder
                    .state_id(src)
                    .ok_or_else(|| err(format!("undeclared state `{src}`")))?;
                let body = rest
                    .trim()
                    .strip_prefix('{')
                    .and_then(|b| b.strip_suffix('}'))
                    .ok_or_else(|| err("distribution must be enclosed in braces".into()))?;
                let mut entries = Vec::new();
                for entry in body.split(',') {
                    let entry = entry.trim();
                    if entry.is_empty() {
                        continue;
                    }
                    let (name, prob) = entry
                        .split_once(':')
                        .ok_or_else(|| err(format!("expected `state:prob`, found `{entry}`")))?;
                    let target = builder
                        .state_id(name.trim())
                        .ok_or_else(|| err(format!("undeclared state `{}`", name.trim())))?;
                    entries.push((target, parse_prob(prob).map_err(|e| err(e.to_string()))?));
                }
                let dist = Distribution::new(entries).map_err(|e| err(e.to_string()))?;
                builder.add_transition(src, Label::parse(label), dist);
            }
            other => return Err(err(format!("unknown declaration `{other}`"))),
        }
    }
    builder.build().map_err(|e| FixtureError { line: 0, message: e.to_string() })
}

/// Serialises a PA in the fixture format; `parse_fixture` reads it back unchanged.
pub fn write_fixture(pa: &Pa) -> String {
    let mut out = String::new();
    for s in pa.states() {
        out.push_str(&format!("state {}\n", pa.name(s)));
    }
    out.push_str(&format!("init {}\n", pa.name(pa.initial())));
    for t in pa.transitions() {
        let entries: Vec<String> = t
            .dist
            .iter()
            .map(|(s, p)| format!("{}:{}/{}", pa.name(*s), p.numer(), p.denom()))
            .collect();
        out.push_str(&format!(
            "trans {} {} {{ {} }}\n",
            pa.name(t.source),
            t.label,
            entries.join(", ")
        ));
    }
    out
}

pub const FIG1: &str = include_str!("../fixtures/fig1.pa");
pub const FIG4A: &str = include_str!("../fixtures/fig4a.pa");
pub const FIG4B: &str = include_str!("../fixtures/fig4b.pa");
pub const DICE: &str = include_str!("../fixtures/dice.pa");
pub const DICE_WRONG: &str = include_str!("../fixtures/dice-wrong.pa");

/// Names accepted by [`bundled`], in a stable order.
pub const BUNDLED_NAMES: [&str; 5] = ["FIG1", "FIG4A", "FIG4B", "DICE", "DICE-WRONG"];

/// Looks up a bundled fixture by name (case-insensitive, `_` and `-` interchangeable).
pub fn bundled(name: &str) -> Option<&'static str> {
    let key = name.trim_end_matches(".pa").to_ascii_uppercase().replace('_', "-");
    match key.as_str() {
        "FIG1" => Some(FIG1),
        "FIG4A" => Some(FIG4A),
        "FIG4B" => Some(FIG4B),
        "DICE" => Some(DICE),
        "DICE-WRONG" => Some(DICE_WRONG),
        _ => None,
    }
}

/// Parses a bundled fixture; panics only if the embedded text is corrupt.
pub fn load_bundled(name: &str) -> Option<Pa> {
    bundled(name).map(|text| parse_fixture(text).expect("bundled fixtures are well-formed"))
}
