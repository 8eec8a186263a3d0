//! Plain-text machine interchange format.
//!
//! One declaration per line, `#` starts a comment, identifiers are
//! whitespace-free tokens:
//!
//! ```text
//! states: S MS MT MV RS
//! alphabet: d1 d2 d3 d4 d5 d6 d7 d8 d9 d10
//! outputs: O1 O2 O3
//! initial: S
//! trans: S d1 -> S
//! out: S -> eps
//! ```
//!
//! The empty output `eps` is always a member of the output alphabet and must
//! not be listed on the `outputs:` line. Parsing is strict: unknown keys,
//! duplicate declarations, and malformed arrows are errors with line numbers.
//! Structural soundness (dangling targets, missing outputs, reachability) is
//! left to [`MooreMachine::validate`] so that broken files can still be
//! inspected.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use super::MooreMachine;

/// The empty output's spelling in machine files and traces.
pub const EMPTY_OUTPUT: &str = "eps";

/// A machine with string identifiers, as loaded from a file.
pub type TextMachine = MooreMachine<String, String, String>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct MachineFormatError {
    pub line: usize,
    pub kind: FormatErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormatErrorKind {
    UnknownKey(String),
    MissingValue(&'static str),
    MalformedTransition(String),
    MalformedOutput(String),
    DuplicateSection(&'static str),
    DuplicateTransition { state: String, symbol: String },
    DuplicateOutput { state: String },
    ExplicitEmptyOutput,
    MissingSection(&'static str),
}

impl fmt::Display for FormatErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::UnknownKey(k) => write!(f, "unknown key `{k}`"),
            Self::MissingValue(k) => write!(f, "`{k}:` declaration has no value"),
            Self::MalformedTransition(s) => {
                write!(
                    f,
                    "malformed transition `{s}` (expected `state symbol -> state`)"
                )
            }
            Self::MalformedOutput(s) => {
                write!(f, "malformed output `{s}` (expected `state -> output`)")
            }
            Self::DuplicateSection(k) => write!(f, "`{k}:` declared more than once"),
            Self::DuplicateTransition { state, symbol } => {
                write!(f, "duplicate transition for ({state}, {symbol})")
            }
            Self::DuplicateOutput { state } => write!(f, "duplicate output for state {state}"),
            Self::ExplicitEmptyOutput => {
                write!(
                    f,
                    "`{EMPTY_OUTPUT}` is implicit and must not be listed under `outputs:`"
                )
            }
            Self::MissingSection(k) => write!(f, "missing `{k}:` declaration"),
        }
    }
}

/// Renders any machine whose identifiers have wire names into the text format.
pub fn write_text<Q, S, O>(machine: &MooreMachine<Q, S, O>) -> String
where
    Q: Clone + Ord + fmt::Display,
    S: Clone + Ord + fmt::Display,
    O: Clone + Ord + fmt::Display,
{
    let mut out = String::new();
    let join = |items: Vec<String>| items.join(" ");

    out.push_str("states: ");
    out.push_str(&join(
        machine.states.iter().map(|q| q.to_string()).collect(),
    ));
    out.push('\n');

    out.push_str("alphabet: ");
    out.push_str(&join(
        machine
            .input_alphabet
            .iter()
            .map(|s| s.to_string())
            .collect(),
    ));
    out.push('\n');

    out.push_str("outputs: ");
    let visible: Vec<String> = machine
        .output_alphabet
        .iter()
        .map(|o| o.to_string())
        .filter(|o| o != EMPTY_OUTPUT)
        .collect();
    out.push_str(&join(visible));
    out.push('\n');

    out.push_str(&format!("initial: {}\n", machine.initial));

    for ((state, symbol), target) in &machine.transitions {
        out.push_str(&format!("trans: {state} {symbol} -> {target}\n"));
    }
    for (state, output) in &machine.outputs {
        out.push_str(&format!("out: {state} -> {output}\n"));
    }
    out
}

/// Converts a typed machine into its string-identified form.
pub fn to_text_machine<Q, S, O>(machine: &MooreMachine<Q, S, O>) -> TextMachine
where
    Q: Clone + Ord + fmt::Display,
    S: Clone + Ord + fmt::Display,
    O: Clone + Ord + fmt::Display,
{
    MooreMachine {
        states: machine.states.iter().map(|q| q.to_string()).collect(),
        input_alphabet: machine
            .input_alphabet
            .iter()
            .map(|s| s.to_string())
            .collect(),
        output_alphabet: machine
            .output_alphabet
            .iter()
            .map(|o| o.to_string())
            .collect(),
        transitions: machine
            .transitions
            .iter()
            .map(|((q, s), t)| ((q.to_string(), s.to_string()), t.to_string()))
            .collect(),
        outputs: machine
            .outputs
            .iter()
            .map(|(q, o)| (q.to_string(), o.to_string()))
            .collect(),
        initial: machine.initial.to_string(),
    }
}

/// Parses the text format into a string-identified machine.
pub fn parse_text(input: &str) -> Result<TextMachine, MachineFormatError> {
    let mut states: Option<BTreeSet<String>> = None;
    let mut alphabet: Option<BTreeSet<String>> = None;
    let mut output_alphabet: Option<BTreeSet<String>> = None;
    let mut initial: Option<String> = None;
    let mut transitions: BTreeMap<(String, String), String> = BTreeMap::new();
    let mut outputs: BTreeMap<String, String> = BTreeMap::new();

    for (idx, raw_line) in input.lines().enumerate() {
        let line = idx + 1;
        let err = |kind| MachineFormatError { line, kind };

        let text = raw_line.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }

        let (key, rest) = match text.split_once(':') {
            Some((k, r)) => (k.trim(), r.trim()),
            None => return Err(err(FormatErrorKind::UnknownKey(text.to_string()))),
        };

        match key {
            "states" | "alphabet" | "outputs" => {
                let tokens: BTreeSet<String> =
                    rest.split_whitespace().map(str::to_string).collect();
                let slot = match key {
                    "states" => &mut states,
                    "alphabet" => &mut alphabet,
                    _ => &mut output_alphabet,
                };
                if slot.is_some() {
                    return Err(err(FormatErrorKind::DuplicateSection(match key {
                        "states" => "states",
                        "alphabet" => "alphabet",
                        _ => "outputs",
                    })));
                }
                if key == "outputs" && tokens.contains(EMPTY_OUTPUT) {
                    return Err(err(FormatErrorKind::ExplicitEmptyOutput));
                }
                if tokens.is_empty() && key != "outputs" {
                    return Err(err(FormatErrorKind::MissingValue(match key {
                        "states" => "states",
                        _ => "alphabet",
                    })));
                }
                *slot = Some(tokens);
            }
            "initial" => {
                if initial.is_some() {
                    return Err(err(FormatErrorKind::DuplicateSection("initial")));
                }
                if rest.is_empty() || rest.split_whitespace().count() != 1 {
                    return Err(err(FormatErrorKind::MissingValue("initial")));
                }
                initial = Some(rest.to_string());
            }
            "trans" => {
                let (lhs, target) = rest
                    .split_once("->")
                    .ok_or_else(|| err(FormatErrorKind::MalformedTransition(rest.to_string())))?;
                let lhs_tokens: Vec<&str> = lhs.split_whitespace().collect();
                let target = target.trim();
                if lhs_tokens.len() != 2
                    || target.is_empty()
                    || target.split_whitespace().count() != 1
                {
                    return Err(err(FormatErrorKind::MalformedTransition(rest.to_string())));
                }
                let key = (lhs_tokens[0].to_string(), lhs_tokens[1].to_string());
                if transitions.contains_key(&key) {
                    return Err(err(FormatErrorKind::DuplicateTransition {
                        state: key.0,
                        symbol: key.1,
                    }));
                }
                transitions.insert(key, target.to_string());
            }
            "out" => {
                let (state, output) = rest
                    .split_once("->")
                    .ok_or_else(|| err(FormatErrorKind::MalformedOutput(rest.to_string())))?;
                let state = state.trim();
                let output = output.trim();
                if state.split_whitespace().count() != 1 || output.split_whitespace().count() != 1 {
                    return Err(err(FormatErrorKind::MalformedOutput(rest.to_string())));
                }
                if outputs.contains_key(state) {
                    return Err(err(FormatErrorKind::DuplicateOutput {
                        state: state.to_string(),
                    }));
                }
                outputs.insert(state.to_string(), output.to_string());
            }
            other => return Err(err(FormatErrorKind::UnknownKey(other.to_string()))),
        }
    }

    let end = input.lines().count();
    let missing = |section| MachineFormatError {
        line: end,
        kind: FormatErrorKind::MissingSection(section),
    };

    let states = states.ok_or_else(|| missing("states"))?;
    let input_alphabet = alphabet.ok_or_else(|| missing("alphabet"))?;
    let mut output_alphabet = output_alphabet.ok_or_else(|| missing("outputs"))?;
    let initial = initial.ok_or_else(|| missing("initial"))?;
    output_alphabet.insert(EMPTY_OUTPUT.to_string());

    Ok(MooreMachine {
        states,
        input_alphabet,
        output_alphabet,
        transitions,
        outputs,
        initial,
    })
}

#[cfg(test)]
mod tests {
    use super::super::mlp::pathway_machine;
    use super::*;

    #[test]
    fn builtin_machine_round_trips() {
        let typed = pathway_machine();
        let text = write_text(&typed);
        let parsed = parse_text(&text).unwrap();
        assert_eq!(parsed, to_text_machine(&typed));
        assert!(parsed.validate().is_empty());
    }

    #[test]
    fn comments_and_blank_lines_ignored() {
        let src = "\n# header\nstates: a  # trailing\nalphabet: x\noutputs:\ninitial: a\ntrans: a x -> a\nout: a -> eps\n";
        let m = parse_text(src).unwrap();
        assert_eq!(m.initial, "a");
        assert_eq!(m.transitions[&("a".to_string(), "x".to_string())], "a");
        assert!(m.output_alphabet.contains(EMPTY_OUTPUT));
    }

    #[test]
    fn unknown_key_is_an_error() {
        let src = "states: a\nbogus: 1\n";
        let err = parse_text(src).unwrap_err();
        assert_eq!(err.line, 2);
        assert_eq!(err.kind, FormatErrorKind::UnknownKey("bogus".to_string()));
    }

    #[test]
    fn duplicate_transition_is_an_error() {
        let src =
            "states: a\nalphabet: x\noutputs:\ninitial: a\ntrans: a x -> a\ntrans: a x -> a\n";
        let err = parse_text(src).unwrap_err();
        assert_eq!(err.line, 6);
    }

    #[test]
    fn explicit_eps_is_rejected() {
        let src = "states: a\nalphabet: x\noutputs: eps\ninitial: a\n";
        let err = parse_text(src).unwrap_err();
        assert_eq!(err.kind, FormatErrorKind::ExplicitEmptyOutput);
    }

    #[test]
    fn malformed_arrow_is_an_error() {
        let src = "states: a\nalphabet: x\noutputs:\ninitial: a\ntrans: a x a\n";
        let err = parse_text(src).unwrap_err();
        assert!(matches!(err.kind, FormatErrorKind::MalformedTransition(_)));
    }

    #[test]
    fn missing_section_is_an_error() {
        let err = parse_text("states: a\n").unwrap_err();
        assert_eq!(err.kind, FormatErrorKind::MissingSection("alphabet"));
    }

    #[test]
    fn parsed_machine_with_dangling_target_survives_to_validate() {
        let src =
            "states: a\nalphabet: x\noutputs:\ninitial: a\ntrans: a x -> ghost\nout: a -> eps\n";
        let m = parse_text(src).unwrap();
        assert!(!m.validate().is_empty());
    }
}
