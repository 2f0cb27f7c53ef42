//! Line-oriented automaton file format.
//!
//! ```text
//! kind: 2dfa            # 1dfa | 1nfa | 2dfa | 2nfa
//! alphabet: 0 1 $
//! states: 4
//! start: 0
//! accept: 1             # may be empty
//! delta: 0 0 -> 0 R     # delta: <state> <symbol> -> <state> <R|L>
//! ```
//!
//! `#` starts a comment. Serialization emits the header fields in the order
//! above followed by the delta lines sorted by (state, symbol).

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::machine::{Alphabet, Dir, Machine, MachineClass};

struct RawDelta {
    line: usize,
    from: String,
    symbol: String,
    to: String,
    dir: String,
}

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        message: message.into(),
    }
}

fn at(line: usize, source: Error) -> Error {
    Error::Line {
        line,
        source: Box::new(source),
    }
}

fn parse_index(line: usize, field: &str, text: &str) -> Result<usize> {
    text.parse()
        .map_err(|_| syntax(line, format!("{field}: expected a non-negative integer, got {text:?}")))
}

pub fn parse_machine(text: &str) -> Result<Machine> {
    let mut kind: Option<(usize, MachineClass)> = None;
    let mut alphabet: Option<Alphabet> = None;
    let mut states: Option<(usize, usize)> = None;
    let mut start: Option<(usize, usize)> = None;
    let mut accept: Option<(usize, Vec<usize>)> = None;
    let mut deltas = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, rest) = content
            .split_once(':')
            .ok_or_else(|| syntax(line, "expected '<field>: <value>'"))?;
        let rest = rest.trim();
        let duplicate = || syntax(line, format!("duplicate field '{}'", key.trim()));
        match key.trim() {
            "kind" => {
                let class = MachineClass::from_kind(rest)
                    .ok_or_else(|| syntax(line, format!("unknown kind {rest:?}")))?;
                if kind.replace((line, class)).is_some() {
                    return Err(duplicate());
                }
            }
            "alphabet" => {
                let a = Alphabet::new(rest.split_whitespace()).map_err(|e| at(line, e))?;
                if alphabet.replace(a).is_some() {
                    return Err(duplicate());
                }
            }
            "states" => {
                let n = parse_index(line, "states", rest)?;
                if n == 0 {
                    return Err(syntax(line, "states: must be positive"));
                }
                if states.replace((line, n)).is_some() {
                    return Err(duplicate());
                }
            }
            "start" => {
                let q = parse_index(line, "start", rest)?;
                if start.replace((line, q)).is_some() {
                    return Err(duplicate());
                }
            }
            "accept" => {
                let qs = rest
                    .split_whitespace()
                    .map(|t| parse_index(line, "accept", t))
                    .collect::<Result<Vec<_>>>()?;
                if accept.replace((line, qs)).is_some() {
                    return Err(duplicate());
                }
            }
            "delta" => {
                let toks: Vec<&str> = rest.split_whitespace().collect();
                if toks.len() != 5 || toks[2] != "->" {
                    return Err(syntax(
                        line,
                        "delta: expected '<state> <symbol> -> <state> <R|L>'",
                    ));
                }
                deltas.push(RawDelta {
                    line,
                    from: toks[0].into(),
                    symbol: toks[1].into(),
                    to: toks[3].into(),
                    dir: toks[4].into(),
                });
            }
            other => return Err(syntax(line, format!("unknown field {other:?}"))),
        }
    }

    let last = text.lines().count().max(1);
    let (_, kind) = kind.ok_or_else(|| syntax(last, "missing field 'kind'"))?;
    let alphabet = alphabet.ok_or_else(|| syntax(last, "missing field 'alphabet'"))?;
    let (_, state_count) = states.ok_or_else(|| syntax(last, "missing field 'states'"))?;
    let (start_line, start) = start.ok_or_else(|| syntax(last, "missing field 'start'"))?;

    let mut machine = Machine::new(alphabet, state_count, start).map_err(|e| at(start_line, e))?;
    if let Some((line, qs)) = accept {
        for q in qs {
            machine.set_accepting(q, true).map_err(|e| at(line, e))?;
        }
    }
    for d in deltas {
        let from = parse_index(d.line, "delta", &d.from)?;
        let to = parse_index(d.line, "delta", &d.to)?;
        let symbol = machine.alphabet().symbol(&d.symbol).map_err(|e| at(d.line, e))?;
        let dir = match d.dir.as_str() {
            "R" => Dir::Right,
            "L" => Dir::Left,
            other => return Err(syntax(d.line, format!("direction must be R or L, got {other:?}"))),
        };
        if kind.is_one_way() && dir == Dir::Left {
            return Err(syntax(d.line, format!("kind {kind} allows only R moves")));
        }
        if from < state_count && kind.is_deterministic() && !machine.moves(from, symbol).is_empty() {
            return Err(Error::DuplicateTransition {
                line: d.line,
                state: from,
                symbol: d.symbol,
            });
        }
        machine
            .add_transition(from, symbol, to, dir)
            .map_err(|e| at(d.line, e))?;
    }
    Ok(machine)
}

pub fn serialize_machine(machine: &Machine) -> String {
    let mut out = String::new();
    let accept: Vec<String> = machine.accepting_states().map(|q| q.to_string()).collect();
    writeln!(out, "kind: {}", machine.class()).unwrap();
    writeln!(out, "alphabet: {}", machine.alphabet().symbols().join(" ")).unwrap();
    writeln!(out, "states: {}", machine.state_count()).unwrap();
    writeln!(out, "start: {}", machine.start()).unwrap();
    if accept.is_empty() {
        writeln!(out, "accept:").unwrap();
    } else {
        writeln!(out, "accept: {}", accept.join(" ")).unwrap();
    }
    for (q, a, mv) in machine.transitions() {
        writeln!(
            out,
            "delta: {q} {} -> {} {}",
            machine.alphabet().token(a),
            mv.target,
            mv.dir.letter()
        )
        .unwrap();
    }
    out
}
