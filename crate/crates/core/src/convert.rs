//! Two-way to one-way conversions.
//!
//! * [`convert_bounded_k`]: the bounded-lookback construction. The one-way
//!   machine keeps the last `k` symbols and a lookback offset in its control
//!   and replays left excursions as ε-moves, which are then eliminated.
//! * [`shepherdson`]: the behavior-table construction for arbitrary 2DFAs.
//! * [`crossing_sequence_nfa`]: the 1NFA whose states are valid crossing
//!   sequences.

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::error::Result;
use crate::leftmove::build_cs_graph;
use crate::machine::{Dir, Machine, Symbol, BLANK_TOKEN};

/// A window cell: an input symbol or the blank that pads the window before
/// enough input has been read.
pub type Cell = Option<Symbol>;

/// State of the ε-machine: `(p, j, a_k, ..., a_0)`.
///
/// `window[i]` holds `a_i`, the symbol `i` cells left of the frontier cell.
/// `a_0` is blank while the frontier cell has not been read yet.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BufferState {
    pub base: usize,
    pub lookback: usize,
    pub window: Vec<Cell>,
}

impl BufferState {
    fn initial(start: usize, k: usize) -> Self {
        Self {
            base: start,
            lookback: 0,
            window: vec![None; k + 1],
        }
    }

    /// Whether the frontier cell is unread, i.e. the state waits for input.
    fn awaits_input(&self) -> bool {
        self.lookback == 0 && self.window[0].is_none()
    }

    /// Renders the state with the blank as `_`, e.g. `(1, 0, [0 1 _])` for
    /// `(q1, j = 0, a_2 = 0, a_1 = 1, a_0 = blank)`.
    pub fn display<'a>(&'a self, machine: &'a Machine) -> impl fmt::Display + 'a {
        struct Show<'a>(&'a BufferState, &'a Machine);
        impl fmt::Display for Show<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let cells: Vec<&str> = self
                    .0
                    .window
                    .iter()
                    .rev()
                    .map(|c| c.map_or(BLANK_TOKEN, |a| self.1.alphabet().token(a)))
                    .collect();
                write!(f, "({}, {}, [{}])", self.0.base, self.0.lookback, cells.join(" "))
            }
        }
        Show(self, machine)
    }
}

/// Result of [`convert_bounded_k`]: the 1DFA and the buffer state behind
/// each of its states.
#[derive(Debug, Clone)]
pub struct BoundedConversion {
    pub dfa: Machine,
    pub states: Vec<BufferState>,
}

/// Upper bound `|Q| * (k + 1) * (|Σ| + 1)^(k + 1)` on the state count.
pub fn bounded_k_state_bound(machine: &Machine, k: usize) -> u128 {
    let sigma = machine.alphabet().len() as u128 + 1;
    machine.state_count() as u128 * (k as u128 + 1) * sigma.pow(k as u32 + 1)
}

/// One ε-move of the buffer machine; `None` when undefined.
fn epsilon_step(machine: &Machine, k: usize, s: &BufferState) -> Option<BufferState> {
    let j = s.lookback;
    if j == 0 && s.window[0].is_none() {
        return None;
    }
    let a = s.window[j]?;
    let mv = machine.step(s.base, a)?;
    let mut next = s.clone();
    next.base = mv.target;
    match (j, mv.dir) {
        (0, Dir::Right) => {
            // (q, 0, a_{k-1}, ..., a_0, blank)
            next.window.rotate_right(1);
            next.window[0] = None;
        }
        (_, Dir::Right) => next.lookback = j - 1,
        (_, Dir::Left) => {
            if j + 1 > k {
                return None;
            }
            next.lookback = j + 1;
        }
    }
    Some(next)
}

/// The ε-normal form reached from `s`, or `None` when the ε-path cycles.
fn epsilon_closure(machine: &Machine, k: usize, s: BufferState) -> Option<BufferState> {
    let mut seen = HashSet::new();
    let mut cur = s;
    loop {
        match epsilon_step(machine, k, &cur) {
            None => return Some(cur),
            Some(next) => {
                if !seen.insert(cur) {
                    return None;
                }
                cur = next;
            }
        }
    }
}

/// Reads input symbol `a` in a state awaiting input.
fn input_step(machine: &Machine, k: usize, s: &BufferState, a: Symbol) -> Option<BufferState> {
    debug_assert!(s.awaits_input());
    let mv = machine.step(s.base, a)?;
    let mut next = s.clone();
    next.base = mv.target;
    match mv.dir {
        Dir::Right => {
            // (q, 0, a_{k-1}, ..., a_1, a, blank)
            next.window[0] = Some(a);
            next.window.rotate_right(1);
            next.window[0] = None;
        }
        Dir::Left => {
            if k == 0 {
                return None;
            }
            // (q, 1, a_k, ..., a_1, a)
            next.lookback = 1;
            next.window[0] = Some(a);
        }
    }
    Some(next)
}

/// Converts a 2DFA into a 1DFA that simulates it while the head never backs
/// up more than `k` cells behind the furthest cell read.
///
/// Each input symbol is followed by ε-elimination, so every state of the
/// result is an ε-normal buffer state awaiting input; ε-normal states that
/// do not await input are dead and are not materialized. A state accepts
/// when its base state is accepting. For machines with at most `k` left
/// moves on accepted words the language is preserved.
pub fn convert_bounded_k(machine: &Machine, k: usize) -> Result<BoundedConversion> {
    machine.require_deterministic()?;
    let sigma = machine.alphabet().len();
    let mut index: HashMap<BufferState, usize> = HashMap::new();
    let mut states = vec![BufferState::initial(machine.start(), k)];
    index.insert(states[0].clone(), 0);
    let mut edges = Vec::new();
    let mut i = 0;
    while i < states.len() {
        for a in 0..sigma {
            let Some(read) = input_step(machine, k, &states[i], a) else {
                continue;
            };
            let Some(normal) = epsilon_closure(machine, k, read) else {
                continue;
            };
            if !normal.awaits_input() {
                continue;
            }
            let j = match index.get(&normal) {
                Some(&j) => j,
                None => {
                    index.insert(normal.clone(), states.len());
                    states.push(normal);
                    states.len() - 1
                }
            };
            edges.push((i, a, j));
        }
        i += 1;
    }
    let mut dfa = Machine::new(machine.alphabet().clone(), states.len(), 0)?;
    for (s, st) in states.iter().enumerate() {
        dfa.set_accepting(s, machine.is_accepting(st.base))?;
    }
    for (s, a, t) in edges {
        dfa.add_transition(s, a, t, Dir::Right)?;
    }
    Ok(BoundedConversion { dfa, states })
}

/// Behavior of a 2DFA on a prefix `x`.
///
/// `entry` is the state in which the machine first leaves `x` to the right
/// when started on the leftmost cell in the start state. `resume[q]` is the
/// state in which it leaves `x` to the right after entering the rightmost
/// cell of `x` from the right in state `q`. `None` means it never leaves to
/// the right: it halts, falls off the left end or loops.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BehaviorTable {
    pub entry: Option<usize>,
    pub resume: Vec<Option<usize>>,
}

impl BehaviorTable {
    fn empty_prefix(machine: &Machine) -> Self {
        Self {
            entry: Some(machine.start()),
            resume: vec![None; machine.state_count()],
        }
    }

    /// State in which the machine leaves `xa` to the right when it arrives at
    /// the `a` cell in state `q`; loops are cut after `|Q|` arrivals.
    fn exit_through(&self, machine: &Machine, a: Symbol, q: usize) -> Option<usize> {
        let mut s = q;
        for _ in 0..=machine.state_count() {
            let mv = machine.step(s, a)?;
            match mv.dir {
                Dir::Right => return Some(mv.target),
                Dir::Left => s = self.resume[mv.target]?,
            }
        }
        None
    }

    /// The table of `xa` given the table of `x`.
    pub fn extend(&self, machine: &Machine, a: Symbol) -> Self {
        Self {
            entry: self.entry.and_then(|q| self.exit_through(machine, a, q)),
            resume: (0..machine.state_count())
                .map(|q| self.exit_through(machine, a, q))
                .collect(),
        }
    }
}

/// Shepherdson's construction: a 1DFA whose states are the reachable behavior
/// tables. Tables without an entry exit can never accept and are left out.
pub fn shepherdson(machine: &Machine) -> Result<Machine> {
    machine.require_deterministic()?;
    let sigma = machine.alphabet().len();
    let mut index: HashMap<BehaviorTable, usize> = HashMap::new();
    let mut tables = vec![BehaviorTable::empty_prefix(machine)];
    index.insert(tables[0].clone(), 0);
    let mut edges = Vec::new();
    let mut i = 0;
    while i < tables.len() {
        for a in 0..sigma {
            let next = tables[i].extend(machine, a);
            if next.entry.is_none() {
                continue;
            }
            let j = match index.get(&next) {
                Some(&j) => j,
                None => {
                    index.insert(next.clone(), tables.len());
                    tables.push(next);
                    tables.len() - 1
                }
            };
            edges.push((i, a, j));
        }
        i += 1;
    }
    let mut dfa = Machine::new(machine.alphabet().clone(), tables.len(), 0)?;
    for (s, t) in tables.iter().enumerate() {
        dfa.set_accepting(s, t.entry.is_some_and(|q| machine.is_accepting(q)))?;
    }
    for (s, a, t) in edges {
        dfa.add_transition(s, a, t, Dir::Right)?;
    }
    Ok(dfa)
}

/// The 1NFA over valid crossing sequences: the trimmed crossing-sequence
/// graph read as an automaton.
pub fn crossing_sequence_nfa(machine: &Machine) -> Result<Machine> {
    let graph = build_cs_graph(machine)?;
    let Some(initial) = graph.initial else {
        return Ok(Machine::empty_language(machine.alphabet().clone()));
    };
    let mut nfa = Machine::new(machine.alphabet().clone(), graph.nodes.len(), initial)?;
    for &f in &graph.finals {
        nfa.set_accepting(f, true)?;
    }
    for &(from, a, to) in &graph.edges {
        nfa.add_transition(from, a, to, Dir::Right)?;
    }
    Ok(nfa)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build, Family};
    use crate::regular::{equivalent, minimize};

    #[test]
    fn suffix2_two_lookback() {
        let m = build(&Family::Suffix { n: 2 }).unwrap();
        let conv = convert_bounded_k(&m, 2).unwrap();
        assert!(conv.dfa.state_count() as u128 <= bounded_k_state_bound(&m, 2));
        assert_eq!(bounded_k_state_bound(&m, 2), 768);
        assert_eq!(minimize(&conv.dfa).unwrap().state_count(), 5);
        let register_dfa = build(&Family::SuffixDfa { n: 2 }).unwrap();
        assert!(equivalent(&conv.dfa, &register_dfa).unwrap());
    }

    #[test]
    fn too_small_lookback_loses_words() {
        let m = build(&Family::Suffix { n: 2 }).unwrap();
        let conv = convert_bounded_k(&m, 1).unwrap();
        assert_eq!(crate::regular::live_state_count(&conv.dfa), 0);
    }

    #[test]
    fn one_way_input_is_preserved() {
        let d = build(&Family::SuffixDfa { n: 2 }).unwrap();
        let conv = convert_bounded_k(&d, 0).unwrap();
        assert!(equivalent(&conv.dfa, &d).unwrap());
        assert!(equivalent(&shepherdson(&d).unwrap(), &d).unwrap());
    }

    #[test]
    fn buffer_state_rendering() {
        let m = build(&Family::Suffix { n: 2 }).unwrap();
        let conv = convert_bounded_k(&m, 2).unwrap();
        assert_eq!(conv.states[0].display(&m).to_string(), "(0, 0, [_ _ _])");
    }

    #[test]
    fn shepherdson_matches_bounded_on_suffix2() {
        let m = build(&Family::Suffix { n: 2 }).unwrap();
        let a = shepherdson(&m).unwrap();
        let b = convert_bounded_k(&m, 2).unwrap().dfa;
        assert!(equivalent(&a, &b).unwrap());
    }
}
