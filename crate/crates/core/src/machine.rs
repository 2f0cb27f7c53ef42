//! Machine representation shared by every other module.
//!
//! States are dense indices `0..state_count`. Symbols are interned to dense
//! indices into an [`Alphabet`]; a word is a slice of symbol indices. The
//! transition table is partial: a missing entry means the move is undefined
//! and the machine halts rejecting. No trap state is ever added.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Token reserved for the blank cell of the bounded-lookback conversion.
pub const BLANK_TOKEN: &str = "_";

pub type Symbol = usize;
pub type Word = Vec<Symbol>;

#[derive(Debug, Clone)]
pub struct Alphabet {
    symbols: Vec<String>,
    index: HashMap<String, Symbol>,
}

// the index is derived from `symbols`
impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.symbols == other.symbols
    }
}

impl Eq for Alphabet {}

impl std::hash::Hash for Alphabet {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.symbols.hash(state);
    }
}

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(symbols.len());
        for (i, s) in symbols.iter().enumerate() {
            if s.is_empty() || s.chars().any(|c| c.is_whitespace() || c == '#') {
                return Err(Error::InvalidAlphabet(format!("bad token {s:?}")));
            }
            if s == BLANK_TOKEN {
                return Err(Error::InvalidAlphabet(format!(
                    "token {BLANK_TOKEN:?} is reserved"
                )));
            }
            if index.insert(s.clone(), i).is_some() {
                return Err(Error::InvalidAlphabet(format!("duplicate token {s:?}")));
            }
        }
        Ok(Self { symbols, index })
    }

    /// Alphabet of single-character tokens, e.g. `Alphabet::from_chars("01$")`.
    pub fn from_chars(chars: &str) -> Result<Self> {
        Self::new(chars.chars().map(String::from))
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn token(&self, symbol: Symbol) -> &str {
        &self.symbols[symbol]
    }

    pub fn symbol(&self, token: &str) -> Result<Symbol> {
        self.index
            .get(token)
            .copied()
            .ok_or_else(|| Error::UnknownSymbol(token.to_string()))
    }

    /// Parses a word written as concatenated single-character tokens.
    pub fn parse_chars(&self, text: &str) -> Result<Word> {
        let mut buf = [0u8; 4];
        text.chars()
            .map(|c| self.symbol(c.encode_utf8(&mut buf)))
            .collect()
    }

    /// Parses a word written as whitespace-separated tokens.
    pub fn parse_tokens(&self, text: &str) -> Result<Word> {
        text.split_whitespace().map(|t| self.symbol(t)).collect()
    }

    /// Renders a word; tokens are concatenated when all are single characters.
    pub fn render(&self, word: &[Symbol]) -> String {
        let single = self.symbols.iter().all(|s| s.chars().count() == 1);
        let sep = if single { "" } else { " " };
        word.iter()
            .map(|&a| self.token(a))
            .collect::<Vec<_>>()
            .join(sep)
    }

    /// This alphabet extended by one fresh token.
    pub fn with_symbol(&self, token: &str) -> Result<Self> {
        Self::new(self.symbols.iter().cloned().chain([token.to_string()]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dir {
    Left,
    Right,
}

impl Dir {
    pub fn offset(self) -> isize {
        match self {
            Dir::Left => -1,
            Dir::Right => 1,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Dir::Left => 'L',
            Dir::Right => 'R',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Move {
    pub target: usize,
    pub dir: Dir,
}

impl Move {
    pub fn right(target: usize) -> Self {
        Self {
            target,
            dir: Dir::Right,
        }
    }

    pub fn left(target: usize) -> Self {
        Self {
            target,
            dir: Dir::Left,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MachineClass {
    OneWayDfa,
    OneWayNfa,
    TwoWayDfa,
    TwoWayNfa,
}

impl MachineClass {
    pub fn as_str(self) -> &'static str {
        match self {
            MachineClass::OneWayDfa => "1dfa",
            MachineClass::OneWayNfa => "1nfa",
            MachineClass::TwoWayDfa => "2dfa",
            MachineClass::TwoWayNfa => "2nfa",
        }
    }

    pub fn from_kind(kind: &str) -> Option<Self> {
        Some(match kind {
            "1dfa" => MachineClass::OneWayDfa,
            "1nfa" => MachineClass::OneWayNfa,
            "2dfa" => MachineClass::TwoWayDfa,
            "2nfa" => MachineClass::TwoWayNfa,
            _ => return None,
        })
    }

    pub fn is_deterministic(self) -> bool {
        matches!(self, MachineClass::OneWayDfa | MachineClass::TwoWayDfa)
    }

    pub fn is_one_way(self) -> bool {
        matches!(self, MachineClass::OneWayDfa | MachineClass::OneWayNfa)
    }

    /// Whether every machine of class `self` also belongs to `other`.
    pub fn fits(self, other: MachineClass) -> bool {
        (other.is_deterministic() <= self.is_deterministic())
            && (other.is_one_way() <= self.is_one_way())
    }
}

impl fmt::Display for MachineClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A two-way nondeterministic finite automaton without endmarkers.
///
/// Deterministic and one-way machines are the same type; [`Machine::class`]
/// derives the tightest class from the shape of the transition table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Machine {
    alphabet: Alphabet,
    state_count: usize,
    start: usize,
    accepting: Vec<bool>,
    // delta[q * |alphabet| + a], kept sorted and deduplicated
    delta: Vec<Vec<Move>>,
}

impl Machine {
    pub fn new(alphabet: Alphabet, state_count: usize, start: usize) -> Result<Self> {
        if state_count == 0 {
            return Err(Error::InvalidParams("machine needs at least one state".into()));
        }
        if start >= state_count {
            return Err(Error::StateOutOfRange {
                state: start,
                count: state_count,
            });
        }
        let cells = state_count * alphabet.len();
        Ok(Self {
            alphabet,
            state_count,
            start,
            accepting: vec![false; state_count],
            delta: vec![Vec::new(); cells],
        })
    }

    /// The one-state machine without accepting states or transitions.
    pub fn empty_language(alphabet: Alphabet) -> Self {
        Self::new(alphabet, 1, 0).expect("one state is always valid")
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.state_count
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn accepting_states(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.state_count).filter(|&q| self.accepting[q])
    }

    pub fn set_accepting(&mut self, q: usize, accepting: bool) -> Result<()> {
        self.check_state(q)?;
        self.accepting[q] = accepting;
        Ok(())
    }

    /// Adds `q --a--> (target, dir)`; adding an existing move is a no-op.
    pub fn add_transition(&mut self, q: usize, a: Symbol, target: usize, dir: Dir) -> Result<()> {
        self.check_state(q)?;
        self.check_state(target)?;
        self.check_symbol(a)?;
        let cell = &mut self.delta[q * self.alphabet.len() + a];
        let mv = Move { target, dir };
        if let Err(pos) = cell.binary_search(&mv) {
            cell.insert(pos, mv);
        }
        Ok(())
    }

    /// Convenience for builders: `add_transition` by token.
    pub fn add(&mut self, q: usize, token: &str, target: usize, dir: Dir) -> Result<()> {
        let a = self.alphabet.symbol(token)?;
        self.add_transition(q, a, target, dir)
    }

    pub fn moves(&self, q: usize, a: Symbol) -> &[Move] {
        &self.delta[q * self.alphabet.len() + a]
    }

    /// The unique move of a deterministic machine, if defined.
    #[inline]
    pub fn step(&self, q: usize, a: Symbol) -> Option<Move> {
        self.delta[q * self.alphabet.len() + a].first().copied()
    }

    /// All transitions as `(state, symbol, move)`, sorted by state then symbol.
    pub fn transitions(&self) -> impl Iterator<Item = (usize, Symbol, Move)> + '_ {
        let width = self.alphabet.len();
        self.delta.iter().enumerate().flat_map(move |(cell, moves)| {
            moves
                .iter()
                .map(move |&mv| (cell / width.max(1), cell % width.max(1), mv))
        })
    }

    pub fn transition_count(&self) -> usize {
        self.delta.iter().map(Vec::len).sum()
    }

    pub fn is_deterministic(&self) -> bool {
        self.delta.iter().all(|cell| cell.len() <= 1)
    }

    pub fn is_one_way(&self) -> bool {
        self.delta.iter().flatten().all(|mv| mv.dir == Dir::Right)
    }

    pub fn class(&self) -> MachineClass {
        match (self.is_deterministic(), self.is_one_way()) {
            (true, true) => MachineClass::OneWayDfa,
            (false, true) => MachineClass::OneWayNfa,
            (true, false) => MachineClass::TwoWayDfa,
            (false, false) => MachineClass::TwoWayNfa,
        }
    }

    pub fn require_deterministic(&self) -> Result<()> {
        if self.is_deterministic() {
            Ok(())
        } else {
            Err(Error::NotDeterministic)
        }
    }

    pub fn require_one_way(&self) -> Result<()> {
        if self.is_one_way() {
            Ok(())
        } else {
            Err(Error::NotOneWay)
        }
    }

    pub fn check_word(&self, word: &[Symbol]) -> Result<()> {
        word.iter().try_for_each(|&a| self.check_symbol(a))
    }

    fn check_state(&self, q: usize) -> Result<()> {
        if q < self.state_count {
            Ok(())
        } else {
            Err(Error::StateOutOfRange {
                state: q,
                count: self.state_count,
            })
        }
    }

    fn check_symbol(&self, a: Symbol) -> Result<()> {
        if a < self.alphabet.len() {
            Ok(())
        } else {
            Err(Error::SymbolOutOfRange {
                index: a,
                size: self.alphabet.len(),
            })
        }
    }

    /// Copies this machine onto a different state set. `map[q]` is the new
    /// index of `q`, or `None` to drop it together with every transition
    /// touching it.
    pub fn relabel(&self, map: &[Option<usize>], state_count: usize) -> Result<Self> {
        let start = map[self.start].ok_or(Error::InvalidParams("start state dropped".into()))?;
        let mut out = Machine::new(self.alphabet.clone(), state_count, start)?;
        for (q, nq) in map.iter().enumerate().take(self.state_count) {
            if let Some(nq) = *nq {
                out.accepting[nq] = self.accepting[q];
            }
        }
        for (q, a, mv) in self.transitions() {
            if let (Some(nq), Some(nt)) = (map[q], map[mv.target]) {
                out.add_transition(nq, a, nt, mv.dir)?;
            }
        }
        Ok(out)
    }
}
