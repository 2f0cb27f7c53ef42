//! Witness languages with their machines and declarative membership tests.
//!
//! Token conventions: bits are `0`/`1`, block separators `c`, markers `$`,
//! `$1`, `$2`, and `a`, `b`, `2` where the language needs them.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::machine::{Alphabet, Dir, Machine, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Family {
    /// `{1^(n-1)}`.
    Unary { n: usize },
    /// `{0,1}* 1 {0,1}^(n-1) $` by the (n+2)-state back-stepping 2DFA.
    Suffix { n: usize },
    /// The same language by the (2^n + 1)-state shift-register DFA.
    SuffixDfa { n: usize },
    /// `{a w b w a : w ∈ {0,1}^i}` by its minimal DFA.
    AwbwaDfa { i: usize },
    /// The same language by an O(n)-state 2DFA.
    Awbwa2dfa { n: usize },
    /// `c L_1 c L_2 c ... c L_n c`.
    Concat { blocks: Vec<Family> },
    /// `c L_1 c ... c L_n c` with awbwa blocks; the first `m` are two-way.
    RnMixed { n: usize, m: usize },
    /// `{0^i1 1 0^i2 1 ... 1 0^in 2^m 0^im : 1 ≤ m ≤ n, 1 ≤ ij ≤ n}`.
    MeyerFischer { n: usize },
    /// `($ L $)*`.
    DollarStar { inner: Box<Family> },
    /// `{0,1}* 1 {0,1}^(k-1) $1  ∪  {w ∈ {0,1}* : #1(w) = n-1} $2` by the
    /// (n+k+3)-state 2DFA.
    Lnk2dfa { n: usize, k: usize },
    /// The shift-register DFA for the same language.
    LnkDfa { n: usize, k: usize },
    /// `{u 1^k v : u, v ∈ {0,1}^n, u ≠ v}` by a guessing 1NFA.
    IneqNfa { n: usize, k: usize },
}

pub const FAMILY_NAMES: &[&str] = &[
    "unary",
    "suffix",
    "suffix_dfa",
    "awbwa_dfa",
    "awbwa_2dfa",
    "concat",
    "rn_mixed",
    "meyer_fischer",
    "dollar_star",
    "lnk_2dfa",
    "lnk_dfa",
    "ineq_nfa",
];

fn positive(name: &str, value: Option<usize>) -> Result<usize> {
    match value {
        Some(v) if v >= 1 => Ok(v),
        Some(v) => Err(Error::InvalidParams(format!("{name} must be >= 1, got {v}"))),
        None => Err(Error::InvalidParams(format!("missing parameter {name}"))),
    }
}

impl Family {
    /// Resolves a family by name. `concat` means the awbwa blocks `1..=n`
    /// (all one-way) and `dollar_star` wraps `unary(n)`.
    pub fn from_name(
        name: &str,
        n: Option<usize>,
        k: Option<usize>,
        m: Option<usize>,
        i: Option<usize>,
    ) -> Result<Self> {
        let family = match name {
            "unary" => Family::Unary { n: positive("n", n)? },
            "suffix" => Family::Suffix { n: positive("n", n)? },
            "suffix_dfa" => Family::SuffixDfa { n: positive("n", n)? },
            "awbwa_dfa" => Family::AwbwaDfa {
                i: positive("i", i.or(n))?,
            },
            "awbwa_2dfa" => Family::Awbwa2dfa { n: positive("n", n)? },
            "concat" => Family::Concat {
                blocks: (1..=positive("n", n)?)
                    .map(|i| Family::AwbwaDfa { i })
                    .collect(),
            },
            "rn_mixed" => Family::RnMixed {
                n: positive("n", n)?,
                m: m.ok_or_else(|| Error::InvalidParams("missing parameter m".into()))?,
            },
            "meyer_fischer" => Family::MeyerFischer { n: positive("n", n)? },
            "dollar_star" => Family::DollarStar {
                inner: Box::new(Family::Unary { n: positive("n", n)? }),
            },
            "lnk_2dfa" => Family::Lnk2dfa {
                n: positive("n", n)?,
                k: positive("k", k)?,
            },
            "lnk_dfa" => Family::LnkDfa {
                n: positive("n", n)?,
                k: positive("k", k)?,
            },
            "ineq_nfa" => Family::IneqNfa {
                n: positive("n", n)?,
                k: k.ok_or_else(|| Error::InvalidParams("missing parameter k".into()))?,
            },
            other => return Err(Error::InvalidParams(format!("unknown family {other:?}"))),
        };
        family.validate()?;
        Ok(family)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::Unary { .. } => "unary",
            Family::Suffix { .. } => "suffix",
            Family::SuffixDfa { .. } => "suffix_dfa",
            Family::AwbwaDfa { .. } => "awbwa_dfa",
            Family::Awbwa2dfa { .. } => "awbwa_2dfa",
            Family::Concat { .. } => "concat",
            Family::RnMixed { .. } => "rn_mixed",
            Family::MeyerFischer { .. } => "meyer_fischer",
            Family::DollarStar { .. } => "dollar_star",
            Family::Lnk2dfa { .. } => "lnk_2dfa",
            Family::LnkDfa { .. } => "lnk_dfa",
            Family::IneqNfa { .. } => "ineq_nfa",
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidParams(format!("{}: {msg}", self.name())));
        match self {
            Family::Unary { n }
            | Family::Suffix { n }
            | Family::SuffixDfa { n }
            | Family::AwbwaDfa { i: n }
            | Family::Awbwa2dfa { n }
            | Family::MeyerFischer { n }
            | Family::IneqNfa { n, .. }
                if *n == 0 =>
            {
                bad("parameters must be >= 1")
            }
            Family::Lnk2dfa { n, k } | Family::LnkDfa { n, k } if *n == 0 || *k == 0 => {
                bad("n and k must be >= 1")
            }
            Family::RnMixed { n, m } if *n == 0 || m > n => bad("need 1 <= n and m <= n"),
            Family::Concat { blocks } if blocks.is_empty() => bad("need at least one block"),
            Family::Concat { blocks } => blocks.iter().try_for_each(Family::validate),
            Family::DollarStar { inner } => inner.validate(),
            _ => Ok(()),
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        let tokens: &[&str] = match self {
            Family::Unary { .. } => &["1"],
            Family::Suffix { .. } | Family::SuffixDfa { .. } => &["0", "1", "$"],
            Family::AwbwaDfa { .. } | Family::Awbwa2dfa { .. } => &["0", "1", "a", "b"],
            Family::Concat { blocks } => {
                return blocks[0].alphabet().with_symbol("c").expect("c is fresh");
            }
            Family::RnMixed { .. } => &["0", "1", "a", "b", "c"],
            Family::MeyerFischer { .. } => &["0", "1", "2"],
            Family::DollarStar { inner } => {
                return inner.alphabet().with_symbol("$").expect("$ is fresh");
            }
            Family::Lnk2dfa { .. } | Family::LnkDfa { .. } => &["0", "1", "$1", "$2"],
            Family::IneqNfa { .. } => &["0", "1"],
        };
        Alphabet::new(tokens.iter().copied()).expect("fixed alphabets are valid")
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Unary { n }
            | Family::Suffix { n }
            | Family::SuffixDfa { n }
            | Family::Awbwa2dfa { n }
            | Family::MeyerFischer { n } => write!(f, "{}(n={n})", self.name()),
            Family::AwbwaDfa { i } => write!(f, "awbwa_dfa(i={i})"),
            Family::RnMixed { n, m } => write!(f, "rn_mixed(n={n}, m={m})"),
            Family::Lnk2dfa { n, k } | Family::LnkDfa { n, k } | Family::IneqNfa { n, k } => {
                write!(f, "{}(n={n}, k={k})", self.name())
            }
            Family::Concat { blocks } => {
                let parts: Vec<String> = blocks.iter().map(ToString::to_string).collect();
                write!(f, "concat[{}]", parts.join(", "))
            }
            Family::DollarStar { inner } => write!(f, "dollar_star[{inner}]"),
        }
    }
}

/// Incremental builder over named states.
struct Builder<K> {
    machine: Machine,
    ids: HashMap<K, usize>,
}

impl<K: std::hash::Hash + Eq + Clone> Builder<K> {
    fn new(alphabet: Alphabet, states: Vec<K>, start: &K) -> Result<Self> {
        let ids: HashMap<K, usize> = states.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        let machine = Machine::new(alphabet, states.len(), ids[start])?;
        Ok(Self { machine, ids })
    }

    fn accept(&mut self, key: &K) -> Result<()> {
        self.machine.set_accepting(self.ids[key], true)
    }

    fn add(&mut self, from: &K, token: &str, to: &K, dir: Dir) -> Result<()> {
        let (f, t) = (self.ids[from], self.ids[to]);
        self.machine.add(f, token, t, dir)
    }
}

pub fn build(family: &Family) -> Result<Machine> {
    family.validate()?;
    match family {
        Family::Unary { n } => unary(*n),
        Family::Suffix { n } => suffix(*n),
        Family::SuffixDfa { n } => suffix_dfa(*n),
        Family::AwbwaDfa { i } => awbwa_dfa(*i),
        Family::Awbwa2dfa { n } => awbwa_2dfa(*n),
        Family::Concat { blocks } => {
            let machines = blocks.iter().map(build).collect::<Result<Vec<_>>>()?;
            concat(&machines)
        }
        Family::RnMixed { n, m } => {
            let machines = (1..=*n)
                .map(|i| if i <= *m { awbwa_2dfa(i) } else { awbwa_dfa(i) })
                .collect::<Result<Vec<_>>>()?;
            concat(&machines)
        }
        Family::MeyerFischer { n } => meyer_fischer(*n),
        Family::DollarStar { inner } => dollar_star(&build(inner)?),
        Family::Lnk2dfa { n, k } => lnk_2dfa(*n, *k),
        Family::LnkDfa { n, k } => lnk_dfa(*n, *k),
        Family::IneqNfa { n, k } => ineq_nfa(*n, *k),
    }
}

fn unary(n: usize) -> Result<Machine> {
    let mut m = Machine::new(Family::Unary { n }.alphabet(), n, 0)?;
    for q in 0..n - 1 {
        m.add(q, "1", q + 1, Dir::Right)?;
    }
    m.set_accepting(n - 1, true)?;
    Ok(m)
}

/// States `q0, q1, ..., q_{n+1}`; `q1` accepts. `q0` runs right to `$`, the
/// chain `q1..q_n` steps back `n` cells, `q_n` checks for a `1`, and
/// `q_{n+1}` runs back right and leaves `$` into `q1`.
///
/// For `n = 1` the check state and the accepting state coincide, which would
/// let the machine restart after the `$`; there the check instead walks
/// right in `q1` and leaves `$` into `q2`, which accepts and has no moves.
fn suffix(n: usize) -> Result<Machine> {
    let mut m = Machine::new(Family::Suffix { n }.alphabet(), n + 2, 0)?;
    m.add(0, "0", 0, Dir::Right)?;
    m.add(0, "1", 0, Dir::Right)?;
    m.add(0, "$", 1, Dir::Left)?;
    if n == 1 {
        m.add(1, "1", 1, Dir::Right)?;
        m.add(1, "$", 2, Dir::Right)?;
        m.set_accepting(2, true)?;
        return Ok(m);
    }
    for q in 1..n {
        m.add(q, "0", q + 1, Dir::Left)?;
        m.add(q, "1", q + 1, Dir::Left)?;
    }
    m.add(n, "1", n + 1, Dir::Right)?;
    m.add(n + 1, "0", n + 1, Dir::Right)?;
    m.add(n + 1, "1", n + 1, Dir::Right)?;
    m.add(n + 1, "$", 1, Dir::Right)?;
    m.set_accepting(1, true)?;
    Ok(m)
}

/// State `t < 2^n` is the register `(a_1, ..., a_n)` with `a_1` as the most
/// significant bit; state `2^n` is `f`.
fn suffix_dfa(n: usize) -> Result<Machine> {
    let size = 1usize << n;
    let mut m = Machine::new(Family::SuffixDfa { n }.alphabet(), size + 1, 0)?;
    for t in 0..size {
        for bit in 0..2 {
            m.add_transition(t, bit, ((t << 1) | bit) & (size - 1), Dir::Right)?;
        }
        if t >> (n - 1) == 1 {
            m.add(t, "$", size, Dir::Right)?;
        }
    }
    m.set_accepting(size, true)?;
    Ok(m)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Awbwa {
    Start,
    S,
    E,
    F,
    Read(Vec<u8>),
    Compare(Vec<u8>),
}

fn bit_strings(max_len: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    for len in 1..=max_len {
        for v in 0..1usize << len {
            out.push((0..len).map(|j| ((v >> (len - 1 - j)) & 1) as u8).collect());
        }
    }
    out
}

fn awbwa_dfa(i: usize) -> Result<Machine> {
    use Awbwa::*;
    let mut states = vec![Start, S, E, F];
    for x in bit_strings(i) {
        states.push(Read(x.clone()));
        states.push(Compare(x));
    }
    let mut b = Builder::new(Family::AwbwaDfa { i }.alphabet(), states.clone(), &Start)?;
    b.add(&Start, "a", &S, Dir::Right)?;
    for x in ["0", "1"] {
        let bit = x.parse::<u8>().unwrap();
        b.add(&S, x, &Read(vec![bit]), Dir::Right)?;
        for st in &states {
            match st {
                Read(xs) if xs.len() < i => {
                    let mut ys = xs.clone();
                    ys.push(bit);
                    b.add(st, x, &Read(ys), Dir::Right)?;
                }
                Compare(xs) if xs[0] == bit => {
                    let next = if xs.len() == 1 { E } else { Compare(xs[1..].to_vec()) };
                    b.add(st, x, &next, Dir::Right)?;
                }
                _ => {}
            }
        }
    }
    for st in &states {
        if let Read(xs) = st {
            if xs.len() == i {
                b.add(st, "b", &Compare(xs.clone()), Dir::Right)?;
            }
        }
    }
    b.add(&E, "a", &F, Dir::Right)?;
    b.accept(&F)?;
    Ok(b.machine)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Shuttle {
    Start,
    /// Format pass over the first block, `t` bits read.
    First(usize),
    /// Format pass over the second block.
    Second(usize),
    Back,
    Pick,
    /// Carrying bit `x`, `t` cells right of where it was picked up.
    Go(u8, usize),
    /// Returning left, `t` cells done.
    Ret(usize),
    Fwd,
    Acc,
}

/// A 2DFA with `5n + 8` states for `{a w b w a : |w| = n}`.
///
/// A right sweep checks the format `a {0,1}^n b {0,1}^n a`; the head then
/// returns to the first `a`. For each position `j`, `Pick` reads bit `j` of
/// the first block, `Go` carries it `n + 1` cells right to bit `j` of the
/// second block, and `Ret` walks `n` cells back to bit `j + 1`. When `Pick`
/// reaches `b` every bit matched and `Fwd` runs off the end.
fn awbwa_2dfa(n: usize) -> Result<Machine> {
    use Shuttle::*;
    let mut states = vec![Start];
    states.extend((0..=n).map(First));
    states.extend((0..=n).map(Second));
    states.extend([Back, Pick]);
    for x in 0..2 {
        states.extend((1..=n + 1).map(|t| Go(x, t)));
    }
    states.extend((1..n).map(Ret));
    states.extend([Fwd, Acc]);
    let mut b = Builder::new(Family::Awbwa2dfa { n }.alphabet(), states, &Start)?;
    let bits = ["0", "1"];
    b.add(&Start, "a", &First(0), Dir::Right)?;
    for t in 0..n {
        for x in bits {
            b.add(&First(t), x, &First(t + 1), Dir::Right)?;
            b.add(&Second(t), x, &Second(t + 1), Dir::Right)?;
        }
    }
    b.add(&First(n), "b", &Second(0), Dir::Right)?;
    b.add(&Second(n), "a", &Back, Dir::Left)?;
    for s in ["0", "1", "b"] {
        b.add(&Back, s, &Back, Dir::Left)?;
    }
    b.add(&Back, "a", &Pick, Dir::Right)?;
    let after_compare = if n == 1 { Pick } else { Ret(1) };
    for (x, tok) in bits.iter().enumerate() {
        let x = x as u8;
        b.add(&Pick, tok, &Go(x, 1), Dir::Right)?;
        for t in 1..=n {
            for s in ["0", "1", "b"] {
                b.add(&Go(x, t), s, &Go(x, t + 1), Dir::Right)?;
            }
        }
        b.add(&Go(x, n + 1), tok, &after_compare, Dir::Left)?;
    }
    for t in 1..n {
        let next = if t + 1 < n { Ret(t + 1) } else { Pick };
        for s in ["0", "1", "b"] {
            b.add(&Ret(t), s, &next, Dir::Left)?;
        }
    }
    b.add(&Pick, "b", &Fwd, Dir::Right)?;
    for x in bits {
        b.add(&Fwd, x, &Fwd, Dir::Right)?;
    }
    b.add(&Fwd, "a", &Acc, Dir::Right)?;
    b.accept(&Acc)?;
    Ok(b.machine)
}

/// Glues machines over a common alphabet into one for `c L_1 c ... c L_n c`:
/// a fresh start state reads the first `c`, each accepting state of block
/// `i` reads `c` into the start of block `i + 1`, and the last block's
/// accepting states read `c` into a fresh accepting state. Moves inside the
/// blocks keep their directions.
pub fn concat(blocks: &[Machine]) -> Result<Machine> {
    let first = blocks
        .first()
        .ok_or_else(|| Error::InvalidParams("concat needs at least one block".into()))?;
    if blocks.iter().any(|b| b.alphabet() != first.alphabet()) {
        return Err(Error::AlphabetMismatch);
    }
    let alphabet = first.alphabet().with_symbol("c")?;
    let c = alphabet.len() - 1;
    let mut offsets = Vec::with_capacity(blocks.len());
    let mut next = 1;
    for b in blocks {
        offsets.push(next);
        next += b.state_count();
    }
    let f = next;
    let mut m = Machine::new(alphabet, f + 1, 0)?;
    m.set_accepting(f, true)?;
    m.add_transition(0, c, offsets[0] + first.start(), Dir::Right)?;
    for (i, (block, &off)) in blocks.iter().zip(&offsets).enumerate() {
        for (q, a, mv) in block.transitions() {
            m.add_transition(off + q, a, off + mv.target, mv.dir)?;
        }
        let target = match blocks.get(i + 1) {
            Some(nb) => offsets[i + 1] + nb.start(),
            None => f,
        };
        for p in block.accepting_states() {
            m.add_transition(off + p, c, target, Dir::Right)?;
        }
    }
    Ok(m)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Mf {
    /// Measuring the first block: `c` zeros so far.
    Measure(usize),
    /// In block `j ≥ 2` with `l` zeros so far, first block length `c`.
    Block { c: usize, j: usize, l: usize },
    /// After the first `2`.
    OneTwo(usize),
    /// After `m ≥ 2` twos.
    Twos(usize),
    /// Moving left over the twos; `r` separators still to pass.
    LeftTwos(usize),
    /// Moving left through the blocks; `r ≥ 1` separators still to pass.
    LeftBlocks(usize),
    /// Measuring the selected block leftwards, `l` zeros so far.
    Count(usize),
    /// Carrying the measured length right to the twos.
    Carry(usize),
    /// Carrying the measured length over the twos.
    CarryTwos(usize),
    /// `d` zeros of the final run still to read.
    Final(usize),
}

/// A 2DFA for the block-selection language.
///
/// The first block is measured during the initial sweep and its length kept
/// in the control through the remaining blocks, since without a left
/// endmarker the left end of the input cannot be found again. After `m`
/// twos, `m = 1` checks the final run against the stored length directly;
/// otherwise the head walks left past `n - m` separators, measures block `m`
/// from its right end and carries that length back to the final run.
fn meyer_fischer(n: usize) -> Result<Machine> {
    use Mf::*;
    let mut states = vec![];
    states.extend((0..=n).map(Measure));
    for c in 1..=n {
        for j in 2..=n {
            states.extend((0..=n).map(|l| Block { c, j, l }));
        }
    }
    states.extend((1..=n).map(OneTwo));
    states.extend((2..=n).map(Twos));
    states.extend((0..n.saturating_sub(1)).map(LeftTwos));
    states.extend((1..n.saturating_sub(1)).map(LeftBlocks));
    states.extend((0..=n).map(Count));
    states.extend((1..=n).map(Carry));
    states.extend((1..=n).map(CarryTwos));
    states.extend((0..n).map(Final));
    let mut b = Builder::new(Family::MeyerFischer { n }.alphabet(), states, &Measure(0))?;
    use Dir::{Left as L, Right as R};

    for c in 0..n {
        b.add(&Measure(c), "0", &Measure(c + 1), R)?;
    }
    for c in 1..=n {
        if n == 1 {
            b.add(&Measure(c), "2", &OneTwo(c), R)?;
        } else {
            b.add(&Measure(c), "1", &Block { c, j: 2, l: 0 }, R)?;
        }
        for j in 2..=n {
            for l in 0..n {
                b.add(&Block { c, j, l }, "0", &Block { c, j, l: l + 1 }, R)?;
            }
            for l in 1..=n {
                if j < n {
                    b.add(&Block { c, j, l }, "1", &Block { c, j: j + 1, l: 0 }, R)?;
                } else {
                    b.add(&Block { c, j, l }, "2", &OneTwo(c), R)?;
                }
            }
        }
        // m = 1: the final run must match the first block
        b.add(&OneTwo(c), "0", &Final(c - 1), R)?;
        if n >= 2 {
            b.add(&OneTwo(c), "2", &Twos(2), R)?;
        }
    }
    for m in 2..=n {
        if m < n {
            b.add(&Twos(m), "2", &Twos(m + 1), R)?;
        }
        b.add(&Twos(m), "0", &LeftTwos(n - m), L)?;
    }
    for r in 0..n.saturating_sub(1) {
        b.add(&LeftTwos(r), "2", &LeftTwos(r), L)?;
        if r == 0 {
            b.add(&LeftTwos(r), "0", &Count(1), L)?;
        } else {
            b.add(&LeftTwos(r), "0", &LeftBlocks(r), L)?;
        }
    }
    for r in 1..n.saturating_sub(1) {
        b.add(&LeftBlocks(r), "0", &LeftBlocks(r), L)?;
        let next = if r == 1 { Count(0) } else { LeftBlocks(r - 1) };
        b.add(&LeftBlocks(r), "1", &next, L)?;
    }
    for l in 0..=n {
        if l < n {
            b.add(&Count(l), "0", &Count(l + 1), L)?;
        }
        if l >= 1 {
            b.add(&Count(l), "1", &Carry(l), R)?;
        }
    }
    for l in 1..=n {
        b.add(&Carry(l), "0", &Carry(l), R)?;
        b.add(&Carry(l), "1", &Carry(l), R)?;
        b.add(&Carry(l), "2", &CarryTwos(l), R)?;
        b.add(&CarryTwos(l), "2", &CarryTwos(l), R)?;
        b.add(&CarryTwos(l), "0", &Final(l - 1), R)?;
    }
    for d in 1..n {
        b.add(&Final(d), "0", &Final(d - 1), R)?;
    }
    b.accept(&Final(0))?;
    Ok(b.machine)
}

/// One state more than `inner`: a fresh start state `s`, which is the only
/// accepting state, reads `$` into the start of `inner`, and every accepting
/// state of `inner` reads `$` back into `s`.
pub fn dollar_star(inner: &Machine) -> Result<Machine> {
    inner.require_deterministic()?;
    inner.require_one_way()?;
    let alphabet = inner.alphabet().with_symbol("$")?;
    let dollar = alphabet.len() - 1;
    let s = inner.state_count();
    let mut m = Machine::new(alphabet, s + 1, s)?;
    for (q, a, mv) in inner.transitions() {
        m.add_transition(q, a, mv.target, mv.dir)?;
    }
    m.add_transition(s, dollar, inner.start(), Dir::Right)?;
    for f in inner.accepting_states() {
        m.add_transition(f, dollar, s, Dir::Right)?;
    }
    m.set_accepting(s, true)?;
    Ok(m)
}

/// States `q_0..q_{n+k+1}` are `0..=n+k+1`; `f` is `n+k+2`.
fn lnk_2dfa(n: usize, k: usize) -> Result<Machine> {
    let f = n + k + 2;
    let mut m = Machine::new(Family::Lnk2dfa { n, k }.alphabet(), n + k + 3, 0)?;
    use Dir::{Left as L, Right as R};
    for i in 0..=n {
        m.add(i, "0", i, R)?;
        m.add(i, "$1", n + 1, L)?;
    }
    for i in 0..n {
        m.add(i, "1", i + 1, R)?;
    }
    m.add(n, "1", n, R)?;
    m.add(n - 1, "$2", f, R)?;
    for i in n + 1..n + k {
        m.add(i, "0", i + 1, L)?;
        m.add(i, "1", i + 1, L)?;
    }
    m.add(n + k, "1", n + k + 1, R)?;
    m.add(n + k + 1, "0", n + k + 1, R)?;
    m.add(n + k + 1, "1", n + k + 1, R)?;
    m.add(n + k + 1, "$1", f, R)?;
    m.set_accepting(f, true)?;
    Ok(m)
}

/// States `(a_1..a_k, i)` with `#1(a) ≤ i ≤ n - 1`, plus `f`.
fn lnk_dfa(n: usize, k: usize) -> Result<Machine> {
    #[derive(Clone, PartialEq, Eq, Hash)]
    enum S {
        Reg(u32, usize),
        F,
    }
    let mut states = Vec::new();
    for i in 0..n {
        for a in 0..1u32 << k {
            if a.count_ones() as usize <= i {
                states.push(S::Reg(a, i));
            }
        }
    }
    states.push(S::F);
    let mask = (1u32 << k) - 1;
    let mut b = Builder::new(Family::LnkDfa { n, k }.alphabet(), states.clone(), &S::Reg(0, 0))?;
    for st in &states {
        let &S::Reg(a, i) = st else { continue };
        b.add(st, "0", &S::Reg((a << 1) & mask, i), Dir::Right)?;
        if i < n - 1 {
            b.add(st, "1", &S::Reg(((a << 1) | 1) & mask, i + 1), Dir::Right)?;
        }
        if a >> (k - 1) == 1 {
            b.add(st, "$1", &S::F, Dir::Right)?;
        }
        if i == n - 1 {
            b.add(st, "$2", &S::F, Dir::Right)?;
        }
    }
    b.accept(&S::F)?;
    Ok(b.machine)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Guess {
    Scan,
    Wait { bit: Symbol, target: usize },
    Done,
}

/// Guesses a position `p < n` of `u`, remembers its bit, and checks that
/// position `p + n + k` (the same position of `v`) differs. The `1^k` middle
/// is checked on every branch.
fn ineq_nfa(n: usize, k: usize) -> Result<Machine> {
    let len = 2 * n + k;
    let mut index: HashMap<(usize, Guess), usize> = HashMap::new();
    let mut states = vec![(0usize, Guess::Scan)];
    index.insert(states[0], 0);
    let mut edges = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let (p, g) = states[i];
        i += 1;
        if p == len {
            continue;
        }
        for a in 0..2 {
            if (n..n + k).contains(&p) && a != 1 {
                continue;
            }
            let mut next = Vec::new();
            match g {
                Guess::Scan => {
                    if p + 1 < n {
                        next.push(Guess::Scan);
                    }
                    next.push(Guess::Wait {
                        bit: a,
                        target: p + n + k,
                    });
                }
                Guess::Wait { bit, target } if p == target => {
                    if a != bit {
                        next.push(Guess::Done);
                    }
                }
                Guess::Wait { .. } | Guess::Done => next.push(g),
            }
            for ng in next {
                let key = (p + 1, ng);
                let j = *index.entry(key).or_insert_with(|| {
                    states.push(key);
                    states.len() - 1
                });
                edges.push((i - 1, a, j));
            }
        }
    }
    let mut m = Machine::new(Family::IneqNfa { n, k }.alphabet(), states.len(), 0)?;
    for (s, &(p, g)) in states.iter().enumerate() {
        if p == len && g == Guess::Done {
            m.set_accepting(s, true)?;
        }
    }
    for (from, a, to) in edges {
        m.add_transition(from, a, to, Dir::Right)?;
    }
    Ok(m)
}

fn tokens<'a>(alphabet: &'a Alphabet, word: &[Symbol]) -> Result<Vec<&'a str>> {
    word.iter()
        .map(|&a| {
            if a < alphabet.len() {
                Ok(alphabet.token(a))
            } else {
                Err(Error::SymbolOutOfRange {
                    index: a,
                    size: alphabet.len(),
                })
            }
        })
        .collect()
}

fn is_bits(w: &[&str]) -> bool {
    w.iter().all(|t| *t == "0" || *t == "1")
}

fn awbwa_member(w: &[&str], i: usize) -> bool {
    w.len() == 2 * i + 3
        && w[0] == "a"
        && w[i + 1] == "b"
        && w[2 * i + 2] == "a"
        && is_bits(&w[1..=i])
        && w[1..=i] == w[i + 2..2 * i + 2]
}

/// Splits `c x_1 c ... c x_n c` into its `n` segments.
fn c_blocks<'a, 'b>(w: &'b [&'a str], n: usize) -> Option<Vec<&'b [&'a str]>> {
    if w.first() != Some(&"c") || w.last() != Some(&"c") || w.len() < 2 {
        return None;
    }
    let parts: Vec<&[&str]> = w[1..w.len() - 1].split(|t| *t == "c").collect();
    (parts.len() == n).then_some(parts)
}

fn member_tokens(family: &Family, w: &[&str]) -> bool {
    match family {
        Family::Unary { n } => w.len() == n - 1 && w.iter().all(|t| *t == "1"),
        Family::Suffix { n } | Family::SuffixDfa { n } => {
            w.len() > *n
                && w[w.len() - 1] == "$"
                && is_bits(&w[..w.len() - 1])
                && w[w.len() - 1 - n] == "1"
        }
        Family::AwbwaDfa { i } | Family::Awbwa2dfa { n: i } => awbwa_member(w, *i),
        Family::Concat { blocks } => c_blocks(w, blocks.len()).is_some_and(|parts| {
            parts
                .iter()
                .zip(blocks)
                .all(|(part, block)| member_tokens(block, part))
        }),
        Family::RnMixed { n, .. } => c_blocks(w, *n).is_some_and(|parts| {
            parts
                .iter()
                .enumerate()
                .all(|(j, part)| awbwa_member(part, j + 1))
        }),
        Family::MeyerFischer { n } => meyer_fischer_member(w, *n),
        Family::DollarStar { inner } => {
            let mut rest = w;
            while !rest.is_empty() {
                if rest[0] != "$" {
                    return false;
                }
                let Some(close) = rest[1..].iter().position(|t| *t == "$") else {
                    return false;
                };
                if !member_tokens(inner, &rest[1..1 + close]) {
                    return false;
                }
                rest = &rest[close + 2..];
            }
            true
        }
        Family::Lnk2dfa { n, k } | Family::LnkDfa { n, k } => {
            let Some((last, body)) = w.split_last() else {
                return false;
            };
            if !is_bits(body) {
                return false;
            }
            match *last {
                "$1" => body.len() >= *k && body[body.len() - k] == "1",
                "$2" => body.iter().filter(|t| **t == "1").count() == n - 1,
                _ => false,
            }
        }
        Family::IneqNfa { n, k } => {
            w.len() == 2 * n + k
                && is_bits(w)
                && w[*n..n + k].iter().all(|t| *t == "1")
                && w[..*n] != w[n + k..]
        }
    }
}

fn meyer_fischer_member(w: &[&str], n: usize) -> bool {
    let Some(first_two) = w.iter().position(|t| *t == "2") else {
        return false;
    };
    let (head, tail) = w.split_at(first_two);
    let twos = tail.iter().take_while(|t| **t == "2").count();
    let last = &tail[twos..];
    let blocks: Vec<&[&str]> = head.split(|t| *t == "1").collect();
    let ok_block = |b: &&[&str]| (1..=n).contains(&b.len()) && b.iter().all(|t| *t == "0");
    blocks.len() == n
        && blocks.iter().all(ok_block)
        && (1..=n).contains(&twos)
        && last.iter().all(|t| *t == "0")
        && last.len() == blocks[twos - 1].len()
}

/// Direct evaluation of the defining condition; no automaton involved.
pub fn membership(family: &Family, word: &[Symbol]) -> Result<bool> {
    family.validate()?;
    let alphabet = family.alphabet();
    let w = tokens(&alphabet, word)?;
    Ok(member_tokens(family, &w))
}

/// Closed-form minimal DFA size where one is known.
pub fn expected_sigma0(family: &Family) -> Option<usize> {
    match family {
        Family::Unary { n } => Some(*n),
        Family::Suffix { n } | Family::SuffixDfa { n } => Some((1 << n) + 1),
        Family::AwbwaDfa { i } | Family::Awbwa2dfa { n: i } => Some(4 << i),
        Family::Concat { blocks } => blocks
            .iter()
            .map(expected_sigma0)
            .sum::<Option<usize>>()
            .map(|s| s + 2),
        Family::RnMixed { n, .. } => Some(2 + (1..=*n).map(|i| 4usize << i).sum::<usize>()),
        Family::LnkDfa { n, k } => Some(
            1 + (0..*n)
                .map(|i| (0..1u32 << k).filter(|a| a.count_ones() as usize <= i).count())
                .sum::<usize>(),
        ),
        Family::MeyerFischer { .. }
        | Family::DollarStar { .. }
        | Family::Lnk2dfa { .. }
        | Family::IneqNfa { .. } => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regular::{accepts_up_to, determinize, minimize, words_up_to};
    use crate::sim::{lambda_of_word, run};

    fn parse(f: &Family, s: &str) -> Vec<Symbol> {
        f.alphabet().parse_chars(s).unwrap()
    }

    #[test]
    fn state_counts() {
        assert_eq!(build(&Family::Suffix { n: 2 }).unwrap().state_count(), 4);
        assert_eq!(build(&Family::SuffixDfa { n: 3 }).unwrap().state_count(), 9);
        assert_eq!(build(&Family::AwbwaDfa { i: 1 }).unwrap().state_count(), 8);
        assert_eq!(build(&Family::AwbwaDfa { i: 3 }).unwrap().state_count(), 32);
        assert_eq!(build(&Family::Lnk2dfa { n: 2, k: 1 }).unwrap().state_count(), 6);
        assert_eq!(build(&Family::LnkDfa { n: 3, k: 2 }).unwrap().state_count(), 9);
        assert_eq!(build(&Family::Awbwa2dfa { n: 2 }).unwrap().state_count(), 18);
        let r2 = build(&Family::RnMixed { n: 2, m: 0 }).unwrap();
        assert_eq!(r2.state_count(), 26);
    }

    #[test]
    fn membership_examples() {
        let s = Family::Suffix { n: 2 };
        assert!(membership(&s, &parse(&s, "10$")).unwrap());
        assert!(!membership(&s, &parse(&s, "00$")).unwrap());
        let a = Family::AwbwaDfa { i: 1 };
        assert!(membership(&a, &parse(&a, "a0b0a")).unwrap());
        assert!(!membership(&a, &parse(&a, "a0b1a")).unwrap());
        let ineq = Family::IneqNfa { n: 1, k: 1 };
        assert!(membership(&ineq, &parse(&ineq, "011")).unwrap());
        assert!(membership(&ineq, &parse(&ineq, "110")).unwrap());
        assert!(!membership(&ineq, &parse(&ineq, "100")).unwrap());
        let mf = Family::MeyerFischer { n: 2 };
        assert!(membership(&mf, &parse(&mf, "010020")).unwrap());
        assert!(membership(&mf, &parse(&mf, "01002200")).unwrap());
        assert!(!membership(&mf, &parse(&mf, "0100200")).unwrap());
        assert!(!membership(&mf, &parse(&mf, "01002220")).unwrap());
        assert!(membership(&mf, &parse(&mf, "0010200")).unwrap());
    }

    #[test]
    fn builders_match_membership() {
        let cases = [
            Family::Unary { n: 3 },
            Family::Suffix { n: 1 },
            Family::Suffix { n: 2 },
            Family::Suffix { n: 3 },
            Family::SuffixDfa { n: 2 },
            Family::AwbwaDfa { i: 1 },
            Family::Awbwa2dfa { n: 1 },
            Family::MeyerFischer { n: 1 },
            Family::MeyerFischer { n: 2 },
            Family::Lnk2dfa { n: 2, k: 1 },
            Family::IneqNfa { n: 1, k: 1 },
            Family::IneqNfa { n: 2, k: 1 },
            Family::DollarStar {
                inner: Box::new(Family::Unary { n: 2 }),
            },
        ];
        for f in &cases {
            let m = build(f).unwrap();
            let len = if f.alphabet().len() > 3 { 6 } else { 8 };
            let got = accepts_up_to(&m, len).unwrap();
            for w in words_up_to(m.alphabet(), len) {
                assert_eq!(got.contains(&w), membership(f, &w).unwrap(), "{f} on {w:?}");
            }
        }
    }

    #[test]
    fn ineq_determinized() {
        let f = Family::IneqNfa { n: 1, k: 1 };
        let d = determinize(&build(&f).unwrap()).unwrap();
        let words = accepts_up_to(&d, 4).unwrap();
        let expected: std::collections::BTreeSet<_> =
            [parse(&f, "011"), parse(&f, "110")].into_iter().collect();
        assert_eq!(words, expected);
    }

    #[test]
    fn awbwa_2dfa_left_moves() {
        for n in 1..=2 {
            let f = Family::Awbwa2dfa { n };
            let m = build(&f).unwrap();
            assert_eq!(m.state_count(), 5 * n + 8);
            let w = format!("a{0}b{0}a", "1".repeat(n));
            assert_eq!(lambda_of_word(&m, &parse(&f, &w)).unwrap(), Some(n * n + 2 * n + 2));
        }
    }

    #[test]
    fn expected_sizes() {
        assert_eq!(expected_sigma0(&Family::Suffix { n: 2 }), Some(5));
        assert_eq!(expected_sigma0(&Family::Unary { n: 3 }), Some(3));
        let blocks = Family::Concat {
            blocks: vec![Family::AwbwaDfa { i: 1 }, Family::AwbwaDfa { i: 2 }],
        };
        assert_eq!(expected_sigma0(&blocks), Some(26));
        assert_eq!(expected_sigma0(&Family::LnkDfa { n: 3, k: 2 }), Some(9));
        assert_eq!(expected_sigma0(&Family::MeyerFischer { n: 2 }), None);
        let m = minimize(&build(&blocks).unwrap()).unwrap();
        assert_eq!(m.state_count(), 26);
    }

    #[test]
    fn suffix2_runs() {
        let f = Family::Suffix { n: 2 };
        let m = build(&f).unwrap();
        let out = run(&m, &parse(&f, "10$"), false).unwrap();
        assert!(out.verdict.is_accepted());
        assert_eq!((out.left_moves, out.steps), (2, 7));
    }

    #[test]
    fn name_resolution() {
        let f = Family::from_name("lnk_2dfa", Some(2), Some(1), None, None).unwrap();
        assert_eq!(f, Family::Lnk2dfa { n: 2, k: 1 });
        assert!(Family::from_name("nope", Some(1), None, None, None).is_err());
        assert!(Family::from_name("suffix", None, None, None, None).is_err());
        assert!(Family::from_name("rn_mixed", Some(2), None, Some(3), None).is_err());
        for name in FAMILY_NAMES {
            let f = Family::from_name(name, Some(2), Some(1), Some(1), None).unwrap();
            assert_eq!(f.name(), *name);
            build(&f).unwrap();
        }
    }
}
