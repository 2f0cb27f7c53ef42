//! Left-move complexity: crossing sequences, the weighted crossing-sequence
//! graph, λ(M), and the bounded languages `T_k(M)`.
//!
//! A crossing sequence lists the states in which a run crosses one cell
//! boundary. Entries at even indices (0, 2, ...) are rightward crossings and
//! name the state the head enters the right cell in; entries at odd indices
//! are leftward crossings. The boundary left of the first cell always carries
//! `(q0)` and, on an accepting run, the boundary right of the last cell
//! carries `(f)` with `f` accepting.

use std::collections::{HashMap, VecDeque};
use std::fmt::{self, Write as _};

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::convert::{convert_bounded_k, shepherdson};
use crate::error::{Error, Result};
use crate::machine::{Dir, Machine, Symbol};
use crate::regular::{equivalent, minimize};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CrossingSequence(Vec<usize>);

impl CrossingSequence {
    /// Checks the shape rules: odd length, no repeated entry among the
    /// rightward crossings and none among the leftward ones.
    pub fn new(states: Vec<usize>, machine: &Machine) -> Result<Self> {
        let n = machine.state_count();
        let ok = states.len() % 2 == 1
            && states.len() < 2 * n
            && states.iter().all(|&q| q < n)
            && distinct_by_parity(&states);
        if ok {
            Ok(Self(states))
        } else {
            Err(Error::InvalidCrossingSequence(states))
        }
    }

    pub fn singleton(q: usize) -> Self {
        Self(vec![q])
    }

    pub fn states(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of leftward crossings, `(len - 1) / 2`.
    pub fn weight(&self) -> usize {
        (self.0.len() - 1) / 2
    }
}

impl fmt::Display for CrossingSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|q| format!("q{q}")).collect();
        f.write_str(&parts.join(" "))
    }
}

fn distinct_by_parity(states: &[usize]) -> bool {
    (0..states.len()).all(|i| (i + 2..states.len()).step_by(2).all(|j| states[i] != states[j]))
}

/// Replays the cell holding `a` between the boundaries `left` and `right`.
///
/// Starting in `left[0]`, each rightward exit must match the next unread
/// rightward entry of `right` and is followed by the re-entry after it, if
/// any; each leftward exit must match the next leftward entry of `left` and
/// is followed by the re-entry after it. The replay succeeds when both
/// sequences are consumed exactly.
pub fn replay_consistent(
    machine: &Machine,
    left: &CrossingSequence,
    right: &CrossingSequence,
    a: Symbol,
) -> Result<bool> {
    machine.require_deterministic()?;
    machine.check_word(&[a])?;
    CrossingSequence::new(left.0.clone(), machine)?;
    CrossingSequence::new(right.0.clone(), machine)?;
    let (l, r) = (left.states(), right.states());
    let (mut li, mut ri) = (0, 0);
    let mut s = l[0];
    loop {
        let Some(mv) = machine.step(s, a) else {
            return Ok(false);
        };
        match mv.dir {
            Dir::Right => {
                if r.get(ri) != Some(&mv.target) {
                    return Ok(false);
                }
                match r.get(ri + 1) {
                    Some(&back) => {
                        s = back;
                        ri += 2;
                    }
                    None => return Ok(li + 1 == l.len()),
                }
            }
            Dir::Left => {
                if l.get(li + 1) != Some(&mv.target) {
                    return Ok(false);
                }
                match l.get(li + 2) {
                    Some(&back) => {
                        s = back;
                        li += 2;
                    }
                    None => return Ok(false),
                }
            }
        }
    }
}

/// The trimmed crossing-sequence graph. Node indices follow discovery order
/// of the breadth-first construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossingSequenceGraph {
    pub nodes: Vec<CrossingSequence>,
    /// `(from, symbol, to)`, sorted.
    pub edges: Vec<(usize, Symbol, usize)>,
    /// `None` when the language is empty.
    pub initial: Option<usize>,
    pub finals: Vec<usize>,
}

impl CrossingSequenceGraph {
    pub fn weight(&self, node: usize) -> usize {
        self.nodes[node].weight()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn dump(&self, machine: &Machine) -> String {
        let mut out = String::new();
        for cs in &self.nodes {
            writeln!(out, "cs: {cs} | w={}", cs.weight()).unwrap();
        }
        for &(from, a, to) in &self.edges {
            writeln!(out, "edge: {from} --{}--> {to}", machine.alphabet().token(a)).unwrap();
        }
        out
    }
}

struct Generator<'a> {
    machine: &'a Machine,
    /// States that some left move can enter; the only possible re-entries.
    reentries: Vec<usize>,
    limit: usize,
}

impl Generator<'_> {
    /// Every right boundary sequence that replays consistently with `left`
    /// on `a`.
    fn successors(&self, left: &[usize], a: Symbol) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut right = Vec::new();
        self.extend(left, 0, left[0], a, &mut right, &mut out);
        out
    }

    fn extend(
        &self,
        left: &[usize],
        mut li: usize,
        mut s: usize,
        a: Symbol,
        right: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        // leftward excursions are forced by `left`
        let exit = loop {
            let Some(mv) = self.machine.step(s, a) else {
                return;
            };
            match mv.dir {
                Dir::Right => break mv.target,
                Dir::Left => {
                    if left.get(li + 1) != Some(&mv.target) || li + 2 >= left.len() {
                        return;
                    }
                    s = left[li + 2];
                    li += 2;
                }
            }
        };
        if right.len() + 1 > self.limit || right.iter().step_by(2).any(|&q| q == exit) {
            return;
        }
        right.push(exit);
        if li + 1 == left.len() {
            out.push(right.clone());
        }
        if right.len() + 2 <= self.limit {
            for &back in &self.reentries {
                if right.iter().skip(1).step_by(2).any(|&q| q == back) {
                    continue;
                }
                right.push(back);
                self.extend(left, li, back, a, right, out);
                right.pop();
            }
        }
        right.pop();
    }
}

/// Builds the crossing-sequence graph reachable from `(q0)` and trims it to
/// the nodes that reach an accepting singleton.
pub fn build_cs_graph(machine: &Machine) -> Result<CrossingSequenceGraph> {
    machine.require_deterministic()?;
    let n = machine.state_count();
    let sigma = machine.alphabet().len();
    let mut reentries: Vec<usize> = machine
        .transitions()
        .filter(|(_, _, mv)| mv.dir == Dir::Left)
        .map(|(_, _, mv)| mv.target)
        .collect();
    reentries.sort_unstable();
    reentries.dedup();
    let gen = Generator {
        machine,
        reentries,
        limit: 2 * n - 1,
    };

    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut nodes: Vec<Vec<usize>> = vec![vec![machine.start()]];
    index.insert(nodes[0].clone(), 0);
    let mut edges = Vec::new();
    let mut queue = VecDeque::from([0]);
    while let Some(i) = queue.pop_front() {
        for a in 0..sigma {
            for right in gen.successors(&nodes[i], a) {
                let j = match index.get(&right) {
                    Some(&j) => j,
                    None => {
                        let j = nodes.len();
                        index.insert(right.clone(), j);
                        nodes.push(right);
                        queue.push_back(j);
                        j
                    }
                };
                edges.push((i, a, j));
            }
        }
    }

    let is_final = |cs: &Vec<usize>| cs.len() == 1 && machine.is_accepting(cs[0]);
    let mut live = vec![false; nodes.len()];
    let mut rev: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    for &(from, _, to) in &edges {
        rev[to].push(from);
    }
    let mut stack: Vec<usize> = (0..nodes.len()).filter(|&i| is_final(&nodes[i])).collect();
    for &i in &stack {
        live[i] = true;
    }
    while let Some(i) = stack.pop() {
        for &p in &rev[i] {
            if !live[p] {
                live[p] = true;
                stack.push(p);
            }
        }
    }

    let mut map = vec![None; nodes.len()];
    let mut kept = Vec::new();
    for (i, cs) in nodes.into_iter().enumerate() {
        if live[i] {
            map[i] = Some(kept.len());
            kept.push(CrossingSequence(cs));
        }
    }
    let mut edges: Vec<(usize, Symbol, usize)> = edges
        .into_iter()
        .filter_map(|(f, a, t)| Some((map[f]?, a, map[t]?)))
        .collect();
    edges.sort_unstable();
    let finals = (0..kept.len()).filter(|&i| is_final(&kept[i].0)).collect();
    Ok(CrossingSequenceGraph {
        initial: map[0],
        nodes: kept,
        edges,
        finals,
    })
}

/// λ(M): the supremum of left moves over accepted words.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Lambda {
    Finite(usize),
    Infinite,
}

impl Lambda {
    pub fn is_finite(self) -> bool {
        matches!(self, Lambda::Finite(_))
    }

    pub fn value(self) -> Option<usize> {
        match self {
            Lambda::Finite(k) => Some(k),
            Lambda::Infinite => None,
        }
    }
}

impl fmt::Display for Lambda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Lambda::Finite(k) => write!(f, "finite {k}"),
            Lambda::Infinite => f.write_str("infinite"),
        }
    }
}

/// λ of the machine whose graph is given. The empty language yields
/// `Finite(0)`.
pub fn lambda_of_graph(graph: &CrossingSequenceGraph) -> Lambda {
    let Some(initial) = graph.initial else {
        return Lambda::Finite(0);
    };
    let mut g: DiGraph<(), ()> = DiGraph::with_capacity(graph.nodes.len(), graph.edges.len());
    let ids: Vec<_> = (0..graph.nodes.len()).map(|_| g.add_node(())).collect();
    for &(from, _, to) in &graph.edges {
        g.update_edge(ids[from], ids[to], ());
    }
    // tarjan_scc yields components in reverse topological order
    let sccs = tarjan_scc(&g);
    let mut comp = vec![0; graph.nodes.len()];
    for (c, members) in sccs.iter().enumerate() {
        for v in members {
            comp[v.index()] = c;
        }
    }
    let mut best = vec![0usize; sccs.len()];
    for (c, members) in sccs.iter().enumerate() {
        let cyclic = members.len() > 1 || g.contains_edge(members[0], members[0]);
        let weight: usize = members.iter().map(|v| graph.weight(v.index())).sum();
        if cyclic && weight > 0 {
            return Lambda::Infinite;
        }
        let mut tail = 0;
        for v in members {
            for w in g.neighbors(*v) {
                let d = comp[w.index()];
                if d != c {
                    tail = tail.max(best[d]);
                }
            }
        }
        best[c] = weight + tail;
    }
    Lambda::Finite(best[comp[initial]])
}

pub fn lambda_of_machine(machine: &Machine) -> Result<Lambda> {
    Ok(lambda_of_graph(&build_cs_graph(machine)?))
}

/// The 2DFA over states `(q, c)` that counts left moves in `c` and has no
/// move once a further left move would exceed `k`. Only reachable pairs are
/// built.
pub fn counter_product(machine: &Machine, k: usize) -> Result<Machine> {
    machine.require_deterministic()?;
    let sigma = machine.alphabet().len();
    let mut index = HashMap::new();
    let mut pairs = vec![(machine.start(), 0usize)];
    index.insert(pairs[0], 0usize);
    let mut edges = Vec::new();
    let mut i = 0;
    while i < pairs.len() {
        let (q, c) = pairs[i];
        for a in 0..sigma {
            let Some(mv) = machine.step(q, a) else {
                continue;
            };
            let next = match mv.dir {
                Dir::Right => (mv.target, c),
                Dir::Left if c < k => (mv.target, c + 1),
                Dir::Left => continue,
            };
            let j = *index.entry(next).or_insert_with(|| {
                pairs.push(next);
                pairs.len() - 1
            });
            edges.push((i, a, j, mv.dir));
        }
        i += 1;
    }
    let mut out = Machine::new(machine.alphabet().clone(), pairs.len(), 0)?;
    for (s, &(q, _)) in pairs.iter().enumerate() {
        out.set_accepting(s, machine.is_accepting(q))?;
    }
    for (s, a, t, dir) in edges {
        out.add_transition(s, a, t, dir)?;
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct BoundedLanguageResult {
    pub k: usize,
    /// Minimal 1DFA for `T_k(M) = { w ∈ L(M) : λ(w) ≤ k }`.
    pub dfa: Machine,
}

pub fn bounded_language(machine: &Machine, k: usize) -> Result<BoundedLanguageResult> {
    let counted = counter_product(machine, k)?;
    let conv = convert_bounded_k(&counted, k)?;
    Ok(BoundedLanguageResult {
        k,
        dfa: minimize(&conv.dfa)?,
    })
}

/// Decides λ(M) = k as `T_{k-1}(M) ≠ T_k(M) = L(M)`, with `T_{-1} = ∅`.
pub fn lambda_equals(machine: &Machine, k: usize) -> Result<bool> {
    let full = shepherdson(machine)?;
    let tk = bounded_language(machine, k)?.dfa;
    if !equivalent(&tk, &full)? {
        return Ok(false);
    }
    if k == 0 {
        return Ok(true);
    }
    let below = bounded_language(machine, k - 1)?.dfa;
    Ok(!equivalent(&below, &tk)?)
}
