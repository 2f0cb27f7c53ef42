//! Two-way spectrum of a small regular language by exhaustive search.
//!
//! Every 2DFA with at most σ₀ states over the language's alphabet is a
//! candidate; the ones recognizing the language contribute `(size, λ)`
//! points, and the Pareto frontier of those points is the spectrum.

use std::fmt;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::convert::shepherdson;
use crate::error::{Error, Result};
use crate::leftmove::{lambda_of_machine, Lambda};
use crate::machine::{Alphabet, Dir, Machine, Move, Word};
use crate::regular::{determinize, equivalent, live_state_count, minimize, words_up_to};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnumerationBudget {
    pub max_states: usize,
    /// Raw candidates (transition table × accepting set) to examine.
    pub max_candidates: u64,
    pub max_seconds: f64,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        Self {
            max_states: 4,
            max_candidates: 200_000_000,
            max_seconds: 600.0,
        }
    }
}

impl EnumerationBudget {
    fn validate(&self) -> Result<()> {
        if self.max_states == 0 || self.max_candidates == 0 || self.max_seconds.is_nan() || self.max_seconds <= 0.0 {
            return Err(Error::InvalidParams("budget values must be positive".into()));
        }
        Ok(())
    }
}

/// A point of the `(size, λ)` dominance order.
pub type Point = (usize, Lambda);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumResult {
    /// Strictly decreasing sizes, strictly increasing λ.
    pub pairs: Vec<Point>,
    pub sigma_0: usize,
    pub sigma_infinity: usize,
    /// False when a budget limit cut the search short.
    pub exhaustive: bool,
    /// Candidates examined, counting each accepting set separately.
    pub candidates: u64,
}

impl SpectrumResult {
    /// σ_k: the smallest size among frontier points with λ ≤ k.
    pub fn sigma(&self, k: usize) -> usize {
        self.pairs
            .iter()
            .filter(|(_, l)| *l <= Lambda::Finite(k))
            .map(|&(s, _)| s)
            .min()
            .unwrap_or(self.sigma_0)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let pairs: Vec<serde_json::Value> = self
            .pairs
            .iter()
            .map(|&(s, l)| match l {
                Lambda::Finite(k) => serde_json::json!([s, k]),
                Lambda::Infinite => serde_json::json!([s, "inf"]),
            })
            .collect();
        serde_json::json!({
            "pairs": pairs,
            "sigma_0": self.sigma_0,
            "sigma_infinity": self.sigma_infinity,
            "exhaustive": self.exhaustive,
        })
    }
}

fn show_lambda(l: Lambda) -> String {
    match l {
        Lambda::Finite(k) => k.to_string(),
        Lambda::Infinite => "inf".into(),
    }
}

/// `sigma = (3^[0..1], 2; 2) pairs=[(3,0),(2,2)] exhaustive=true`: each
/// finite-λ pair covers the budgets up to the next pair's λ; an open-ended
/// segment starting at 0 is written as the bare size.
impl fmt::Display for SpectrumResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut segments = Vec::new();
        for (idx, &(size, l)) in self.pairs.iter().enumerate() {
            let Lambda::Finite(from) = l else { continue };
            let seg = match self.pairs.get(idx + 1).map(|p| p.1) {
                Some(Lambda::Finite(next)) => format!("{size}^[{from}..{}]", next - 1),
                _ if from == 0 => size.to_string(),
                _ => format!("{size}^[{from}..]"),
            };
            segments.push(seg);
        }
        let pairs: Vec<String> = self
            .pairs
            .iter()
            .map(|&(s, l)| format!("({s},{})", show_lambda(l)))
            .collect();
        write!(
            f,
            "sigma = ({}; {}) pairs=[{}] exhaustive={}",
            segments.join(", "),
            self.sigma_infinity,
            pairs.join(","),
            self.exhaustive
        )
    }
}

/// Minimal elements under `(x1, y1) ≤ (x2, y2) ⇔ x1 ≤ x2 ∧ y1 ≤ y2`, sorted
/// by decreasing size.
pub fn pareto_frontier(points: &[Point]) -> Result<Vec<Point>> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut sorted = points.to_vec();
    sorted.sort_unstable_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)));
    let mut out: Vec<Point> = Vec::new();
    for p in sorted {
        // scanning by increasing λ, a point survives iff it is strictly
        // smaller than everything kept so far
        if out.last().is_none_or(|last| p.0 < last.0) {
            out.push(p);
        }
    }
    Ok(out)
}

fn merge(a: Vec<Point>, b: Vec<Point>) -> Vec<Point> {
    let all: Vec<Point> = a.into_iter().chain(b).collect();
    if all.is_empty() {
        all
    } else {
        pareto_frontier(&all).expect("non-empty")
    }
}

/// Number of raw machines with `n` states: `(2n+1)^(n·|Σ|) · 2^n`.
pub fn raw_candidate_count(state_count: usize, sigma: usize) -> u128 {
    let options = 2 * state_count as u128 + 1;
    options.pow((state_count * sigma) as u32) << state_count
}

/// A transition table in enumeration form; cell `q·|Σ| + a`.
struct Table {
    n: usize,
    sigma: usize,
    cells: Vec<Option<Move>>,
}

impl Table {
    fn decode(n: usize, sigma: usize, mut index: u64) -> Self {
        let options = 2 * n as u64 + 1;
        let cells = (0..n * sigma)
            .map(|_| {
                let o = (index % options) as usize;
                index /= options;
                match o {
                    0 => None,
                    o if o <= n => Some(Move::right(o - 1)),
                    o => Some(Move::left(o - n - 1)),
                }
            })
            .collect();
        Self { n, sigma, cells }
    }

    /// Whether breadth-first discovery from state 0, scanning cells in
    /// (state, symbol) order, numbers the states `0, 1, ..., n-1` and reaches
    /// all of them.
    fn is_canonical(&self) -> bool {
        let mut next = 1;
        for q in 0..self.n {
            if q >= next {
                return false;
            }
            for a in 0..self.sigma {
                if let Some(mv) = self.cells[q * self.sigma + a] {
                    if mv.target == next {
                        next += 1;
                    } else if mv.target > next {
                        return false;
                    }
                }
            }
        }
        next == self.n
    }

    /// State in which the run leaves `word` to the right; `None` if it halts
    /// otherwise or loops.
    fn exit_state(&self, word: &[usize]) -> Option<usize> {
        let bound = self.n * (word.len() + 1);
        let (mut q, mut pos) = (0usize, 0usize);
        for _ in 0..=bound {
            if pos == word.len() {
                return Some(q);
            }
            let mv = self.cells[q * self.sigma + word[pos]]?;
            q = mv.target;
            match mv.dir {
                Dir::Right => pos += 1,
                Dir::Left => pos = pos.checked_sub(1)?,
            }
        }
        None
    }

    fn to_machine(&self, alphabet: &Alphabet, accepting: u32) -> Machine {
        let mut m = Machine::new(alphabet.clone(), self.n, 0).expect("n > 0");
        for q in 0..self.n {
            m.set_accepting(q, accepting >> q & 1 == 1).expect("in range");
            for a in 0..self.sigma {
                if let Some(mv) = self.cells[q * self.sigma + a] {
                    m.add_transition(q, a, mv.target, mv.dir).expect("in range");
                }
            }
        }
        m
    }
}

fn table_count(n: usize, sigma: usize) -> Result<u64> {
    (2 * n as u64 + 1)
        .checked_pow((n * sigma) as u32)
        .ok_or_else(|| Error::InvalidParams(format!("enumeration space for {n} states is too large")))
}

/// Every 2DFA with `state_count` states and start state 0 in canonical
/// breadth-first numbering, with every accepting set.
pub fn enumerate_2dfas(state_count: usize, alphabet: &Alphabet) -> Result<impl Iterator<Item = Machine> + '_> {
    enumerate(state_count, alphabet, true)
}

/// As [`enumerate_2dfas`] without isomorph rejection.
pub fn enumerate_all_2dfas(state_count: usize, alphabet: &Alphabet) -> Result<impl Iterator<Item = Machine> + '_> {
    enumerate(state_count, alphabet, false)
}

fn enumerate(state_count: usize, alphabet: &Alphabet, prune: bool) -> Result<impl Iterator<Item = Machine> + '_> {
    if state_count == 0 || state_count > 31 {
        return Err(Error::InvalidParams("state count must be in 1..=31".into()));
    }
    let sigma = alphabet.len();
    let tables = table_count(state_count, sigma)?;
    Ok((0..tables)
        .map(move |i| Table::decode(state_count, sigma, i))
        .filter(move |t| !prune || t.is_canonical())
        .flat_map(move |t| (0..1u32 << state_count).map(move |mask| t.to_machine(alphabet, mask))))
}

struct Search<'a> {
    alphabet: &'a Alphabet,
    target: Machine,
    /// Words of length ≤ 4 and whether the target accepts them.
    sample: Vec<(Word, bool)>,
    prune: bool,
    deadline: Instant,
    max_candidates: u64,
    examined: AtomicU64,
    stopped: AtomicBool,
}

impl Search<'_> {
    fn out_of_budget(&self) -> bool {
        if self.stopped.load(Ordering::Relaxed) {
            return true;
        }
        if self.examined.load(Ordering::Relaxed) >= self.max_candidates || Instant::now() >= self.deadline {
            self.stopped.store(true, Ordering::Relaxed);
            return true;
        }
        false
    }

    fn table(&self, n: usize, index: u64) -> Result<Vec<Point>> {
        let t = Table::decode(n, self.alphabet.len(), index);
        if self.prune && !t.is_canonical() {
            return Ok(Vec::new());
        }
        let masks = 1u32 << n;
        self.examined.fetch_add(masks as u64, Ordering::Relaxed);
        let exits: Vec<Option<usize>> = self.sample.iter().map(|(w, _)| t.exit_state(w)).collect();
        let mut points = Vec::new();
        for mask in 0..masks {
            let agrees = exits
                .iter()
                .zip(&self.sample)
                .all(|(e, (_, want))| e.is_some_and(|q| mask >> q & 1 == 1) == *want);
            if !agrees {
                continue;
            }
            let candidate = t.to_machine(self.alphabet, mask);
            if equivalent(&shepherdson(&candidate)?, &self.target)? {
                points.push((n, lambda_of_machine(&candidate)?));
            }
        }
        Ok(points)
    }

    fn states(&self, n: usize) -> Result<Vec<Point>> {
        let tables = table_count(n, self.alphabet.len())?;
        const CHUNK: u64 = 4096;
        let chunks = tables.div_ceil(CHUNK);
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut acc = Vec::new();
                for i in c * CHUNK..((c + 1) * CHUNK).min(tables) {
                    if self.out_of_budget() {
                        break;
                    }
                    acc = merge(acc, self.table(n, i)?);
                }
                Ok(acc)
            })
            .try_reduce(Vec::new, |a, b| Ok(merge(a, b)))
    }
}

/// The spectrum of `L(language)`. One-way nondeterministic and two-way
/// inputs are first turned into DFAs.
pub fn compute_spectrum(language: &Machine, budget: &EnumerationBudget) -> Result<SpectrumResult> {
    compute_spectrum_with(language, budget, true)
}

/// As [`compute_spectrum`]; `prune = false` disables isomorph rejection.
pub fn compute_spectrum_with(language: &Machine, budget: &EnumerationBudget, prune: bool) -> Result<SpectrumResult> {
    budget.validate()?;
    let dfa = if !language.is_one_way() {
        shepherdson(language)?
    } else if !language.is_deterministic() {
        determinize(language)?
    } else {
        language.clone()
    };
    let target = minimize(&dfa)?;
    let sigma_0 = target.state_count();
    if live_state_count(&target) == 0 {
        log::warn!("language is empty; reporting sigma_0 = 1");
        return Ok(SpectrumResult {
            pairs: vec![(1, Lambda::Finite(0))],
            sigma_0: 1,
            sigma_infinity: 1,
            exhaustive: true,
            candidates: 0,
        });
    }
    let alphabet = target.alphabet().clone();
    let sample = words_up_to(&alphabet, 4)
        .map(|w| {
            let accepted = crate::sim::accepts_unchecked(&target, &w);
            (w, accepted)
        })
        .collect();
    let search = Search {
        alphabet: &alphabet,
        target: target.clone(),
        sample,
        prune,
        deadline: Instant::now() + Duration::from_secs_f64(budget.max_seconds.min(1e9)),
        max_candidates: budget.max_candidates,
        examined: AtomicU64::new(0),
        stopped: AtomicBool::new(false),
    };
    let mut frontier = vec![(sigma_0, Lambda::Finite(0))];
    let top = sigma_0.min(budget.max_states);
    for n in 1..=top {
        if search.out_of_budget() {
            break;
        }
        let found = search.states(n)?;
        log::debug!("{n} states: {} frontier points", found.len());
        frontier = merge(frontier, found);
    }
    let exhaustive = top == sigma_0 && !search.stopped.load(Ordering::Relaxed);
    if !exhaustive {
        log::warn!("enumeration budget exhausted; spectrum is partial");
    }
    let sigma_infinity = frontier.last().expect("seeded").0;
    Ok(SpectrumResult {
        pairs: frontier,
        sigma_0,
        sigma_infinity,
        exhaustive,
        candidates: search.examined.load(Ordering::Relaxed),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build, Family};
    use crate::format::{parse_machine, serialize_machine};

    #[test]
    fn frontier_examples() {
        let f = |v: &[(usize, usize)]| -> Vec<Point> { v.iter().map(|&(s, l)| (s, Lambda::Finite(l))).collect() };
        assert_eq!(
            pareto_frontier(&f(&[(5, 0), (4, 2), (4, 3), (6, 1)])).unwrap(),
            f(&[(5, 0), (4, 2)])
        );
        assert_eq!(pareto_frontier(&f(&[(3, 0), (3, 5)])).unwrap(), f(&[(3, 0)]));
        assert_eq!(pareto_frontier(&f(&[(7, 1)])).unwrap(), f(&[(7, 1)]));
        assert_eq!(
            pareto_frontier(&[(3, Lambda::Finite(0)), (2, Lambda::Infinite), (2, Lambda::Infinite)]).unwrap(),
            vec![(3, Lambda::Finite(0)), (2, Lambda::Infinite)]
        );
        assert_eq!(pareto_frontier(&[]), Err(Error::EmptyInput));
    }

    #[test]
    fn raw_counts() {
        let a = Alphabet::from_chars("1").unwrap();
        assert_eq!(raw_candidate_count(1, 1), 6);
        assert_eq!(raw_candidate_count(2, 1), 100);
        assert_eq!(enumerate_all_2dfas(1, &a).unwrap().count(), 6);
        assert_eq!(enumerate_all_2dfas(2, &a).unwrap().count(), 100);
        assert!(enumerate_2dfas(2, &a).unwrap().count() < 100);
    }

    #[test]
    fn enumerated_machines_round_trip() {
        let a = Alphabet::from_chars("ab").unwrap();
        for m in enumerate_2dfas(2, &a).unwrap() {
            assert!(m.is_deterministic());
            assert_eq!(parse_machine(&serialize_machine(&m)).unwrap(), m);
        }
    }

    #[test]
    fn canonical_forms_are_unique_representatives() {
        // a deterministic machine with every state reachable has no
        // automorphism fixing the start, so each class has (n-1)! members
        let a = Alphabet::from_chars("a").unwrap();
        let reachable = |m: &Machine| {
            let mut seen = vec![false; m.state_count()];
            let mut stack = vec![0];
            seen[0] = true;
            while let Some(q) = stack.pop() {
                for (p, _, mv) in m.transitions() {
                    if p == q && !seen[mv.target] {
                        seen[mv.target] = true;
                        stack.push(mv.target);
                    }
                }
            }
            seen.iter().all(|&s| s)
        };
        let canonical = enumerate_2dfas(3, &a).unwrap().count();
        let all = enumerate_all_2dfas(3, &a).unwrap().filter(|m| reachable(m)).count();
        assert_eq!(all, 2 * canonical);
    }

    #[test]
    fn constant_spectrum_of_singletons() {
        let budget = EnumerationBudget::default();
        let r = compute_spectrum(&build(&Family::Unary { n: 2 }).unwrap(), &budget).unwrap();
        assert_eq!(r.pairs, vec![(2, Lambda::Finite(0))]);
        assert_eq!(r.to_string(), "sigma = (2; 2) pairs=[(2,0)] exhaustive=true");
        assert_eq!(r.sigma(5), 2);
        assert!(r.exhaustive);
        let json = r.to_json();
        assert_eq!(json["sigma_infinity"], 2);
    }

    #[test]
    fn pruning_keeps_frontier() {
        let budget = EnumerationBudget::default();
        let l = build(&Family::Unary { n: 3 }).unwrap();
        let pruned = compute_spectrum_with(&l, &budget, true).unwrap();
        let full = compute_spectrum_with(&l, &budget, false).unwrap();
        assert_eq!(pruned.pairs, full.pairs);
        assert!(pruned.candidates < full.candidates);
    }

    #[test]
    fn truncated_search_is_flagged() {
        let budget = EnumerationBudget {
            max_states: 1,
            ..Default::default()
        };
        let r = compute_spectrum(&build(&Family::Unary { n: 3 }).unwrap(), &budget).unwrap();
        assert!(!r.exhaustive);
        assert_eq!(r.pairs, vec![(3, Lambda::Finite(0))]);
    }

    #[test]
    fn rendering_of_segments() {
        let r = SpectrumResult {
            pairs: vec![(5, Lambda::Finite(0)), (4, Lambda::Finite(2)), (3, Lambda::Infinite)],
            sigma_0: 5,
            sigma_infinity: 3,
            exhaustive: true,
            candidates: 0,
        };
        assert_eq!(
            r.to_string(),
            "sigma = (5^[0..1], 4^[2..]; 3) pairs=[(5,0),(4,2),(3,inf)] exhaustive=true"
        );
        assert_eq!((r.sigma(0), r.sigma(1), r.sigma(2), r.sigma(100)), (5, 5, 4, 4));
    }
}
