//! One-way automata toolkit: subset construction, trimming, minimization of
//! partial DFAs, boolean products, exact equivalence and bounded word
//! enumeration.
//!
//! Minimal DFAs are partial: the dead quotient is never a state, so the state
//! count of a minimal DFA is the number of non-empty left quotients of its
//! language. The empty language is the one-state machine without accepting
//! states; [`live_state_count`] reports 0 for it.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::machine::{Alphabet, Dir, Machine, Symbol, Word};
use crate::sim;

/// Words enumerated by [`accepts_up_to`] at most; the count of all words of
/// length ≤ 12 over three symbols.
pub const DEFAULT_WORD_CAP: u128 = 797_161;

fn require_dfa(machine: &Machine) -> Result<()> {
    machine.require_deterministic()?;
    machine.require_one_way()
}

/// Subset construction. Only reachable, non-empty subsets become states.
pub fn determinize(nfa: &Machine) -> Result<Machine> {
    nfa.require_one_way()?;
    let sigma = nfa.alphabet().len();
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut subsets: Vec<Vec<usize>> = Vec::new();
    let mut edges: Vec<(usize, Symbol, usize)> = Vec::new();
    let start = vec![nfa.start()];
    index.insert(start.clone(), 0);
    subsets.push(start);
    let mut i = 0;
    while i < subsets.len() {
        for a in 0..sigma {
            let next: BTreeSet<usize> = subsets[i]
                .iter()
                .flat_map(|&q| nfa.moves(q, a).iter().map(|mv| mv.target))
                .collect();
            if next.is_empty() {
                continue;
            }
            let next: Vec<usize> = next.into_iter().collect();
            let j = *index.entry(next.clone()).or_insert_with(|| {
                subsets.push(next);
                subsets.len() - 1
            });
            edges.push((i, a, j));
        }
        i += 1;
    }
    let mut dfa = Machine::new(nfa.alphabet().clone(), subsets.len(), 0)?;
    for (s, subset) in subsets.iter().enumerate() {
        dfa.set_accepting(s, subset.iter().any(|&q| nfa.is_accepting(q)))?;
    }
    for (s, a, t) in edges {
        dfa.add_transition(s, a, t, Dir::Right)?;
    }
    Ok(dfa)
}

/// States reachable from the start and co-reachable to acceptance, treating
/// every transition as a graph edge.
pub fn live_states(machine: &Machine) -> Vec<bool> {
    let n = machine.state_count();
    let mut forward = vec![Vec::new(); n];
    let mut backward = vec![Vec::new(); n];
    for (q, _, mv) in machine.transitions() {
        forward[q].push(mv.target);
        backward[mv.target].push(q);
    }
    let reach = |roots: Vec<usize>, adj: &[Vec<usize>]| {
        let mut seen = vec![false; n];
        let mut stack = roots;
        for &r in &stack {
            seen[r] = true;
        }
        while let Some(q) = stack.pop() {
            for &p in &adj[q] {
                if !seen[p] {
                    seen[p] = true;
                    stack.push(p);
                }
            }
        }
        seen
    };
    let reachable = reach(vec![machine.start()], &forward);
    let coreachable = reach(machine.accepting_states().collect(), &backward);
    reachable
        .iter()
        .zip(&coreachable)
        .map(|(&r, &c)| r && c)
        .collect()
}

/// Number of live states; 0 exactly when the language is empty.
pub fn live_state_count(machine: &Machine) -> usize {
    live_states(machine).iter().filter(|&&l| l).count()
}

/// Restricts a one-way machine to its live states. An empty language yields
/// [`Machine::empty_language`].
pub fn trim(machine: &Machine) -> Result<Machine> {
    machine.require_one_way()?;
    let live = live_states(machine);
    if !live[machine.start()] {
        return Ok(Machine::empty_language(machine.alphabet().clone()));
    }
    let mut map = vec![None; machine.state_count()];
    let mut count = 0;
    for q in 0..machine.state_count() {
        if live[q] {
            map[q] = Some(count);
            count += 1;
        }
    }
    machine.relabel(&map, count)
}

/// Minimal partial DFA, states numbered in breadth-first order from the start
/// state over alphabet order.
pub fn minimize(dfa: &Machine) -> Result<Machine> {
    require_dfa(dfa)?;
    let trimmed = trim(dfa)?;
    if trimmed.accepting_states().next().is_none() {
        return Ok(trimmed);
    }
    let n = trimmed.state_count();
    let sigma = trimmed.alphabet().len();
    // Complete the machine with a sink at index n for refinement.
    let succ = |q: usize, a: Symbol| -> usize {
        if q == n {
            n
        } else {
            trimmed.step(q, a).map_or(n, |mv| mv.target)
        }
    };
    let mut block: Vec<usize> = (0..=n)
        .map(|q| usize::from(q < n && trimmed.is_accepting(q)))
        .collect();
    let mut blocks = 1 + usize::from(block.contains(&1) && block.contains(&0));
    loop {
        let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
        let next: Vec<usize> = (0..=n)
            .map(|q| {
                let sig: Vec<usize> = std::iter::once(block[q])
                    .chain((0..sigma).map(|a| block[succ(q, a)]))
                    .collect();
                let fresh = ids.len();
                *ids.entry(sig).or_insert(fresh)
            })
            .collect();
        let refined = ids.len();
        block = next;
        if refined == blocks {
            break;
        }
        blocks = refined;
    }
    let sink_block = block[n];
    // BFS numbering over blocks.
    let mut number: HashMap<usize, usize> = HashMap::new();
    let mut representative: Vec<usize> = Vec::new();
    let mut queue = VecDeque::from([trimmed.start()]);
    number.insert(block[trimmed.start()], 0);
    representative.push(trimmed.start());
    while let Some(q) = queue.pop_front() {
        for a in 0..sigma {
            let t = succ(q, a);
            if block[t] == sink_block || number.contains_key(&block[t]) {
                continue;
            }
            number.insert(block[t], representative.len());
            representative.push(t);
            queue.push_back(t);
        }
    }
    let mut min = Machine::new(trimmed.alphabet().clone(), representative.len(), 0)?;
    for (i, &q) in representative.iter().enumerate() {
        min.set_accepting(i, trimmed.is_accepting(q))?;
        for a in 0..sigma {
            let t = succ(q, a);
            if block[t] != sink_block {
                min.add_transition(i, a, number[&block[t]], Dir::Right)?;
            }
        }
    }
    Ok(min)
}

/// A shortest word in the symmetric difference of two DFA languages.
pub fn find_difference(d1: &Machine, d2: &Machine) -> Result<Option<Word>> {
    require_dfa(d1)?;
    require_dfa(d2)?;
    if d1.alphabet() != d2.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    type Pair = (Option<usize>, Option<usize>);
    let accepts = |(p, q): Pair| {
        p.is_some_and(|p| d1.is_accepting(p)) != q.is_some_and(|q| d2.is_accepting(q))
    };
    let start: Pair = (Some(d1.start()), Some(d2.start()));
    let mut parent: HashMap<Pair, Option<(Pair, Symbol)>> = HashMap::from([(start, None)]);
    let mut queue = VecDeque::from([start]);
    while let Some(pair) = queue.pop_front() {
        if accepts(pair) {
            let mut word = Vec::new();
            let mut cur = pair;
            while let Some(&Some((prev, a))) = parent.get(&cur) {
                word.push(a);
                cur = prev;
            }
            word.reverse();
            return Ok(Some(word));
        }
        for a in 0..d1.alphabet().len() {
            let next: Pair = (
                pair.0.and_then(|p| d1.step(p, a)).map(|mv| mv.target),
                pair.1.and_then(|q| d2.step(q, a)).map(|mv| mv.target),
            );
            if next == (None, None) || parent.contains_key(&next) {
                continue;
            }
            parent.insert(next, Some((pair, a)));
            queue.push_back(next);
        }
    }
    Ok(None)
}

pub fn equivalent(d1: &Machine, d2: &Machine) -> Result<bool> {
    Ok(find_difference(d1, d2)?.is_none())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductMode {
    And,
    Or,
    Diff,
}

/// DFA for the boolean combination of two DFA languages, trimmed.
pub fn product(d1: &Machine, d2: &Machine, mode: ProductMode) -> Result<Machine> {
    require_dfa(d1)?;
    require_dfa(d2)?;
    if d1.alphabet() != d2.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    type Pair = (Option<usize>, Option<usize>);
    let mut index: HashMap<Pair, usize> = HashMap::new();
    let mut pairs: Vec<Pair> = vec![(Some(d1.start()), Some(d2.start()))];
    index.insert(pairs[0], 0);
    let mut edges = Vec::new();
    let mut i = 0;
    while i < pairs.len() {
        let (p, q) = pairs[i];
        for a in 0..d1.alphabet().len() {
            let next: Pair = (
                p.and_then(|p| d1.step(p, a)).map(|mv| mv.target),
                q.and_then(|q| d2.step(q, a)).map(|mv| mv.target),
            );
            if next == (None, None) {
                continue;
            }
            let j = *index.entry(next).or_insert_with(|| {
                pairs.push(next);
                pairs.len() - 1
            });
            edges.push((i, a, j));
        }
        i += 1;
    }
    let mut out = Machine::new(d1.alphabet().clone(), pairs.len(), 0)?;
    for (s, &(p, q)) in pairs.iter().enumerate() {
        let in1 = p.is_some_and(|p| d1.is_accepting(p));
        let in2 = q.is_some_and(|q| d2.is_accepting(q));
        let accept = match mode {
            ProductMode::And => in1 && in2,
            ProductMode::Or => in1 || in2,
            ProductMode::Diff => in1 && !in2,
        };
        out.set_accepting(s, accept)?;
    }
    for (s, a, t) in edges {
        out.add_transition(s, a, t, Dir::Right)?;
    }
    trim(&out)
}

/// Number of words of length at most `len` over `sigma` symbols.
pub fn word_count(sigma: usize, len: usize) -> u128 {
    (0..=len as u32).map(|l| (sigma as u128).pow(l)).sum()
}

/// Every word of length ≤ `len`, in length-lexicographic order.
pub fn words_up_to(alphabet: &Alphabet, len: usize) -> impl Iterator<Item = Word> + '_ {
    let sigma = alphabet.len();
    (0..=len).flat_map(move |l| {
        let total = if sigma == 0 {
            u128::from(l == 0)
        } else {
            (sigma as u128).pow(l as u32)
        };
        (0..total).map(move |mut code| {
            let mut w = vec![0; l];
            for slot in w.iter_mut().rev() {
                *slot = (code % sigma as u128) as usize;
                code /= sigma as u128;
            }
            w
        })
    })
}

/// The exact set of accepted words of length ≤ `len`.
pub fn accepts_up_to(machine: &Machine, len: usize) -> Result<BTreeSet<Word>> {
    accepts_up_to_capped(machine, len, DEFAULT_WORD_CAP)
}

pub fn accepts_up_to_capped(machine: &Machine, len: usize, cap: u128) -> Result<BTreeSet<Word>> {
    let words = word_count(machine.alphabet().len(), len);
    if words > cap {
        return Err(Error::WordBudgetExceeded { words, cap });
    }
    Ok(words_up_to(machine.alphabet(), len)
        .filter(|w| sim::accepts_unchecked(machine, w))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dfa(alpha: &str, n: usize, accept: &[usize], delta: &[(usize, &str, usize)]) -> Machine {
        let mut m = Machine::new(Alphabet::from_chars(alpha).unwrap(), n, 0).unwrap();
        for &q in accept {
            m.set_accepting(q, true).unwrap();
        }
        for &(q, a, t) in delta {
            m.add(q, a, t, Dir::Right).unwrap();
        }
        m
    }

    #[test]
    fn determinize_ends_with_one() {
        // {0,1}*1
        let mut nfa = dfa("01", 2, &[1], &[(0, "0", 0), (0, "1", 0), (0, "1", 1)]);
        nfa.set_accepting(1, true).unwrap();
        let d = determinize(&nfa).unwrap();
        assert!(d.is_deterministic());
        let m = minimize(&d).unwrap();
        assert_eq!(m.state_count(), 2);
        assert_eq!(accepts_up_to(&m, 6).unwrap(), accepts_up_to(&nfa, 6).unwrap());
    }

    #[test]
    fn minimize_empty_language() {
        let d = dfa("ab", 3, &[], &[(0, "a", 1), (1, "b", 2)]);
        let m = minimize(&d).unwrap();
        assert_eq!(m.state_count(), 1);
        assert_eq!(live_state_count(&m), 0);
        assert!(accepts_up_to(&m, 4).unwrap().is_empty());
    }

    #[test]
    fn minimize_merges_and_drops_dead() {
        // a(a|b) with duplicated accepting states and a dead branch
        let d = dfa(
            "ab",
            5,
            &[2, 3],
            &[(0, "a", 1), (1, "a", 2), (1, "b", 3), (0, "b", 4)],
        );
        let m = minimize(&d).unwrap();
        assert_eq!(m.state_count(), 3);
        assert!(equivalent(&m, &d).unwrap());
    }

    #[test]
    fn flipping_an_accepting_flag_breaks_equivalence() {
        let d = dfa("ab", 2, &[1], &[(0, "a", 1), (1, "b", 0)]);
        let mut e = d.clone();
        e.set_accepting(0, true).unwrap();
        assert_eq!(find_difference(&d, &e).unwrap(), Some(vec![]));
        assert!(!equivalent(&d, &e).unwrap());
    }

    #[test]
    fn product_modes() {
        let one = dfa("1", 2, &[1], &[(0, "1", 1)]);
        let two = dfa("1", 3, &[2], &[(0, "1", 1), (1, "1", 2)]);
        let union = product(&one, &two, ProductMode::Or).unwrap();
        let words = accepts_up_to(&union, 4).unwrap();
        assert_eq!(words, BTreeSet::from([vec![0], vec![0, 0]]));
        assert_eq!(live_state_count(&product(&one, &one, ProductMode::Diff).unwrap()), 0);
        assert_eq!(live_state_count(&product(&one, &two, ProductMode::And).unwrap()), 0);
    }

    #[test]
    fn alphabet_mismatch() {
        let a = dfa("a", 1, &[0], &[]);
        let b = dfa("b", 1, &[0], &[]);
        assert_eq!(equivalent(&a, &b), Err(Error::AlphabetMismatch));
        assert!(matches!(
            product(&a, &b, ProductMode::And),
            Err(Error::AlphabetMismatch)
        ));
    }

    #[test]
    fn word_cap() {
        let a = dfa("abc", 1, &[0], &[]);
        assert!(accepts_up_to(&a, 12).is_ok());
        assert!(matches!(
            accepts_up_to(&a, 13),
            Err(Error::WordBudgetExceeded { .. })
        ));
    }
}
