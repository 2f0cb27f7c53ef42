//! Configuration-level simulation with left-move counting.

use std::collections::VecDeque;

use crate::error::Result;
use crate::machine::{Dir, Machine, Symbol};

/// A state and a head position. The position may be `-1` (the head fell off
/// the left end) or `|w|` (the head left the input on the right).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Configuration {
    pub state: usize,
    pub position: isize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Accepted,
    /// No move defined for the current state and symbol, or the head left the
    /// input on the right in a non-accepting state.
    RejectedUndefined,
    /// A left move from position 0.
    RejectedBadHalt,
    RejectedLoop,
}

impl Verdict {
    pub fn is_accepted(self) -> bool {
        self == Verdict::Accepted
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Accepted => "accepted",
            Verdict::RejectedUndefined => "rejected-undefined",
            Verdict::RejectedBadHalt => "rejected-bad-halt",
            Verdict::RejectedLoop => "rejected-loop",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutcome {
    pub verdict: Verdict,
    /// Number of transitions with direction -1.
    pub left_moves: usize,
    /// Number of transitions taken.
    pub steps: usize,
    /// Every configuration visited, starting with `(q0, 0)`; only filled when
    /// a trace was requested.
    pub trace: Option<Vec<Configuration>>,
}

/// Runs a deterministic machine on `word`.
///
/// Loops are detected by a step bound: a run that has taken
/// `state_count * (|w| + 1)` steps without halting has necessarily repeated a
/// configuration.
pub fn run(machine: &Machine, word: &[Symbol], want_trace: bool) -> Result<RunOutcome> {
    machine.require_deterministic()?;
    machine.check_word(word)?;
    Ok(run_unchecked(machine, word, want_trace))
}

pub(crate) fn run_unchecked(machine: &Machine, word: &[Symbol], want_trace: bool) -> RunOutcome {
    let n = word.len();
    let bound = machine.state_count() * (n + 1);
    let mut state = machine.start();
    let mut pos = 0usize;
    let mut left_moves = 0;
    let mut steps = 0;
    let mut trace = want_trace.then(|| {
        vec![Configuration {
            state,
            position: 0,
        }]
    });
    let verdict = loop {
        if pos == n {
            break if machine.is_accepting(state) {
                Verdict::Accepted
            } else {
                Verdict::RejectedUndefined
            };
        }
        if steps >= bound {
            break Verdict::RejectedLoop;
        }
        let Some(mv) = machine.step(state, word[pos]) else {
            break Verdict::RejectedUndefined;
        };
        steps += 1;
        state = mv.target;
        let fell_off = match mv.dir {
            Dir::Right => {
                pos += 1;
                false
            }
            Dir::Left => {
                left_moves += 1;
                if pos == 0 {
                    true
                } else {
                    pos -= 1;
                    false
                }
            }
        };
        if let Some(t) = trace.as_mut() {
            t.push(Configuration {
                state,
                position: if fell_off { -1 } else { pos as isize },
            });
        }
        if fell_off {
            break Verdict::RejectedBadHalt;
        }
    };
    RunOutcome {
        verdict,
        left_moves,
        steps,
        trace,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NondetOutcome {
    pub accepted: bool,
    /// Fewest left moves over all accepting computations.
    pub min_left_moves: Option<usize>,
}

/// Explores the configuration graph of any machine on `word`; left moves are
/// edge costs of a 0-1 shortest-path search.
pub fn run_nondet(machine: &Machine, word: &[Symbol]) -> Result<NondetOutcome> {
    machine.check_word(word)?;
    Ok(run_nondet_unchecked(machine, word))
}

pub(crate) fn run_nondet_unchecked(machine: &Machine, word: &[Symbol]) -> NondetOutcome {
    let n = word.len();
    let width = n + 1;
    let mut dist = vec![usize::MAX; machine.state_count() * width];
    let mut queue = VecDeque::new();
    let start = machine.start() * width;
    dist[start] = 0;
    queue.push_back(start);
    let mut best: Option<usize> = None;
    while let Some(node) = queue.pop_front() {
        let (q, pos) = (node / width, node % width);
        let d = dist[node];
        if best.is_some_and(|b| d >= b) {
            // 0-1 BFS pops in non-decreasing distance order
            break;
        }
        if pos == n {
            if machine.is_accepting(q) {
                best = Some(d);
            }
            continue;
        }
        for mv in machine.moves(q, word[pos]) {
            let (next_pos, cost) = match mv.dir {
                Dir::Right => (pos + 1, 0),
                Dir::Left if pos == 0 => continue,
                Dir::Left => (pos - 1, 1),
            };
            let next = mv.target * width + next_pos;
            if d + cost < dist[next] {
                dist[next] = d + cost;
                if cost == 0 {
                    queue.push_front(next);
                } else {
                    queue.push_back(next);
                }
            }
        }
    }
    NondetOutcome {
        accepted: best.is_some(),
        min_left_moves: best,
    }
}

/// Whether `machine` accepts `word`, dispatching on determinism.
pub fn accepts(machine: &Machine, word: &[Symbol]) -> Result<bool> {
    machine.check_word(word)?;
    Ok(accepts_unchecked(machine, word))
}

pub(crate) fn accepts_unchecked(machine: &Machine, word: &[Symbol]) -> bool {
    if machine.is_deterministic() {
        run_unchecked(machine, word, false).verdict.is_accepted()
    } else {
        run_nondet_unchecked(machine, word).accepted
    }
}

/// Left moves of the run on an accepted word; `None` if `word` is rejected.
pub fn lambda_of_word(machine: &Machine, word: &[Symbol]) -> Result<Option<usize>> {
    let out = run(machine, word, false)?;
    Ok(out.verdict.is_accepted().then_some(out.left_moves))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::machine::Alphabet;

    fn bouncer() -> Machine {
        let mut m = Machine::new(Alphabet::from_chars("a").unwrap(), 2, 0).unwrap();
        m.add(0, "a", 1, Dir::Right).unwrap();
        m.add(1, "a", 0, Dir::Left).unwrap();
        m
    }

    #[test]
    fn bouncer_loops() {
        let m = bouncer();
        let out = run(&m, &[0, 0], true).unwrap();
        assert_eq!(out.verdict, Verdict::RejectedLoop);
        // the explicit cycle (q0,0) -> (q1,1) -> (q0,0) repeats within the bound
        let trace = out.trace.unwrap();
        assert_eq!(trace[0], trace[2]);
        assert!(out.steps <= 2 * 3);
        assert!(!run_nondet(&m, &[0, 0]).unwrap().accepted);
    }

    #[test]
    fn empty_word_accepts_iff_start_accepting() {
        let mut m = bouncer();
        assert_eq!(run(&m, &[], false).unwrap().verdict, Verdict::RejectedUndefined);
        m.set_accepting(0, true).unwrap();
        let out = run(&m, &[], false).unwrap();
        assert_eq!(out.verdict, Verdict::Accepted);
        assert_eq!((out.left_moves, out.steps), (0, 0));
    }

    #[test]
    fn left_move_at_position_zero_is_bad_halt() {
        let mut m = Machine::new(Alphabet::from_chars("a").unwrap(), 1, 0).unwrap();
        m.set_accepting(0, true).unwrap();
        m.add(0, "a", 0, Dir::Left).unwrap();
        let out = run(&m, &[0], true).unwrap();
        assert_eq!(out.verdict, Verdict::RejectedBadHalt);
        assert_eq!(out.left_moves, 1);
        assert_eq!(out.trace.unwrap().last().unwrap().position, -1);
    }

    #[test]
    fn rejects_foreign_symbols_and_nondeterminism() {
        let m = bouncer();
        assert!(matches!(run(&m, &[3], false), Err(Error::SymbolOutOfRange { .. })));
        let mut n = m.clone();
        n.add(0, "a", 0, Dir::Right).unwrap();
        assert_eq!(run(&n, &[0], false), Err(Error::NotDeterministic));
    }

    #[test]
    fn nondet_prefers_fewest_left_moves() {
        // From q0 on 'a' either go straight right into accepting q2, or detour
        // through q1 with a left move.
        let mut m = Machine::new(Alphabet::from_chars("a").unwrap(), 3, 0).unwrap();
        m.add(0, "a", 1, Dir::Right).unwrap();
        m.add(1, "a", 2, Dir::Left).unwrap();
        m.add(2, "a", 2, Dir::Right).unwrap();
        m.add(0, "a", 2, Dir::Right).unwrap();
        m.set_accepting(2, true).unwrap();
        let out = run_nondet(&m, &[0, 0]).unwrap();
        assert_eq!(out.min_left_moves, Some(0));
    }
}
