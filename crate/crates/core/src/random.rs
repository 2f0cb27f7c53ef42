//! Seeded random machines for property tests and benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::machine::{Alphabet, Dir, Machine};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A 2DFA with `states` states; each move is undefined with probability
/// `p_undefined`, otherwise uniform over targets and directions. States
/// accept with probability 1/2.
pub fn random_2dfa<R: Rng>(rng: &mut R, states: usize, alphabet: &Alphabet, p_undefined: f64) -> Machine {
    random_machine(rng, states, alphabet, p_undefined, true, 1)
}

pub fn random_1dfa<R: Rng>(rng: &mut R, states: usize, alphabet: &Alphabet, p_undefined: f64) -> Machine {
    random_machine(rng, states, alphabet, p_undefined, false, 1)
}

/// A one-way machine with up to two moves per state and symbol.
pub fn random_1nfa<R: Rng>(rng: &mut R, states: usize, alphabet: &Alphabet, p_undefined: f64) -> Machine {
    random_machine(rng, states, alphabet, p_undefined, false, 2)
}

fn random_machine<R: Rng>(
    rng: &mut R,
    states: usize,
    alphabet: &Alphabet,
    p_undefined: f64,
    two_way: bool,
    fan_out: usize,
) -> Machine {
    let mut m = Machine::new(alphabet.clone(), states, 0).expect("states > 0");
    for q in 0..states {
        m.set_accepting(q, rng.gen_bool(0.5)).expect("in range");
        for a in 0..alphabet.len() {
            for _ in 0..fan_out {
                if rng.gen_bool(p_undefined) {
                    continue;
                }
                let target = rng.gen_range(0..states);
                let dir = if two_way && rng.gen_bool(0.5) { Dir::Left } else { Dir::Right };
                m.add_transition(q, a, target, dir).expect("in range");
            }
        }
    }
    m
}
