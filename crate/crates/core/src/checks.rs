//! Reproduction checks for the known state counts and spectra of the witness
//! families.
//!
//! Each check recomputes its numbers from scratch and reports PASS, FAIL or
//! SKIP with a one-line explanation. Tolerances are exact throughout; the
//! runtime limits are part of each check.

use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::convert::{bounded_k_state_bound, convert_bounded_k, crossing_sequence_nfa, shepherdson};
use crate::error::{Error, Result};
use crate::families::{build, concat, expected_sigma0, membership, Family};
use crate::format::serialize_machine;
use crate::leftmove::{bounded_language, lambda_equals, lambda_of_machine, Lambda};
use crate::machine::{Alphabet, Dir, Machine};
use crate::random::{random_2dfa, rng};
use crate::regular::{
    accepts_up_to, find_difference, live_state_count, minimize, product, words_up_to, ProductMode,
};
use crate::sim::{accepts, lambda_of_word, run};
use crate::spectrum::{compute_spectrum, EnumerationBudget};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// The check could not run to completion within its budget.
    Skip,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        }
    }
}

#[derive(Debug, Clone)]
pub struct CheckReport {
    pub id: usize,
    pub title: &'static str,
    pub status: Status,
    pub detail: String,
    pub elapsed: Duration,
    pub limit: Duration,
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2} {}: {} ({:.2}s, limit {}s)",
            self.status.as_str(),
            self.id,
            self.title,
            self.detail,
            self.elapsed.as_secs_f64(),
            self.limit.as_secs()
        )
    }
}

#[derive(Debug, Clone)]
pub struct CheckOptions {
    /// Random machines for the oracle-agreement check.
    pub samples: usize,
    pub seed: u64,
    /// Budget for the `($1$)*` spectrum.
    pub spectrum_budget: EnumerationBudget,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            samples: 500,
            seed: 0x5eed,
            spectrum_budget: EnumerationBudget {
                max_states: 3,
                max_seconds: 540.0,
                ..Default::default()
            },
        }
    }
}

pub const CHECK_COUNT: usize = 10;

const TITLES: [&str; CHECK_COUNT] = [
    "suffix family sizes and left moves",
    "constant spectrum of {1^(n-1)}",
    "concatenation sizes",
    "awbwa minimal DFA",
    "L_{n,k} machines",
    "bounded-lookback conversion size",
    "oracle agreement on random 2DFAs",
    "infinite left-move detection",
    "constant spectrum of ($1$)*",
    "awbwa two-way machine",
];

const LIMITS: [u64; CHECK_COUNT] = [10, 60, 30, 10, 30, 10, 300, 1, 600, 30];

/// Collects sub-check failures.
#[derive(Default)]
struct Tally {
    notes: Vec<String>,
    failures: Vec<String>,
}

impl Tally {
    fn expect(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        if ok {
            self.notes.push(what);
        } else {
            self.failures.push(what);
        }
    }

    fn finish(self) -> (Status, String) {
        if self.failures.is_empty() {
            (Status::Pass, self.notes.join("; "))
        } else {
            (Status::Fail, format!("failed: {}", self.failures.join("; ")))
        }
    }
}

pub fn run_check(id: usize, options: &CheckOptions) -> Result<CheckReport> {
    if !(1..=CHECK_COUNT).contains(&id) {
        return Err(Error::InvalidParams(format!("no check {id}")));
    }
    let start = Instant::now();
    let (status, detail) = match id {
        1 => suffix_family()?,
        2 => unary_spectrum()?,
        3 => concatenation()?,
        4 => awbwa_minimal()?,
        5 => lnk()?,
        6 => bounded_conversion()?,
        7 => oracle_agreement(options.samples, options.seed)?,
        8 => infinite_detection()?,
        9 => dollar_star_spectrum(&options.spectrum_budget)?,
        _ => awbwa_two_way()?,
    };
    let elapsed = start.elapsed();
    let limit = Duration::from_secs(LIMITS[id - 1]);
    let (status, detail) = if status == Status::Pass && elapsed > limit {
        (Status::Fail, format!("{detail}; exceeded the time limit"))
    } else {
        (status, detail)
    };
    Ok(CheckReport {
        id,
        title: TITLES[id - 1],
        status,
        detail,
        elapsed,
        limit,
    })
}

pub fn run_all(options: &CheckOptions) -> Result<Vec<CheckReport>> {
    (1..=CHECK_COUNT).map(|id| run_check(id, options)).collect()
}

fn suffix_family() -> Result<(Status, String)> {
    let mut t = Tally::default();
    for n in 1..=3 {
        let m = build(&Family::Suffix { n })?;
        t.expect(m.state_count() == n + 2, format!("n={n}: {} states", m.state_count()));
        let lambda = lambda_of_machine(&m)?;
        t.expect(lambda == Lambda::Finite(n), format!("n={n}: lambda {lambda}"));
        let min = minimize(&shepherdson(&m)?)?.state_count();
        t.expect(min == (1 << n) + 1, format!("n={n}: minimal DFA {min}"));
    }
    Ok(t.finish())
}

fn unary_spectrum() -> Result<(Status, String)> {
    let mut t = Tally::default();
    for n in 2..=3 {
        let r = compute_spectrum(&build(&Family::Unary { n })?, &EnumerationBudget::default())?;
        let ok = r.pairs == [(n, Lambda::Finite(0))] && r.sigma_infinity == n && r.exhaustive;
        t.expect(ok, format!("n={n}: {r}"));
    }
    Ok(t.finish())
}

fn concatenation() -> Result<(Status, String)> {
    let mut t = Tally::default();
    for n in 1..=2 {
        let blocks: Vec<Family> = (1..=n).map(|i| Family::AwbwaDfa { i }).collect();
        let machines = blocks.iter().map(build).collect::<Result<Vec<_>>>()?;
        let glued = minimize(&concat(&machines)?)?.state_count();
        let formula = 2 + (1..=n).map(|i| 4usize << i).sum::<usize>();
        let expected = [10, 26][n - 1];
        let family = expected_sigma0(&Family::Concat { blocks });
        t.expect(
            glued == expected && formula == expected && family == Some(expected),
            format!("n={n}: minimized {glued}, formula {formula}"),
        );
        // the same language through the mixed two-way construction
        let mixed = minimize(&shepherdson(&build(&Family::RnMixed { n, m: n })?)?)?.state_count();
        t.expect(mixed == expected, format!("n={n}: two-way blocks minimized {mixed}"));
    }
    Ok(t.finish())
}

fn awbwa_minimal() -> Result<(Status, String)> {
    let mut t = Tally::default();
    for i in 1..=3 {
        let m = build(&Family::AwbwaDfa { i })?;
        let min = minimize(&m)?.state_count();
        let want = 4 << i;
        t.expect(
            min == want && m.state_count() == want,
            format!("i={i}: built {}, minimized {min}", m.state_count()),
        );
    }
    Ok(t.finish())
}

fn lnk() -> Result<(Status, String)> {
    let mut t = Tally::default();
    for (n, k) in [(2, 1), (2, 2), (3, 2)] {
        let two = build(&Family::Lnk2dfa { n, k })?;
        let one = build(&Family::LnkDfa { n, k })?;
        t.expect(two.state_count() == n + k + 3, format!("({n},{k}): 2DFA {} states", two.state_count()));
        let lambda = lambda_of_machine(&two)?;
        t.expect(lambda <= Lambda::Finite(k), format!("({n},{k}): lambda {lambda}"));
        let min = minimize(&one)?.state_count();
        t.expect(min == one.state_count(), format!("({n},{k}): DFA {} -> {min}", one.state_count()));
        let full = shepherdson(&two)?;
        match find_difference(&full, &one)? {
            None => t.expect(true, format!("({n},{k}): equivalent")),
            Some(w) => t.expect(false, format!("({n},{k}): not equivalent, e.g. {:?}", one.alphabet().render(&w))),
        }
    }
    let formula = expected_sigma0(&Family::LnkDfa { n: 3, k: 2 });
    let dfa = minimize(&build(&Family::LnkDfa { n: 3, k: 2 })?)?.state_count();
    t.expect(formula == Some(9) && dfa == 9, format!("(3,2): DFA minimized {dfa}, formula 9"));
    let language = minimize(&shepherdson(&build(&Family::Lnk2dfa { n: 3, k: 2 })?)?)?.state_count();
    t.expect(language == 9, format!("(3,2): minimal DFA of the 2DFA's language {language}"));
    Ok(t.finish())
}

fn bounded_conversion() -> Result<(Status, String)> {
    let mut t = Tally::default();
    let m = build(&Family::Suffix { n: 2 })?;
    let conv = convert_bounded_k(&m, 2)?;
    let raw = conv.dfa.state_count();
    let bound = bounded_k_state_bound(&m, 2);
    t.expect(raw as u128 <= bound && bound == 768, format!("raw {raw} <= {bound}"));
    let min = minimize(&conv.dfa)?.state_count();
    t.expect(min == 5, format!("minimized {min}"));
    Ok(t.finish())
}

fn brute_lambda(m: &Machine, len: usize) -> Result<usize> {
    let mut best = 0;
    for w in words_up_to(m.alphabet(), len) {
        if let Some(l) = lambda_of_word(m, &w)? {
            best = best.max(l);
        }
    }
    Ok(best)
}

fn is_empty_diff(a: &Machine, b: &Machine) -> Result<bool> {
    Ok(live_state_count(&product(a, b, ProductMode::Diff)?) == 0)
}

/// Everything the oracle-agreement check asserts about one machine; returns
/// the failed properties.
pub fn oracle_failures(m: &Machine) -> Result<Vec<String>> {
    let mut failures = Vec::new();
    let one_way = shepherdson(m)?;
    let cs = crossing_sequence_nfa(m)?;
    for w in words_up_to(m.alphabet(), 7) {
        let direct = run(m, &w, false)?.verdict.is_accepted();
        if accepts(&one_way, &w)? != direct || accepts(&cs, &w)? != direct {
            failures.push(format!("conversions disagree on {:?}", m.alphabet().render(&w)));
            break;
        }
    }
    let lambda = lambda_of_machine(m)?;
    if let Lambda::Finite(k) = lambda {
        let brute = brute_lambda(m, 8)?;
        if brute != k {
            failures.push(format!("lambda {k} but words up to 8 give {brute}"));
        }
        if !lambda_equals(m, k)? {
            failures.push(format!("lambda_equals(M, {k}) is false"));
        }
    }
    let t: Vec<Machine> = (0..=2)
        .map(|k| bounded_language(m, k).map(|r| r.dfa))
        .collect::<Result<_>>()?;
    if !is_empty_diff(&t[0], &t[1])? || !is_empty_diff(&t[1], &t[2])? || !is_empty_diff(&t[2], &one_way)? {
        failures.push("T_k chain is not monotone".into());
    }
    Ok(failures)
}

fn oracle_agreement(samples: usize, seed: u64) -> Result<(Status, String)> {
    let alphabet = Alphabet::from_chars("01")?;
    let mut r = rng(seed);
    let machines: Vec<Machine> = (0..samples)
        .map(|i| random_2dfa(&mut r, 1 + i % 3, &alphabet, 0.2))
        .collect();
    let results: Vec<(usize, Vec<String>, bool)> = machines
        .par_iter()
        .enumerate()
        .map(|(i, m)| Ok((i, oracle_failures(m)?, lambda_of_machine(m)?.is_finite())))
        .collect::<Result<_>>()?;
    let finite = results.iter().filter(|r| r.2).count();
    let bad: Vec<String> = results
        .iter()
        .filter(|r| !r.1.is_empty())
        .map(|(i, f, _)| {
            log::info!("machine {i}:\n{}", serialize_machine(&machines[*i]));
            format!("#{i}: {}", f.join(", "))
        })
        .collect();
    let summary = format!("{samples} machines ({finite} with finite lambda), seed {seed:#x}");
    if bad.is_empty() {
        Ok((Status::Pass, summary))
    } else {
        let shown: Vec<&String> = bad.iter().take(3).collect();
        Ok((Status::Fail, format!("{summary}; {} failing: {shown:?}", bad.len())))
    }
}

/// `δ(q0,a) = (q0,+1)`, `δ(q0,b) = (q1,-1)`, `δ(q1,a) = (q2,+1)`,
/// `δ(q2,b) = (q0,+1)`, `F = {q0}`.
pub fn back_stepper() -> Machine {
    let mut m = Machine::new(Alphabet::from_chars("ab").expect("valid"), 3, 0).expect("valid");
    for (q, s, t, d) in [(0, "a", 0, Dir::Right), (0, "b", 1, Dir::Left), (1, "a", 2, Dir::Right), (2, "b", 0, Dir::Right)] {
        m.add(q, s, t, d).expect("valid");
    }
    m.set_accepting(0, true).expect("valid");
    m
}

fn infinite_detection() -> Result<(Status, String)> {
    let mut t = Tally::default();
    let m = back_stepper();
    let lambda = lambda_of_machine(&m)?;
    t.expect(lambda == Lambda::Infinite, format!("lambda {lambda}"));
    let counts: Vec<Option<usize>> = (1..=4)
        .map(|k| lambda_of_word(&m, &m.alphabet().parse_chars(&"ab".repeat(k))?))
        .collect::<Result<_>>()?;
    t.expect(
        counts == [Some(1), Some(2), Some(3), Some(4)],
        format!("lambda((ab)^m) for m=1..4: {counts:?}"),
    );
    Ok(t.finish())
}

fn dollar_star_spectrum(budget: &EnumerationBudget) -> Result<(Status, String)> {
    let l = build(&Family::DollarStar {
        inner: Box::new(Family::Unary { n: 2 }),
    })?;
    let r = compute_spectrum(&l, budget)?;
    let constant = r
        .pairs
        .iter()
        .filter(|p| p.1.is_finite())
        .all(|p| p.0 == r.sigma_0);
    let detail = format!("{r}, {} candidates", r.candidates);
    Ok(if !constant || r.sigma_0 != 3 {
        (Status::Fail, detail)
    } else if !r.exhaustive {
        (Status::Skip, format!("{detail}; constant over the covered region"))
    } else {
        (Status::Pass, detail)
    })
}

pub const AWBWA_GOLDEN: &str = include_str!("../data/awbwa_2dfa.golden");

/// Construction constants and per-instance `(n, states, lambda)` rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AwbwaGolden {
    pub c: usize,
    pub c_prime: usize,
    pub rows: Vec<(usize, usize, usize)>,
}

pub fn awbwa_golden() -> Result<AwbwaGolden> {
    let bad = |line: &str| Error::InvalidParams(format!("bad golden line {line:?}"));
    let (mut c, mut c2, mut rows) = (None, None, Vec::new());
    for line in AWBWA_GOLDEN.lines().map(str::trim) {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some((key, value)) = line.split_once(" = ") {
            let v: usize = value.parse().map_err(|_| bad(line))?;
            match key {
                "C" => c = Some(v),
                "C'" => c2 = Some(v),
                _ => return Err(bad(line)),
            }
            continue;
        }
        let fields: Vec<usize> = line
            .split_whitespace()
            .map(|kv| kv.split_once('=').and_then(|(_, v)| v.parse().ok()).ok_or_else(|| bad(line)))
            .collect::<Result<_>>()?;
        match fields[..] {
            [n, s, l] => rows.push((n, s, l)),
            _ => return Err(bad(line)),
        }
    }
    Ok(AwbwaGolden {
        c: c.ok_or_else(|| bad("C"))?,
        c_prime: c2.ok_or_else(|| bad("C'"))?,
        rows,
    })
}

fn awbwa_two_way() -> Result<(Status, String)> {
    let mut t = Tally::default();
    let AwbwaGolden { c, c_prime: c2, rows } = awbwa_golden()?;
    for (n, golden_states, golden_lambda) in rows {
        let f = Family::Awbwa2dfa { n };
        let m = build(&f)?;
        let accepted = accepts_up_to(&m, 2 * n + 5)?;
        let mut exact = true;
        for w in words_up_to(m.alphabet(), 2 * n + 5) {
            exact &= accepted.contains(&w) == membership(&f, &w)?;
        }
        t.expect(exact, format!("n={n}: language exact up to length {}", 2 * n + 5));
        let states = m.state_count();
        t.expect(
            states == golden_states && states <= c * n,
            format!("n={n}: {states} states <= {c}n"),
        );
        let mut worst = 0;
        for w in &accepted {
            worst = worst.max(lambda_of_word(&m, w)?.unwrap_or(0));
        }
        t.expect(
            worst == golden_lambda && worst <= c2 * n * n,
            format!("n={n}: max lambda(w) {worst} <= {c2}n^2"),
        );
    }
    Ok(t.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_parses() {
        let g = awbwa_golden().unwrap();
        assert_eq!((g.c, g.c_prime), (13, 5));
        assert_eq!(g.rows, vec![(1, 13, 5), (2, 18, 10)]);
    }

    #[test]
    fn fast_checks_pass() {
        let options = CheckOptions::default();
        for id in [1, 4, 6, 8] {
            let r = run_check(id, &options).unwrap();
            assert_eq!(r.status, Status::Pass, "{r}");
        }
        assert!(run_check(11, &options).is_err());
    }
}
