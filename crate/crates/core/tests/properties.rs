use proptest::prelude::*;

use twk_core::convert::convert_bounded_k;
use twk_core::random::{random_1dfa, random_1nfa, random_2dfa, rng};
use twk_core::regular::{find_difference, live_state_count, words_up_to};
use twk_core::sim::{accepts, run_nondet};
use twk_core::spectrum::Point;
use twk_core::*;

fn binary() -> Alphabet {
    Alphabet::from_chars("01").unwrap()
}

fn two_way() -> impl Strategy<Value = Machine> {
    (any::<u64>(), 1usize..=3, 0.0f64..0.4).prop_map(|(seed, n, p)| random_2dfa(&mut rng(seed), n, &binary(), p))
}

fn one_way() -> impl Strategy<Value = Machine> {
    (any::<u64>(), 1usize..=4).prop_map(|(seed, n)| random_1dfa(&mut rng(seed), n, &binary(), 0.2))
}

fn nfa() -> impl Strategy<Value = Machine> {
    (any::<u64>(), 1usize..=4).prop_map(|(seed, n)| random_1nfa(&mut rng(seed), n, &binary(), 0.3))
}

fn word() -> impl Strategy<Value = Word> {
    prop::collection::vec(0usize..2, 0..10)
}

fn same_language_up_to(a: &Machine, b: &Machine, len: usize) -> bool {
    words_up_to(a.alphabet(), len).all(|w| accepts(a, &w).unwrap() == accepts(b, &w).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn serialization_round_trips(m in two_way()) {
        let back = parse_machine(&serialize_machine(&m)).unwrap();
        prop_assert_eq!(back, m);
    }

    #[test]
    fn deterministic_and_nondeterministic_runs_agree(m in two_way(), w in word()) {
        let det = run(&m, &w, false).unwrap();
        let nondet = run_nondet(&m, &w).unwrap();
        prop_assert_eq!(det.verdict.is_accepted(), nondet.accepted);
        if det.verdict.is_accepted() {
            prop_assert_eq!(Some(det.left_moves), nondet.min_left_moves);
        }
    }

    #[test]
    fn trace_matches_counters(m in two_way(), w in word()) {
        let out = run(&m, &w, true).unwrap();
        let trace = out.trace.unwrap();
        prop_assert_eq!(trace.len(), out.steps + 1);
        let lefts = trace.windows(2).filter(|p| p[1].position < p[0].position).count();
        prop_assert_eq!(lefts, out.left_moves);
    }

    #[test]
    fn minimize_is_idempotent_and_preserves_language(m in one_way()) {
        let min = minimize(&m).unwrap();
        prop_assert!(same_language_up_to(&m, &min, 7));
        prop_assert_eq!(minimize(&min).unwrap().state_count(), min.state_count());
        prop_assert!(min.state_count() <= m.state_count().max(1));
    }

    #[test]
    fn equivalence_agrees_with_enumeration(a in one_way(), b in one_way()) {
        // distinguishable DFAs with at most 4 states differ on a word of length < 8
        let enumerated = same_language_up_to(&a, &b, 8);
        prop_assert_eq!(equivalent(&a, &b).unwrap(), enumerated);
        if let Some(w) = find_difference(&a, &b).unwrap() {
            prop_assert_ne!(accepts(&a, &w).unwrap(), accepts(&b, &w).unwrap());
        }
    }

    #[test]
    fn determinize_preserves_language(m in nfa()) {
        let d = determinize(&m).unwrap();
        prop_assert!(d.is_deterministic() && d.is_one_way());
        for w in words_up_to(m.alphabet(), 7) {
            prop_assert_eq!(accepts(&d, &w).unwrap(), run_nondet(&m, &w).unwrap().accepted);
        }
    }

    #[test]
    fn conversions_agree(m in two_way()) {
        let table = shepherdson(&m).unwrap();
        let cs = crossing_sequence_nfa(&m).unwrap();
        prop_assert!(table.is_one_way() && cs.is_one_way());
        prop_assert!(same_language_up_to(&m, &table, 7));
        prop_assert!(same_language_up_to(&m, &cs, 7));
        if let Lambda::Finite(k) = lambda_of_machine(&m).unwrap() {
            let bounded = convert_bounded_k(&m, k).unwrap().dfa;
            prop_assert!(equivalent(&bounded, &table).unwrap());
        }
    }

    #[test]
    fn left_moves_of_words_are_bounded_by_lambda(m in two_way(), w in word()) {
        if let (Lambda::Finite(k), Some(l)) = (lambda_of_machine(&m).unwrap(), lambda_of_word(&m, &w).unwrap()) {
            prop_assert!(l <= k);
        }
    }

    #[test]
    fn graph_weights_cover_accepted_runs(m in two_way()) {
        // every accepted word is a path from the initial node; a finite λ means
        // no reachable cycle carries weight
        let g = build_cs_graph(&m).unwrap();
        let table = shepherdson(&m).unwrap();
        prop_assert_eq!(g.is_empty(), live_state_count(&table) == 0);
        match lambda_of_machine(&m).unwrap() {
            Lambda::Finite(k) => {
                let heaviest = g.nodes.iter().map(|c| c.weight()).max().unwrap_or(0);
                prop_assert!(heaviest <= k);
            }
            Lambda::Infinite => prop_assert!(!g.is_empty()),
        }
    }

    #[test]
    fn bounded_languages_grow_with_k(m in two_way()) {
        let full = shepherdson(&m).unwrap();
        let mut previous: Option<Machine> = None;
        for k in 0..=3 {
            let t = bounded_language(&m, k).unwrap().dfa;
            let outside = product(&t, &full, ProductMode::Diff).unwrap();
            prop_assert_eq!(live_state_count(&outside), 0);
            if let Some(p) = previous {
                prop_assert_eq!(live_state_count(&product(&p, &t, ProductMode::Diff).unwrap()), 0);
            }
            previous = Some(t);
        }
    }

    #[test]
    fn frontier_is_an_antichain_dominating_its_input(
        raw in prop::collection::vec((1usize..8, prop::option::of(0usize..6)), 1..12)
    ) {
        let points: Vec<Point> = raw
            .into_iter()
            .map(|(s, l)| (s, l.map_or(Lambda::Infinite, Lambda::Finite)))
            .collect();
        let frontier = pareto_frontier(&points).unwrap();
        for (i, a) in frontier.iter().enumerate() {
            prop_assert!(points.contains(a));
            for b in &frontier[i + 1..] {
                prop_assert!(b.0 < a.0 && b.1 > a.1);
            }
        }
        for p in &points {
            prop_assert!(frontier.iter().any(|f| f.0 <= p.0 && f.1 <= p.1));
        }
    }
}

#[test]
fn random_machines_are_reproducible() {
    let a = random_2dfa(&mut rng(7), 3, &binary(), 0.2);
    let b = random_2dfa(&mut rng(7), 3, &binary(), 0.2);
    assert_eq!(a, b);
}
