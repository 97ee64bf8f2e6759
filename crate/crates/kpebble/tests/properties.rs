use kpebble::consistency::{establish_strong_k_consistency, is_strongly_k_consistent, reimpose};
use kpebble::gen::{random_kai, rng};
use kpebble::kai::{apply_rule, check_kai_strategy, solve_kai, KaiInstance, KaiWinner};
use kpebble::{enumerate_partial_homs, is_partial_hom, solve_game, verify_strategy, Exec, PartialHom, SolveOptions, StrategyFamily, Structure, Winner};
use proptest::prelude::*;

const BUDGET: u64 = 1 << 22;

fn digraph(max: u32) -> impl Strategy<Value = Structure> {
    (1u32..=max).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), (n * n) as usize).prop_map(move |bits| {
            let arcs = (0..n * n).filter(|&i| bits[i as usize]).map(|i| (i / n, i % n));
            Structure::digraph(n, arcs)
        })
    })
}

fn colored(max: u32) -> impl Strategy<Value = Structure> {
    digraph(max).prop_flat_map(|s| {
        let n = s.universe as usize;
        proptest::collection::vec(0u32..2, n).prop_map(move |c| s.clone().with_colors(c))
    })
}

fn kai(max_nodes: u32) -> impl Strategy<Value = KaiInstance> {
    (2u32..=3, any::<u64>()).prop_flat_map(move |(k, seed)| {
        ((k + 1).max(3)..=max_nodes.max(k + 1)).prop_flat_map(move |n| {
            (0usize..=3).prop_map(move |t| random_kai(&mut rng(seed), k, n, t).expect("valid parameters"))
        })
    })
}

/// The family plus every legal k-map whose (k-1)-submaps all survived.
fn extend_one_step(a: &Structure, b: &Structure, k: usize, fam: &StrategyFamily) -> StrategyFamily {
    let mut out = fam.clone();
    for g in enumerate_partial_homs(a, b, k, BUDGET).unwrap() {
        if g.len() == k && g.pairs().iter().all(|&(x, _)| fam.contains(&g.without(x))) {
            out.insert(g);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn enumeration_is_legal_and_downward_closed(a in digraph(4), b in digraph(3), k in 0usize..=3) {
        let maps = enumerate_partial_homs(&a, &b, k, BUDGET).unwrap();
        let set: std::collections::HashSet<_> = maps.iter().cloned().collect();
        prop_assert_eq!(set.len(), maps.len());
        for h in &maps {
            prop_assert!(h.len() <= k);
            prop_assert!(is_partial_hom(&a, &b, h).unwrap());
            for g in h.subsets() {
                prop_assert!(set.contains(&g));
            }
        }
    }

    #[test]
    fn legality_is_monotone_under_restriction(a in digraph(4), b in digraph(4), pairs in proptest::collection::vec((0u32..4, 0u32..4), 0..5)) {
        let Ok(h) = PartialHom::from_pairs(pairs.into_iter().filter(|&(x, y)| x < a.universe && y < b.universe)) else {
            return Ok(());
        };
        if is_partial_hom(&a, &b, &h).unwrap() {
            for g in h.subsets() {
                prop_assert!(is_partial_hom(&a, &b, &g).unwrap());
            }
        }
    }

    #[test]
    fn legal_maps_respect_colour_classes(a in colored(3), b in colored(3)) {
        for h in enumerate_partial_homs(&a, &b, 3, BUDGET).unwrap() {
            for &(x, y) in h.pairs() {
                prop_assert_eq!(a.color(x), b.color(y));
            }
        }
    }

    #[test]
    fn establishing_agrees_with_the_game(a in digraph(4), b in digraph(4), k in 1usize..=3) {
        let cons = establish_strong_k_consistency(&a, &b, k, BUDGET, Exec::Sequential).unwrap();
        let game = solve_game(&a, &b, k, SolveOptions::default()).unwrap();
        prop_assert_eq!(cons.establishable, game.winner == Winner::Duplicator);
        if cons.establishable {
            let fam = extend_one_step(&a, &b, k, &cons.family);
            prop_assert!(verify_strategy(&a, &b, k, &fam, Exec::Sequential).unwrap().is_winning);
            let (a2, b2) = reimpose(&a, &b, &cons);
            prop_assert!(is_strongly_k_consistent(&a2, &b2, k, BUDGET).unwrap());
        }
    }

    #[test]
    fn kai_solutions_check_out(inst in kai(4)) {
        let sol = solve_kai(&inst, BUDGET).unwrap();
        match sol.winner {
            KaiWinner::Player2 => {
                let s = sol.strategy.as_ref().expect("Player 2 wins come with a strategy");
                prop_assert_eq!(check_kai_strategy(&inst, s), Ok(()));
                prop_assert!(sol.line.is_none());
            }
            KaiWinner::Player1 => prop_assert!(sol.strategy.is_none() && !inst.rules.is_empty()),
        }
        if inst.applicable(&inst.start).is_empty() {
            prop_assert_eq!(sol.winner, KaiWinner::Player2);
        }
    }

    #[test]
    fn rules_keep_positions_injective(inst in kai(4)) {
        for r in &inst.rules {
            for p in kpebble::lemmas::injective_positions(inst.k, inst.nodes) {
                if let Ok(q) = apply_rule(r, &p) {
                    let mut sorted = q.clone();
                    sorted.sort_unstable();
                    sorted.dedup();
                    prop_assert_eq!(sorted.len(), q.len());
                }
            }
        }
    }

    #[test]
    fn json_round_trips(inst in kai(4), s in colored(4), b in digraph(3), marks in proptest::collection::vec(any::<bool>(), 0..64)) {
        let back: KaiInstance = serde_json::from_str(&serde_json::to_string(&inst).unwrap()).unwrap();
        prop_assert_eq!(back, inst);
        let back: Structure = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        prop_assert_eq!(&back, &s);

        let plain = Structure { colors: None, ..s };
        let mut fam = StrategyFamily::new();
        for (i, h) in enumerate_partial_homs(&plain, &b, 2, BUDGET).unwrap().into_iter().enumerate() {
            if marks.get(i).copied().unwrap_or(false) {
                fam.insert_critical(h);
            } else {
                fam.insert(h);
            }
        }
        let text = serde_json::to_string(&fam).unwrap();
        let back: StrategyFamily = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.sorted_members(), fam.sorted_members());
        prop_assert_eq!(back.sorted_critical(), fam.sorted_critical());
        prop_assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }
}
