use std::collections::HashSet;

use proptest::prelude::*;

use sparse_maker::blocking::build_blocking_dag;
use sparse_maker::board::{edge_count, Player};
use sparse_maker::breaker::{make_breaker, BreakerKind};
use sparse_maker::graph::{gen_cycle, gen_random_regular, DEFAULT_RETRY_CAP};
use sparse_maker::instance::Instance;
use sparse_maker::leveling::{level_greedy, level_lll, validate_leveling, DEFAULT_RESAMPLE_CAP};
use sparse_maker::maker::{default_round_cap, Event, Game};
use sparse_maker::transcript::{render, replay};

fn regular() -> impl Strategy<Value = (usize, usize, u64)> {
    (2usize..=4, 5usize..=30, any::<u64>()).prop_map(|(d, n, seed)| (n + (n * d) % 2, d, seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn leveling_and_dag_properties((n, d, seed) in regular()) {
        let g = gen_random_regular(n, d, seed, DEFAULT_RETRY_CAP).unwrap();
        for l in [level_greedy(&g), level_lll(&g, seed, DEFAULT_RESAMPLE_CAP).unwrap()] {
            prop_assert!(validate_leveling(&g, &l).is_empty());
            let dag = build_blocking_dag(&g, &l).unwrap();
            for v in 0..n {
                prop_assert!(dag.out_degree(v) <= d * d);
                for &u in dag.arcs(v) {
                    prop_assert!(l.level(u) < l.level(v));
                }
                // descendant sets are closed under taking descendants
                for w in dag.descendants(v).ones() {
                    prop_assert!(dag.descendants(w).is_subset(dag.descendants(v)));
                }
            }
        }
    }

    #[test]
    fn board_edge_count_matches_block_formula((n, d, seed) in regular(), s in 1u64..20) {
        let g = gen_random_regular(n, d, seed, DEFAULT_RETRY_CAP).unwrap();
        let l = level_greedy(&g);
        let inst = Instance::new(g, l, s).unwrap();
        let size = |v: usize| d as u128 * (s as u128).pow(2) * inst.dag().descendant_count(v) as u128 + s as u128;
        let expected: u128 = inst.graph().edges().iter().map(|&(a, b)| size(a) * size(b)).sum();
        let count = edge_count(inst.board(), inst.graph());
        prop_assert_eq!(count.exact, expected);
        prop_assert!(count.paper_bound >= expected.into());
    }

    #[test]
    fn games_keep_their_invariants(n in 3usize..9, level_seed in any::<u64>(), s in prop::sample::select(vec![8u64, 16]), seed in 0u64..1000, kind in prop::sample::select(BreakerKind::AUTOMATIC.to_vec())) {
        let g = gen_cycle(n).unwrap();
        let l = level_lll(&g, level_seed, DEFAULT_RESAMPLE_CAP).unwrap();
        let inst = Instance::new(g, l, s).unwrap();
        let cap = default_round_cap(&inst);
        let mut breaker = make_breaker(kind, seed).unwrap();
        let mut game = Game::new(&inst, true).unwrap();
        let outcome = game.play(breaker.as_mut(), cap).unwrap();
        for a in &outcome.audits {
            prop_assert!(a.invariant_ok && a.attribution_ok);
            prop_assert!(a.untouched >= s);
        }
        let events = game.events().unwrap();
        let mut maker = HashSet::new();
        let mut breaker_moves = 0;
        for e in events {
            match e {
                Event::Maker { edge, .. } => {
                    prop_assert!(maker.insert(*edge), "Maker claimed {} twice", edge);
                    prop_assert_eq!(game.position().owner(edge), Some(Player::Maker));
                }
                Event::Breaker { .. } => breaker_moves += 1,
            }
        }
        if outcome.maker_won() {
            // Maker answered every Breaker move
            prop_assert_eq!(maker.len(), breaker_moves);
            prop_assert_eq!(outcome.scheme_verified, Some(true));
            prop_assert_eq!(outcome.embedding_verified, Some(true));
        }
        let text = render("prop", &inst, cap, events, &outcome);
        prop_assert_eq!(replay(&text).unwrap().regenerated, text);
    }
}
