mod common;

use common::{player, worked_example};
use hypermyerson_core::analysis::random_hypergraph;
use hypermyerson_core::game::{random_superadditive_game, random_table_game};
use hypermyerson_core::rational::{from_int, ratio};
use hypermyerson_core::values::{myerson_monte_carlo, shapley_exact, shapley_permutation_oracle};
use hypermyerson_core::{
    myerson, Coalition, ConnectivitySemantics, DirectedHypergraph, RestrictedGame, TUGame,
};
use num_traits::Zero;

const BOTH: [ConnectivitySemantics; 2] =
    [ConnectivitySemantics::Strong, ConnectivitySemantics::Weak];

#[test]
fn exact_matches_permutation_oracle() {
    for n in 1..=6 {
        for seed in 0..50 {
            let g = random_table_game(n, seed).unwrap();
            assert_eq!(
                shapley_exact(&g).unwrap(),
                shapley_permutation_oracle(&g).unwrap()
            );
        }
    }
}

#[test]
fn efficiency_and_additivity() {
    for seed in 0..100 {
        let n = 1 + (seed % 6) as usize;
        let v = random_table_game(n, seed).unwrap();
        let w = random_table_game(n, seed + 500).unwrap();
        let sv = shapley_exact(&v).unwrap();
        assert_eq!(sv.total(), v.worth(Coalition::grand(n)).unwrap());
        let sw = shapley_exact(&w).unwrap();
        let sum = shapley_exact(&v.sum(&w).unwrap()).unwrap();
        for (k, p) in sum.payoffs().iter().enumerate() {
            assert_eq!(*p, &sv.payoffs()[k] + &sw.payoffs()[k]);
        }
    }
}

#[test]
fn symmetric_players_get_equal_payoffs() {
    // Worth depends on S only through |S ∩ {1,2}| and the rest, so players
    // 1 and 2 are interchangeable.
    for seed in 0..30 {
        let base = random_table_game(5, seed).unwrap();
        let n = 5;
        let g = TUGame::from_fn(n, |s| {
            let swapped = if s.mask() & 0b11 == 0b01 || s.mask() & 0b11 == 0b10 {
                Coalition::from_mask(s.mask() & !0b11 | 0b01)
            } else {
                s
            };
            base.worth(swapped).unwrap()
        })
        .unwrap();
        let sh = shapley_exact(&g).unwrap();
        assert_eq!(sh[player(1, n)], sh[player(2, n)]);
    }
}

#[test]
fn null_players_get_zero() {
    for seed in 0..30 {
        let base = random_table_game(4, seed).unwrap();
        // Player 5 never changes the worth.
        let g = TUGame::from_fn(5, |s| {
            base.worth(Coalition::from_mask(s.mask() & 0b1111)).unwrap()
        })
        .unwrap();
        assert!(shapley_exact(&g).unwrap()[player(5, 5)].is_zero());
    }
}

#[test]
fn myerson_is_efficient_on_the_restricted_grand_coalition() {
    for seed in 0..100u64 {
        let n = 2 + (seed % 6) as usize;
        let h = random_hypergraph(n, (seed % 6) as usize, 3.min(n), 2.min(n), seed).unwrap();
        let g = random_table_game(n, seed).unwrap();
        for sem in BOTH {
            let mu = myerson(&h, &g, sem).unwrap();
            let r = RestrictedGame::new(&g, &h, sem).unwrap();
            assert_eq!(mu.total(), r.restricted_worth(Coalition::grand(n)).unwrap());
            // Same value as Shapley of the explicit restricted table.
            assert_eq!(
                mu,
                shapley_permutation_oracle(&r.to_game().unwrap()).unwrap()
            );
        }
    }
}

#[test]
fn worked_example_myerson() {
    let h = worked_example();
    let v = TUGame::cardinality_power(5, 1).unwrap();
    let mu = myerson(&h, &v, ConnectivitySemantics::Strong).unwrap();
    // v(S) = |S| is additive, so every restriction of it is too.
    assert_eq!(
        mu.payoffs(),
        &[
            from_int(1),
            from_int(1),
            from_int(1),
            from_int(1),
            from_int(1)
        ]
    );
    let r = RestrictedGame::new(&v, &h, ConnectivitySemantics::Strong).unwrap();
    assert_eq!(
        mu,
        shapley_permutation_oracle(&r.to_game().unwrap()).unwrap()
    );

    // The quadratic game exposes the component structure.
    let sq = TUGame::cardinality_power(5, 2).unwrap();
    let r = RestrictedGame::new(&sq, &h, ConnectivitySemantics::Strong).unwrap();
    let oracle = shapley_permutation_oracle(&r.to_game().unwrap()).unwrap();
    let mu = myerson(&h, &sq, ConnectivitySemantics::Strong).unwrap();
    assert_eq!(mu, oracle);
    assert_eq!(mu.total(), from_int(11));
    // Frozen from the permutation oracle above.
    assert_eq!(
        mu.payoffs(),
        &[
            ratio(14, 5),
            ratio(14, 5),
            ratio(9, 5),
            ratio(9, 5),
            ratio(9, 5)
        ]
    );
}

#[test]
fn myerson_monte_carlo_converges_on_worked_example() {
    let h = worked_example();
    for game in [
        TUGame::cardinality_power(5, 1).unwrap(),
        TUGame::cardinality_power(5, 2).unwrap(),
    ] {
        let exact = myerson(&h, &game, ConnectivitySemantics::Strong).unwrap();
        let est =
            myerson_monte_carlo(&h, &game, ConnectivitySemantics::Strong, 200_000, 1).unwrap();
        for (e, x) in est.payoffs.iter().zip(exact.payoffs()) {
            let x = hypermyerson_core::rational::to_f64(x);
            assert!((e - x).abs() <= 0.02, "{e} vs {x}");
        }
    }
}

#[test]
fn restricted_worth_properties() {
    for seed in 0..60u64 {
        let n = 3 + (seed % 4) as usize;
        let h = random_hypergraph(n, 1 + (seed % 5) as usize, 3, 2, seed).unwrap();
        let g = random_superadditive_game(n, seed).unwrap();
        for sem in BOTH {
            let r = RestrictedGame::new(&g, &h, sem).unwrap();
            let cached = r.clone().build_cache().unwrap();
            for id in h.edge_ids() {
                let smaller = h.without_edge(id).unwrap();
                let r_del = RestrictedGame::new(&g, &smaller, sem)
                    .unwrap()
                    .build_cache()
                    .unwrap();
                for m in 0..1u64 << n {
                    let s = Coalition::from_mask(m);
                    assert!(
                        cached.restricted_worth(s).unwrap() >= r_del.restricted_worth(s).unwrap()
                    );
                }
            }
            for m in 0..1u64 << n {
                let s = Coalition::from_mask(m);
                let direct = r.restricted_worth(s).unwrap();
                assert_eq!(cached.restricted_worth(s).unwrap(), direct);
                if h.induced_subgraph(s).edge_count() == 0 {
                    let singles = s
                        .players()
                        .map(|p| g.worth(Coalition::singleton(p)).unwrap())
                        .fold(from_int(0), |a, b| a + b);
                    assert_eq!(direct, singles);
                }
            }
            assert!(cached.restricted_worth(Coalition::EMPTY).unwrap().is_zero());
        }
    }
}

#[test]
fn weak_decomposition_always_holds() {
    for seed in 0..100u64 {
        let n = 2 + (seed % 5) as usize;
        let h = random_hypergraph(n, (seed % 6) as usize, 2.min(n), 2.min(n), seed).unwrap();
        let g = random_table_game(n, seed).unwrap();
        let r = RestrictedGame::new(&g, &h, ConnectivitySemantics::Weak)
            .unwrap()
            .build_cache()
            .unwrap();
        assert_eq!(r.decomposition_check().unwrap(), None, "seed {seed}");
    }
    let empty = DirectedHypergraph::empty(4).unwrap();
    let g = random_table_game(4, 3).unwrap();
    let r = RestrictedGame::new(&g, &empty, ConnectivitySemantics::Strong).unwrap();
    assert_eq!(r.decomposition_check().unwrap(), None);
}

#[test]
fn worked_example_decomposition_verdicts() {
    let h = worked_example();
    let v = TUGame::cardinality_power(5, 1).unwrap();
    let r = RestrictedGame::new(&v, &h, ConnectivitySemantics::Strong)
        .unwrap()
        .build_cache()
        .unwrap();
    // Additive worth makes both sides |S|.
    assert_eq!(r.decomposition_check().unwrap(), None);
}
