use hypermyerson_core::game::{
    random_superadditive_game, random_table_game, ExhaustiveLimits, PairProperty,
};
use hypermyerson_core::rational::{from_int, ratio};
use hypermyerson_core::{Coalition, TUGame};

fn generated_convex(seed: u64) -> TUGame {
    let n = 2 + (seed % 5) as usize;
    let eps = if seed.is_multiple_of(2) {
        ratio(1, 7)
    } else {
        from_int(0)
    };
    TUGame::random_supermodular(n, 1 + (seed % 4) as usize, seed, eps).unwrap()
}

#[test]
fn brute_force_convexity_matches_checker_on_small_games() {
    // Pair-by-pair recomputation straight from worth().
    for seed in 0..40 {
        for g in [generated_convex(seed), random_table_game(3, seed).unwrap()] {
            let n = g.players();
            let mut convex = true;
            for s in 0..1u64 << n {
                for t in 0..1u64 << n {
                    let w = |m: u64| g.worth(Coalition::from_mask(m)).unwrap();
                    if w(s | t) + w(s & t) < w(s) + w(t) {
                        convex = false;
                    }
                }
            }
            assert_eq!(g.is_convex(false).unwrap(), convex);
        }
    }
}

#[test]
fn unanimity_and_square_games_are_convex() {
    for n in 1..=6 {
        assert!(TUGame::cardinality_power(n, 2)
            .unwrap()
            .is_convex(false)
            .unwrap());
        for carrier in 1..1u64 << n {
            let g = TUGame::unanimity(n, Coalition::from_mask(carrier)).unwrap();
            assert!(g.is_convex(false).unwrap(), "n={n} carrier={carrier:b}");
        }
    }
}

#[test]
fn conic_combinations_stay_convex() {
    for seed in 0..30 {
        let n = 2 + (seed % 5) as usize;
        let v = TUGame::random_supermodular(n, 3, seed, from_int(0)).unwrap();
        let w = TUGame::random_supermodular(n, 2, seed + 1000, ratio(1, 3)).unwrap();
        let a = ratio((seed % 5) as i64, 3);
        let b = ratio(7, 1 + (seed % 4) as i64);
        assert!(v.combine(&a, &w, &b).unwrap().is_convex(false).unwrap());
    }
}

#[test]
fn convex_implies_superadditive() {
    for seed in 0..200 {
        let g = generated_convex(seed);
        assert!(g.is_convex(false).unwrap());
        assert!(g.is_superadditive(false).unwrap(), "seed {seed}");
    }
}

#[test]
fn strict_generator_is_strictly_convex() {
    for seed in 0..30 {
        let g = TUGame::random_supermodular(5, 3, seed, ratio(1, 100)).unwrap();
        assert!(g.is_convex(true).unwrap(), "seed {seed}");
    }
}

#[test]
fn witnesses_reverify() {
    let limits = ExhaustiveLimits::default();
    let mut found = 0;
    for seed in 0..100 {
        let g = random_table_game(4, seed).unwrap();
        for strict in [false, true] {
            if let Some(w) = g.convexity_violation(strict, limits).unwrap() {
                assert_eq!(w.property, PairProperty::Convexity);
                assert!(w.reverify(&g));
                found += 1;
            }
            if let Some(w) = g.superadditivity_violation(strict, limits).unwrap() {
                assert!(w.reverify(&g));
                found += 1;
            }
        }
        let sa = random_superadditive_game(4, seed).unwrap();
        assert!(sa
            .superadditivity_violation(false, limits)
            .unwrap()
            .is_none());
    }
    assert!(found > 100);
}
