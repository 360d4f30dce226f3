//! Shapley and Myerson values: exact, by permutation enumeration, and by
//! Monte Carlo sampling.

use std::ops::Index;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::coalition::{Coalition, PlayerId};
use crate::error::{Error, Result};
use crate::game::{TUGame, DENSE_LIMIT};
use crate::hypergraph::{ConnectivitySemantics, DirectedHypergraph};
use crate::rational::{self, factorial, Rational, ScaledTable};
use crate::restriction::RestrictedGame;

/// Largest player count for the `n!` permutation oracle.
pub const PERMUTATION_ORACLE_LIMIT: usize = 8;

/// Exact payoff per player, in ascending player order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Allocation {
    payoffs: Vec<Rational>,
}

impl Allocation {
    pub fn new(payoffs: Vec<Rational>) -> Self {
        Self { payoffs }
    }

    pub fn players(&self) -> usize {
        self.payoffs.len()
    }

    pub fn payoffs(&self) -> &[Rational] {
        &self.payoffs
    }

    pub fn payoff(&self, player: PlayerId) -> &Rational {
        &self.payoffs[player.bit()]
    }

    pub fn total(&self) -> Rational {
        self.payoffs.iter().sum()
    }

    /// Sum of payoffs over the members of `coalition`.
    pub fn total_over(&self, coalition: Coalition) -> Rational {
        coalition.players().map(|p| self.payoff(p)).sum()
    }

    pub fn into_payoffs(self) -> Vec<Rational> {
        self.payoffs
    }
}

impl Index<PlayerId> for Allocation {
    type Output = Rational;

    fn index(&self, player: PlayerId) -> &Rational {
        self.payoff(player)
    }
}

/// Shapley value by the subset formula
/// `Sh_i = Σ_{S ⊆ N∖{i}} s!(n-s-1)!/n! · (v(S ∪ {i}) − v(S))`.
pub fn shapley_exact(game: &TUGame) -> Result<Allocation> {
    if game.players() > DENSE_LIMIT {
        return Err(Error::LimitExceeded {
            what: "exact Shapley value",
            players: game.players(),
            limit: DENSE_LIMIT,
        });
    }
    let table = ScaledTable::new(&game.to_table()?);
    Ok(shapley_scaled(game.players(), &table))
}

/// Marginal contributions are summed per coalition size over the shared
/// integer denominator, then weighted once per size.
pub(crate) fn shapley_scaled(players: usize, table: &ScaledTable) -> Allocation {
    let n = players;
    if n == 0 {
        return Allocation::new(Vec::new());
    }
    let weights: Vec<BigInt> = (0..n)
        .map(|s| factorial(s) * factorial(n - s - 1))
        .collect();
    let scale = factorial(n) * &table.denom;
    let small = table.as_i64();
    let payoffs = (0..n)
        .into_par_iter()
        .map(|i| {
            let sums = match &small {
                Some(vals) => size_sums_small(vals, n, i),
                None => size_sums_big(&table.numers, n, i),
            };
            let numer: BigInt = sums.iter().zip(&weights).map(|(d, w)| d * w).sum();
            Rational::new(numer, scale.clone())
        })
        .collect();
    Allocation::new(payoffs)
}

fn size_sums_small(vals: &[i64], n: usize, player: usize) -> Vec<BigInt> {
    let bit = 1usize << player;
    let mut sums = vec![0i128; n];
    for m in (0..vals.len()).filter(|m| m & bit == 0) {
        sums[m.count_ones() as usize] += i128::from(vals[m | bit]) - i128::from(vals[m]);
    }
    sums.into_iter().map(BigInt::from).collect()
}

fn size_sums_big(vals: &[BigInt], n: usize, player: usize) -> Vec<BigInt> {
    let bit = 1usize << player;
    let mut sums = vec![BigInt::zero(); n];
    for m in (0..vals.len()).filter(|m| m & bit == 0) {
        let s = &mut sums[m.count_ones() as usize];
        *s += &vals[m | bit];
        *s -= &vals[m];
    }
    sums
}

/// Shapley value as the exact average marginal contribution over all `n!`
/// join orders.
pub fn shapley_permutation_oracle(game: &TUGame) -> Result<Allocation> {
    let n = game.players();
    if n > PERMUTATION_ORACLE_LIMIT {
        return Err(Error::LimitExceeded {
            what: "permutation oracle",
            players: n,
            limit: PERMUTATION_ORACLE_LIMIT,
        });
    }
    let table = game.to_table()?;
    let mut totals = vec![Rational::zero(); n];
    let mut order: Vec<usize> = (0..n).collect();
    let mut count = 0u64;
    loop {
        let mut prefix = 0usize;
        for &i in &order {
            let next = prefix | 1 << i;
            totals[i] += &table[next] - &table[prefix];
            prefix = next;
        }
        count += 1;
        if !next_permutation(&mut order) {
            break;
        }
    }
    let count = Rational::from_integer(BigInt::from(count));
    Ok(Allocation::new(
        totals.into_iter().map(|t| t / &count).collect(),
    ))
}

/// Advances to the next lexicographic permutation; false after the last.
fn next_permutation(order: &mut [usize]) -> bool {
    let Some(pivot) = (1..order.len()).rev().find(|&k| order[k - 1] < order[k]) else {
        return false;
    };
    let pivot = pivot - 1;
    let swap = (pivot + 1..order.len())
        .rev()
        .find(|&k| order[k] > order[pivot])
        .expect("a larger element follows the pivot");
    order.swap(pivot, swap);
    order[pivot + 1..].reverse();
    true
}

/// Myerson value: the Shapley value of the restricted game `v^E`.
pub fn myerson(
    graph: &DirectedHypergraph,
    game: &TUGame,
    semantics: ConnectivitySemantics,
) -> Result<Allocation> {
    let restricted = RestrictedGame::new(game, graph, semantics)?.build_cache()?;
    Ok(shapley_scaled(game.players(), &restricted.scaled_table()?))
}

/// Floating-point payoff estimates from permutation sampling.
#[derive(Debug, Clone, PartialEq)]
pub struct McEstimate {
    pub payoffs: Vec<f64>,
    pub samples: u64,
    pub seed: u64,
}

/// Monte Carlo Shapley estimate.
///
/// Each sample starts from the identity order `1..=n` and shuffles it with
/// `rand` 0.8's `SliceRandom::shuffle` (Fisher–Yates, last index first)
/// driven by `ChaCha8Rng::seed_from_u64(seed)`. One generator serves all
/// samples in sequence, so estimates are reproducible per `(seed, samples)`.
pub fn shapley_monte_carlo(game: &TUGame, samples: u64, seed: u64) -> Result<McEstimate> {
    let worth = float_worths(game)?;
    permutation_sampling(game.players(), samples, seed, worth)
}

/// Monte Carlo Myerson estimate; restricted worths are computed per prefix
/// coalition, so no `2^n` table is needed.
pub fn myerson_monte_carlo(
    graph: &DirectedHypergraph,
    game: &TUGame,
    semantics: ConnectivitySemantics,
    samples: u64,
    seed: u64,
) -> Result<McEstimate> {
    if game.players() != graph.players() {
        return Err(Error::PlayerCountMismatch {
            left: graph.players(),
            right: game.players(),
        });
    }
    let worth = float_worths(game)?;
    let connectivity = graph.connectivity();
    permutation_sampling(game.players(), samples, seed, |s| {
        let mut total = 0.0;
        connectivity.for_each_component(s, semantics, |block| total += worth(block));
        total
    })
}

fn float_worths(game: &TUGame) -> Result<impl Fn(Coalition) -> f64 + '_> {
    let table: Option<Vec<f64>> = if game.players() <= DENSE_LIMIT {
        Some(game.to_table()?.iter().map(rational::to_f64).collect())
    } else {
        None
    };
    Ok(move |s: Coalition| match &table {
        Some(t) => t[s.mask() as usize],
        None => rational::to_f64(&game.worth_unchecked(s)),
    })
}

fn permutation_sampling(
    players: usize,
    samples: u64,
    seed: u64,
    mut worth: impl FnMut(Coalition) -> f64,
) -> Result<McEstimate> {
    if samples == 0 {
        return Err(Error::ZeroSamples);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sums = vec![0.0f64; players];
    let mut order: Vec<usize> = Vec::with_capacity(players);
    for _ in 0..samples {
        order.clear();
        order.extend(1..=players);
        order.shuffle(&mut rng);
        let mut prefix = Coalition::EMPTY;
        let mut before = 0.0;
        for &p in &order {
            prefix = prefix.with(PlayerId::unchecked(p));
            let after = worth(prefix);
            sums[p - 1] += after - before;
            before = after;
        }
    }
    let count = samples.to_f64().unwrap_or(f64::MAX);
    Ok(McEstimate {
        payoffs: sums.into_iter().map(|s| s / count).collect(),
        samples,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::random_table_game;
    use crate::hypergraph::DirectedHyperedge;
    use crate::rational::{from_int, ratio};

    fn q(values: &[(i64, i64)]) -> Vec<Rational> {
        values.iter().map(|&(p, d)| ratio(p, d)).collect()
    }

    #[test]
    fn shapley_examples() {
        let weights = q(&[(3, 1), (-1, 2), (7, 4)]);
        let add = TUGame::additive(weights.clone()).unwrap();
        assert_eq!(shapley_exact(&add).unwrap().payoffs(), &weights[..]);

        let una = TUGame::unanimity(2, Coalition::grand(2)).unwrap();
        assert_eq!(
            shapley_exact(&una).unwrap().payoffs(),
            &q(&[(1, 2), (1, 2)])[..]
        );

        let sq = TUGame::cardinality_power(3, 2).unwrap();
        assert_eq!(
            shapley_exact(&sq).unwrap().payoffs(),
            &[from_int(3), from_int(3), from_int(3)]
        );
    }

    #[test]
    fn oracle_examples() {
        let single = TUGame::table(1, vec![from_int(0), ratio(5, 3)]).unwrap();
        assert_eq!(
            shapley_permutation_oracle(&single).unwrap().payoffs(),
            &[ratio(5, 3)]
        );
        let una = TUGame::unanimity(3, Coalition::grand(3)).unwrap();
        assert_eq!(
            shapley_permutation_oracle(&una).unwrap().payoffs(),
            &q(&[(1, 3), (1, 3), (1, 3)])[..]
        );
        let g = random_table_game(4, 99).unwrap();
        assert_eq!(
            shapley_permutation_oracle(&g).unwrap(),
            shapley_exact(&g).unwrap()
        );
        assert!(shapley_permutation_oracle(&TUGame::cardinality_power(9, 1).unwrap()).is_err());
    }

    #[test]
    fn big_numerators_take_the_bigint_path() {
        let huge = BigInt::from(i64::MAX) * 3;
        let g = TUGame::from_fn(3, |s| Rational::from_integer(&huge * s.len() * s.len())).unwrap();
        assert_eq!(
            shapley_exact(&g).unwrap(),
            shapley_permutation_oracle(&g).unwrap()
        );
    }

    #[test]
    fn permutations_are_enumerated_once() {
        let mut order = vec![0, 1, 2, 3];
        let mut count = 1;
        while next_permutation(&mut order) {
            count += 1;
        }
        assert_eq!(count, 24);
        assert_eq!(order, vec![3, 2, 1, 0]);
    }

    #[test]
    fn myerson_examples() {
        let g = random_table_game(3, 4).unwrap();
        let mut pairs = Vec::new();
        for a in 1..=3 {
            for b in 1..=3 {
                if a != b {
                    pairs.push(DirectedHyperedge::from_players(&[a], &[b], 3).unwrap());
                }
            }
        }
        let complete = DirectedHypergraph::new(3, pairs).unwrap();
        assert_eq!(
            myerson(&complete, &g, ConnectivitySemantics::Strong).unwrap(),
            shapley_exact(&g).unwrap()
        );

        let empty = DirectedHypergraph::empty(3).unwrap();
        let mu = myerson(&empty, &g, ConnectivitySemantics::Strong).unwrap();
        for p in Coalition::grand(3).players() {
            assert_eq!(mu[p], g.worth(Coalition::singleton(p)).unwrap());
        }
    }

    #[test]
    fn monte_carlo_basics() {
        let add = TUGame::additive(q(&[(1, 1), (5, 2), (-3, 1)])).unwrap();
        let est = shapley_monte_carlo(&add, 50, 9).unwrap();
        assert_eq!(est.payoffs, vec![1.0, 2.5, -3.0]);
        assert_eq!(shapley_monte_carlo(&add, 0, 9), Err(Error::ZeroSamples));

        let una = TUGame::unanimity(2, Coalition::grand(2)).unwrap();
        let est = shapley_monte_carlo(&una, 100_000, 1).unwrap();
        assert!(
            est.payoffs.iter().all(|p| (p - 0.5).abs() <= 0.01),
            "{est:?}"
        );
        assert_eq!(est, shapley_monte_carlo(&una, 100_000, 1).unwrap());
    }

    #[test]
    fn single_sample_is_one_marginal_vector() {
        let g = random_table_game(5, 12).unwrap();
        let est = shapley_monte_carlo(&g, 1, 77).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let mut order: Vec<usize> = (1..=5).collect();
        order.shuffle(&mut rng);
        let mut expected = vec![0.0; 5];
        let mut prefix = 0u64;
        for p in order {
            let next = prefix | 1 << (p - 1);
            expected[p - 1] = rational::to_f64(&g.worth(Coalition::from_mask(next)).unwrap())
                - rational::to_f64(&g.worth(Coalition::from_mask(prefix)).unwrap());
            prefix = next;
        }
        assert_eq!(est.payoffs, expected);
    }

    #[test]
    fn myerson_monte_carlo_on_empty_edges() {
        let weights = q(&[(2, 1), (1, 4), (9, 1), (0, 1)]);
        let add = TUGame::additive(weights).unwrap();
        let empty = DirectedHypergraph::empty(4).unwrap();
        let est = myerson_monte_carlo(&empty, &add, ConnectivitySemantics::Strong, 20, 3).unwrap();
        assert_eq!(est.payoffs, vec![2.0, 0.25, 9.0, 0.0]);
        assert_eq!(
            myerson_monte_carlo(&empty, &add, ConnectivitySemantics::Strong, 0, 3),
            Err(Error::ZeroSamples)
        );
    }
}
