//! TU games, built-in game families, and exhaustive property checkers.

use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::coalition::{subsets, Coalition, PlayerId};
use crate::error::{Error, Result};
use crate::rational::{self, from_int, Rational, ScaledTable};

/// Largest player count for a dense worth table (2^16 entries).
pub const DENSE_LIMIT: usize = 16;

/// Exhaustive checker limits. Superadditivity scans 3^n pairs, convexity 4^n.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExhaustiveLimits {
    pub superadditive: usize,
    pub convex: usize,
}

impl Default for ExhaustiveLimits {
    fn default() -> Self {
        Self {
            superadditive: 12,
            convex: 10,
        }
    }
}

/// Parameters describing how a game's worth is produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GameFamily {
    /// Explicit worths indexed by coalition mask.
    Table(Vec<Rational>),
    /// `v(S) = |S|^k`.
    CardinalityPower { k: u32 },
    /// `v(S) = Σ_{i∈S} w_i`.
    Additive { weights: Vec<Rational> },
    /// `v(S) = 1` if `carrier ⊆ S`, else 0.
    Unanimity { carrier: Coalition },
    /// Seeded non-negative combination of unanimity games on carriers of
    /// size ≥ 2, plus `epsilon·|S|²`.
    RandomSupermodular {
        seed: u64,
        terms: usize,
        epsilon: Rational,
    },
}

/// A transferable-utility game `(N, v)` with `v(∅) = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TUGame {
    players: usize,
    family: GameFamily,
    // Unanimity dividends of the random supermodular family.
    dividends: Vec<(Rational, Coalition)>,
}

impl TUGame {
    fn check_players(players: usize, limit: usize, what: &'static str) -> Result<()> {
        if players > limit {
            return Err(Error::LimitExceeded {
                what,
                players,
                limit,
            });
        }
        Ok(())
    }

    fn plain(players: usize, family: GameFamily) -> Self {
        Self {
            players,
            family,
            dividends: Vec::new(),
        }
    }

    /// Dense game from `2^players` worths indexed by coalition mask.
    pub fn table(players: usize, values: Vec<Rational>) -> Result<Self> {
        Self::check_players(players, DENSE_LIMIT, "table game")?;
        let expected = 1usize << players;
        if values.len() != expected {
            return Err(Error::TableLength {
                expected,
                actual: values.len(),
            });
        }
        if !values[0].is_zero() {
            return Err(Error::NonZeroEmptyWorth(rational::to_fraction_string(
                &values[0],
            )));
        }
        Ok(Self::plain(players, GameFamily::Table(values)))
    }

    /// Dense game with worths from `worth(S)`; `worth(∅)` is forced to 0.
    pub fn from_fn(players: usize, mut worth: impl FnMut(Coalition) -> Rational) -> Result<Self> {
        Self::check_players(players, DENSE_LIMIT, "table game")?;
        let values = (0..1u64 << players)
            .map(|m| {
                if m == 0 {
                    Rational::zero()
                } else {
                    worth(Coalition::from_mask(m))
                }
            })
            .collect();
        Self::table(players, values)
    }

    pub fn cardinality_power(players: usize, k: u32) -> Result<Self> {
        Self::check_players(players, crate::coalition::MAX_PLAYERS, "game")?;
        if k == 0 {
            return Err(Error::InvalidParameter(
                "cardinality_power exponent must be at least 1".into(),
            ));
        }
        Ok(Self::plain(players, GameFamily::CardinalityPower { k }))
    }

    pub fn additive(weights: Vec<Rational>) -> Result<Self> {
        Self::check_players(weights.len(), crate::coalition::MAX_PLAYERS, "game")?;
        Ok(Self::plain(weights.len(), GameFamily::Additive { weights }))
    }

    pub fn unanimity(players: usize, carrier: Coalition) -> Result<Self> {
        Self::check_players(players, crate::coalition::MAX_PLAYERS, "game")?;
        if carrier.is_empty() {
            return Err(Error::InvalidParameter(
                "unanimity carrier must be non-empty".into(),
            ));
        }
        if !carrier.fits(players) {
            return Err(Error::InvalidCoalition {
                mask: carrier.mask(),
                players,
            });
        }
        Ok(Self::plain(players, GameFamily::Unanimity { carrier }))
    }

    /// `Σ_j c_j·u_{T_j} + epsilon·|S|²` with `c_j ≥ 0` and `|T_j| ≥ 2`, all
    /// drawn from a ChaCha8 stream seeded with `seed`. Convex, and strictly
    /// convex when `epsilon > 0`. With fewer than two players no carrier
    /// qualifies and only the `epsilon` term remains.
    pub fn random_supermodular(
        players: usize,
        terms: usize,
        seed: u64,
        epsilon: Rational,
    ) -> Result<Self> {
        Self::check_players(players, 12, "random_supermodular game")?;
        if !rational::is_non_negative(&epsilon) {
            return Err(Error::InvalidParameter(
                "random_supermodular epsilon must be non-negative".into(),
            ));
        }
        let mut dividends = Vec::with_capacity(terms);
        if players >= 2 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut order: Vec<usize> = (1..=players).collect();
            for _ in 0..terms {
                let size = rng.gen_range(2..=players);
                order.shuffle(&mut rng);
                let carrier = order[..size]
                    .iter()
                    .fold(Coalition::EMPTY, |acc, &p| acc.with(PlayerId::unchecked(p)));
                let numer = rng.gen_range(1..=12i64);
                let denom = rng.gen_range(1..=4i64);
                dividends.push((rational::ratio(numer, denom), carrier));
            }
        }
        Ok(Self {
            players,
            family: GameFamily::RandomSupermodular {
                seed,
                terms,
                epsilon,
            },
            dividends,
        })
    }

    pub fn players(&self) -> usize {
        self.players
    }

    pub fn family(&self) -> &GameFamily {
        &self.family
    }

    /// `v(S)`; rejects masks outside `2^players`.
    pub fn worth(&self, coalition: Coalition) -> Result<Rational> {
        if !coalition.fits(self.players) {
            return Err(Error::InvalidCoalition {
                mask: coalition.mask(),
                players: self.players,
            });
        }
        Ok(self.worth_unchecked(coalition))
    }

    pub(crate) fn worth_unchecked(&self, s: Coalition) -> Rational {
        match &self.family {
            GameFamily::Table(values) => values[s.mask() as usize].clone(),
            GameFamily::CardinalityPower { k } => from_int(s.len() as i64).pow(*k as i32),
            GameFamily::Additive { weights } => s
                .players()
                .fold(Rational::zero(), |acc, p| acc + &weights[p.bit()]),
            GameFamily::Unanimity { carrier } => {
                if carrier.is_subset(s) {
                    from_int(1)
                } else {
                    Rational::zero()
                }
            }
            GameFamily::RandomSupermodular { epsilon, .. } => {
                let size = from_int(s.len() as i64);
                let base = epsilon * &size * &size;
                self.dividends
                    .iter()
                    .filter(|(_, t)| t.is_subset(s))
                    .fold(base, |acc, (c, _)| acc + c)
            }
        }
    }

    /// All `2^players` worths indexed by mask.
    pub fn to_table(&self) -> Result<Vec<Rational>> {
        Self::check_players(self.players, DENSE_LIMIT, "dense worth table")?;
        if let GameFamily::Table(values) = &self.family {
            return Ok(values.clone());
        }
        Ok((0..1u64 << self.players)
            .map(|m| self.worth_unchecked(Coalition::from_mask(m)))
            .collect())
    }

    /// The same game as an explicit table.
    pub fn materialize(&self) -> Result<Self> {
        Self::table(self.players, self.to_table()?)
    }

    /// `a·self + b·other` as a table game.
    pub fn combine(&self, a: &Rational, other: &TUGame, b: &Rational) -> Result<Self> {
        if self.players != other.players {
            return Err(Error::PlayerCountMismatch {
                left: self.players,
                right: other.players,
            });
        }
        Self::from_fn(self.players, |s| {
            a * self.worth_unchecked(s) + b * other.worth_unchecked(s)
        })
    }

    /// `self + other` as a table game.
    pub fn sum(&self, other: &TUGame) -> Result<Self> {
        let one = from_int(1);
        self.combine(&one, other, &one)
    }

    /// First disjoint pair (S, T), both non-empty, in lexicographic mask
    /// order with `v(S ∪ T) < v(S) + v(T)` (or `≤` when strict).
    pub fn superadditivity_violation(
        &self,
        strict: bool,
        limits: ExhaustiveLimits,
    ) -> Result<Option<PairWitness>> {
        Self::check_players(self.players, limits.superadditive, "superadditivity check")?;
        let table = ScaledTable::new(&self.to_table()?);
        let hit = match small_numerators(&table) {
            Some(vals) => scan_superadditive(&vals, self.players, strict),
            None => scan_superadditive(&table.numers, self.players, strict),
        };
        Ok(hit
            .map(|(s, t)| PairWitness::evaluate(self, PairProperty::Superadditivity, strict, s, t)))
    }

    pub fn is_superadditive(&self, strict: bool) -> Result<bool> {
        Ok(self
            .superadditivity_violation(strict, ExhaustiveLimits::default())?
            .is_none())
    }

    /// First pair (S, T) in lexicographic mask order with
    /// `v(S ∪ T) + v(S ∩ T) < v(S) + v(T)`.
    ///
    /// In strict mode inclusion-comparable pairs are skipped (the inequality
    /// is an identity there) and `≤` counts as a violation for the rest.
    pub fn convexity_violation(
        &self,
        strict: bool,
        limits: ExhaustiveLimits,
    ) -> Result<Option<PairWitness>> {
        Self::check_players(self.players, limits.convex, "convexity check")?;
        let table = ScaledTable::new(&self.to_table()?);
        let hit = match small_numerators(&table) {
            Some(vals) => scan_convex(&vals, self.players, strict),
            None => scan_convex(&table.numers, self.players, strict),
        };
        Ok(hit.map(|(s, t)| PairWitness::evaluate(self, PairProperty::Convexity, strict, s, t)))
    }

    pub fn is_convex(&self, strict: bool) -> Result<bool> {
        Ok(self
            .convexity_violation(strict, ExhaustiveLimits::default())?
            .is_none())
    }
}

// i128 numerators leave headroom for sums of two i64 values.
fn small_numerators(table: &ScaledTable) -> Option<Vec<i128>> {
    table
        .numers
        .iter()
        .map(|n| n.to_i64().map(i128::from))
        .collect()
}

fn scan_superadditive<T>(vals: &[T], players: usize, strict: bool) -> Option<(u64, u64)>
where
    T: Ord,
    for<'a> &'a T: Add<&'a T, Output = T>,
{
    let grand = Coalition::grand(players);
    for s in 1..1u64 << players {
        let rest = grand.difference(Coalition::from_mask(s));
        for t in subsets(rest).skip(1) {
            let t = t.mask();
            let lhs = &vals[(s | t) as usize];
            let rhs = &vals[s as usize] + &vals[t as usize];
            if *lhs < rhs || (strict && *lhs == rhs) {
                return Some((s, t));
            }
        }
    }
    None
}

fn scan_convex<T>(vals: &[T], players: usize, strict: bool) -> Option<(u64, u64)>
where
    T: Ord,
    for<'a> &'a T: Add<&'a T, Output = T>,
{
    let size = 1u64 << players;
    for s in 0..size {
        for t in 0..size {
            let comparable = s & !t == 0 || t & !s == 0;
            if strict && comparable {
                continue;
            }
            let lhs = &vals[(s | t) as usize] + &vals[(s & t) as usize];
            let rhs = &vals[s as usize] + &vals[t as usize];
            if lhs < rhs || (strict && lhs == rhs) {
                return Some((s, t));
            }
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairProperty {
    Superadditivity,
    Convexity,
}

/// A coalition pair violating superadditivity or convexity.
///
/// `lhs` is `v(S ∪ T)` (plus `v(S ∩ T)` for convexity), `rhs` is
/// `v(S) + v(T)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairWitness {
    pub property: PairProperty,
    pub strict: bool,
    pub first: Coalition,
    pub second: Coalition,
    pub lhs: Rational,
    pub rhs: Rational,
}

impl PairWitness {
    fn evaluate(game: &TUGame, property: PairProperty, strict: bool, s: u64, t: u64) -> Self {
        let (first, second) = (Coalition::from_mask(s), Coalition::from_mask(t));
        let (lhs, rhs) = Self::sides(game, property, first, second);
        Self {
            property,
            strict,
            first,
            second,
            lhs,
            rhs,
        }
    }

    fn sides(
        game: &TUGame,
        property: PairProperty,
        s: Coalition,
        t: Coalition,
    ) -> (Rational, Rational) {
        let mut lhs = game.worth_unchecked(s.union(t));
        if property == PairProperty::Convexity {
            lhs += game.worth_unchecked(s.intersection(t));
        }
        let rhs = game.worth_unchecked(s) + game.worth_unchecked(t);
        (lhs, rhs)
    }

    /// Recomputes both sides from `game` and confirms the violation.
    pub fn reverify(&self, game: &TUGame) -> bool {
        let (s, t) = (self.first, self.second);
        if !s.fits(game.players()) || !t.fits(game.players()) {
            return false;
        }
        let shape_ok = match self.property {
            PairProperty::Superadditivity => !s.is_empty() && !t.is_empty() && s.is_disjoint(t),
            PairProperty::Convexity => !self.strict || !(s.is_subset(t) || t.is_subset(s)),
        };
        let (lhs, rhs) = Self::sides(game, self.property, s, t);
        shape_ok && lhs == self.lhs && rhs == self.rhs && (lhs < rhs || (self.strict && lhs == rhs))
    }
}

impl fmt::Display for PairWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.property {
            PairProperty::Superadditivity => "superadditivity",
            PairProperty::Convexity => "convexity",
        };
        let strict = if self.strict { "strict " } else { "" };
        write!(
            f,
            "{strict}{name} fails at S={}, T={}: {} vs {}",
            self.first,
            self.second,
            rational::to_fraction_string(&self.lhs),
            rational::to_fraction_string(&self.rhs)
        )
    }
}

/// Seeded dense game with worths `k/d`, `k ∈ [-10, 20]`, `d ∈ [1, 4]`.
pub fn random_table_game(players: usize, seed: u64) -> Result<TUGame> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    TUGame::from_fn(players, |_| {
        rational::ratio(rng.gen_range(-10..=20), rng.gen_range(1..=4))
    })
}

/// Seeded superadditive dense game.
///
/// Random non-negative worths are lifted to their superadditive cover
/// `v(S) = max(r(S), max_{A ⊂ S} v(A) + v(S ∖ A))`, built in increasing
/// mask order.
pub fn random_superadditive_game(players: usize, seed: u64) -> Result<TUGame> {
    if players > ExhaustiveLimits::default().superadditive {
        return Err(Error::LimitExceeded {
            what: "random superadditive game",
            players,
            limit: ExhaustiveLimits::default().superadditive,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let size = 1usize << players;
    let mut values: Vec<BigInt> = vec![BigInt::zero(); size];
    for s in 1..size as u64 {
        let mut best = BigInt::from(rng.gen_range(0..=6 * players as i64));
        let ground = Coalition::from_mask(s);
        for a in subsets(ground).skip(1) {
            let a = a.mask();
            if a == s {
                continue;
            }
            let split = &values[a as usize] + &values[(s & !a) as usize];
            if split > best {
                best = split;
            }
        }
        values[s as usize] = best;
    }
    TUGame::table(
        players,
        values.into_iter().map(Rational::from_integer).collect(),
    )
}
