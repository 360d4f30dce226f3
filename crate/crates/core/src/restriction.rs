//! The hypergraph-restricted game `v^E(S) = Σ_{T ∈ S/E_S} v(T)`.

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::coalition::Coalition;
use crate::error::{Error, Result};
use crate::game::{TUGame, DENSE_LIMIT};
use crate::hypergraph::{Connectivity, ConnectivitySemantics, DirectedHypergraph};
use crate::rational::{Rational, ScaledTable};

/// A base game seen through the components of a directed hypergraph.
#[derive(Debug, Clone)]
pub struct RestrictedGame<'a> {
    base: &'a TUGame,
    graph: &'a DirectedHypergraph,
    semantics: ConnectivitySemantics,
    connectivity: Connectivity,
    cache: Option<ScaledTable>,
}

impl<'a> RestrictedGame<'a> {
    pub fn new(
        base: &'a TUGame,
        graph: &'a DirectedHypergraph,
        semantics: ConnectivitySemantics,
    ) -> Result<Self> {
        if base.players() != graph.players() {
            return Err(Error::PlayerCountMismatch {
                left: graph.players(),
                right: base.players(),
            });
        }
        Ok(Self {
            base,
            graph,
            semantics,
            connectivity: graph.connectivity(),
            cache: None,
        })
    }

    pub fn players(&self) -> usize {
        self.base.players()
    }

    pub fn base(&self) -> &TUGame {
        self.base
    }

    pub fn graph(&self) -> &DirectedHypergraph {
        self.graph
    }

    pub fn semantics(&self) -> ConnectivitySemantics {
        self.semantics
    }

    pub fn is_cached(&self) -> bool {
        self.cache.is_some()
    }

    /// Sum of base worths over the components of the subgraph induced by
    /// `coalition`. Reads the cache when present.
    pub fn restricted_worth(&self, coalition: Coalition) -> Result<Rational> {
        if !coalition.fits(self.players()) {
            return Err(Error::InvalidCoalition {
                mask: coalition.mask(),
                players: self.players(),
            });
        }
        Ok(match &self.cache {
            Some(cache) => cache.value(coalition.mask() as usize),
            None => self.direct_worth(coalition),
        })
    }

    fn direct_worth(&self, coalition: Coalition) -> Rational {
        let mut total = Rational::zero();
        self.connectivity
            .for_each_component(coalition, self.semantics, |block| {
                total += self.base.worth_unchecked(block);
            });
        total
    }

    /// Fills the dense cache for every coalition.
    pub fn build_cache(mut self) -> Result<Self> {
        let players = self.players();
        if players > DENSE_LIMIT {
            return Err(Error::LimitExceeded {
                what: "restricted game cache",
                players,
                limit: DENSE_LIMIT,
            });
        }
        let base = ScaledTable::new(&self.base.to_table()?);
        let numers = (0..1u64 << players)
            .into_par_iter()
            .map(|m| {
                let mut total = BigInt::zero();
                self.connectivity.for_each_component(
                    Coalition::from_mask(m),
                    self.semantics,
                    |block| total += &base.numers[block.mask() as usize],
                );
                total
            })
            .collect();
        self.cache = Some(ScaledTable {
            denom: base.denom,
            numers,
        });
        Ok(self)
    }

    /// The cached table, building it if needed.
    pub(crate) fn scaled_table(&self) -> Result<ScaledTable> {
        match &self.cache {
            Some(cache) => Ok(cache.clone()),
            None => Ok(self.clone().build_cache()?.cache.expect("cache just built")),
        }
    }

    /// `v^E` as an explicit table game.
    pub fn to_game(&self) -> Result<TUGame> {
        let table = self.scaled_table()?;
        TUGame::table(
            self.players(),
            (0..table.numers.len()).map(|i| table.value(i)).collect(),
        )
    }

    /// Checks `v^E(S) = Σ_i v^E(S ∩ T_i)` over the components `T_i` of the
    /// whole hypergraph, for every coalition in increasing mask order.
    /// Returns the first coalition where the identity breaks.
    pub fn decomposition_check(&self) -> Result<Option<DecompositionWitness>> {
        let components = self.graph.strong_components(self.semantics);
        for m in 0..1u64 << self.players() {
            let s = Coalition::from_mask(m);
            let lhs = self.restricted_worth(s)?;
            let mut rhs = Rational::zero();
            for &block in components.blocks() {
                rhs += self.restricted_worth(s.intersection(block))?;
            }
            if lhs != rhs {
                return Ok(Some(DecompositionWitness {
                    coalition: s,
                    lhs,
                    rhs,
                }));
            }
        }
        Ok(None)
    }
}

/// A coalition where `v^E(S)` differs from the sum over component slices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionWitness {
    pub coalition: Coalition,
    pub lhs: Rational,
    pub rhs: Rational,
}
