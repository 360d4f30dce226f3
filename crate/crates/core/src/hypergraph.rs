//! Directed hypergraphs and their connectivity.
//!
//! A path runs through a sequence of hyperedges where every intermediate
//! player sits in the head of one edge and the tail of the next. Such a
//! path uses one tail player and one head player per edge, so reachability
//! is reachability in the digraph with arcs `tail × head` for every edge.
//! All connectivity below is computed on that arc expansion, with players
//! packed into `u64` bitmasks.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::coalition::{Coalition, Partition, PlayerId, MAX_PLAYERS};
use crate::error::{Error, Result};

/// How two players count as connected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConnectivitySemantics {
    /// Mutual reachability along directed paths.
    #[default]
    Strong,
    /// Direction ignored: every edge links all of `tail ∪ head`.
    Weak,
}

impl ConnectivitySemantics {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Strong => "strong",
            Self::Weak => "weak",
        }
    }
}

impl fmt::Display for ConnectivitySemantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ConnectivitySemantics {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "strong" => Ok(Self::Strong),
            "weak" => Ok(Self::Weak),
            other => Err(format!(
                "unknown semantics {other:?} (expected strong or weak)"
            )),
        }
    }
}

/// Position of an edge in the hypergraph it was first built with.
///
/// Zero-based internally, shown one-based (`e1`, `e2`, ...).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(usize);

impl EdgeId {
    pub const fn new(position: usize) -> Self {
        Self(position)
    }

    /// From a one-based label such as the `k` in `e_k`.
    pub fn from_label(label: usize) -> Option<Self> {
        label.checked_sub(1).map(Self)
    }

    pub const fn position(self) -> usize {
        self.0
    }

    pub const fn label(self) -> usize {
        self.0 + 1
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0 + 1)
    }
}

/// A directed relation from the tail set to the head set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DirectedHyperedge {
    tail: Coalition,
    head: Coalition,
}

impl DirectedHyperedge {
    pub fn new(tail: Coalition, head: Coalition) -> Result<Self> {
        if tail.is_empty() {
            return Err(Error::EmptyEdgeSide { side: "tail" });
        }
        if head.is_empty() {
            return Err(Error::EmptyEdgeSide { side: "head" });
        }
        Ok(Self { tail, head })
    }

    pub fn from_players(tail: &[usize], head: &[usize], players: usize) -> Result<Self> {
        Self::new(
            Coalition::from_players(tail, players)?,
            Coalition::from_players(head, players)?,
        )
    }

    pub fn tail(&self) -> Coalition {
        self.tail
    }

    pub fn head(&self) -> Coalition {
        self.head
    }

    /// `tail ∪ head`.
    pub fn support(&self) -> Coalition {
        self.tail.union(self.head)
    }
}

/// Player count plus an indexed multiset of directed hyperedges.
///
/// Edges keep their original [`EdgeId`] through deletion and induction.
/// `ground` is the active player set; it is the full player set except
/// for induced subgraphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedHypergraph {
    players: usize,
    ground: Coalition,
    edges: Vec<(EdgeId, DirectedHyperedge)>,
}

impl DirectedHypergraph {
    pub fn new(players: usize, edges: Vec<DirectedHyperedge>) -> Result<Self> {
        if players > MAX_PLAYERS {
            return Err(Error::LimitExceeded {
                what: "hypergraph",
                players,
                limit: MAX_PLAYERS,
            });
        }
        let grand = Coalition::grand(players);
        for e in &edges {
            if !e.support().is_subset(grand) {
                let outside = e.support().difference(grand);
                return Err(Error::InvalidPlayer {
                    player: outside.first().map_or(0, PlayerId::index),
                    players,
                });
            }
        }
        Ok(Self {
            players,
            ground: grand,
            edges: edges
                .into_iter()
                .enumerate()
                .map(|(k, e)| (EdgeId(k), e))
                .collect(),
        })
    }

    /// No edges on `players` players.
    pub fn empty(players: usize) -> Result<Self> {
        Self::new(players, Vec::new())
    }

    pub fn players(&self) -> usize {
        self.players
    }

    pub fn ground(&self) -> Coalition {
        self.ground
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, &DirectedHyperedge)> + '_ {
        self.edges.iter().map(|(id, e)| (*id, e))
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.iter().map(|(id, _)| *id)
    }

    pub fn edge(&self, id: EdgeId) -> Result<&DirectedHyperedge> {
        self.edges
            .iter()
            .find(|(k, _)| *k == id)
            .map(|(_, e)| e)
            .ok_or(Error::InvalidEdge {
                edge: id.0,
                edges: self.edges.len(),
            })
    }

    pub fn player(&self, index: usize) -> Result<PlayerId> {
        PlayerId::new(index, self.players)
    }

    fn check_player(&self, p: PlayerId) -> Result<()> {
        PlayerId::new(p.index(), self.players).map(|_| ())
    }

    /// `{(a, b) : a ∈ tail(e), b ∈ head(e)}` over all edges, minus self-arcs.
    pub fn arc_expansion(&self) -> BTreeSet<(PlayerId, PlayerId)> {
        let mut arcs = BTreeSet::new();
        for (_, e) in self.edges() {
            for a in e.tail.players() {
                for b in e.head.players() {
                    if a != b {
                        arcs.insert((a, b));
                    }
                }
            }
        }
        arcs
    }

    pub(crate) fn connectivity(&self) -> Connectivity {
        Connectivity::new(self.players, self.edges().map(|(_, e)| *e))
    }

    /// Whether a directed path leads from `from` to `to` (always true when
    /// `from == to`).
    pub fn exists_path(&self, from: PlayerId, to: PlayerId) -> Result<bool> {
        self.check_player(from)?;
        self.check_player(to)?;
        // Every player reaches itself by convention.
        let reach = self.reachable_set(from)?;
        Ok(reach.contains(to))
    }

    /// Players reachable from `from`, including `from` itself.
    pub fn reachable_set(&self, from: PlayerId) -> Result<Coalition> {
        self.check_player(from)?;
        let adj = self.connectivity().out_arcs(self.ground);
        Ok(Coalition::from_mask(closure(
            &adj,
            Coalition::singleton(from).mask(),
            self.ground.mask(),
        )))
    }

    /// Players lying on every path from `from` to `to`.
    ///
    /// Returns [`Error::NoPath`] when no such path exists rather than the
    /// vacuous answer.
    pub fn critical_players(&self, from: PlayerId, to: PlayerId) -> Result<Coalition> {
        if !self.exists_path(from, to)? {
            return Err(Error::NoPath {
                from: from.index(),
                to: to.index(),
            });
        }
        let adj = self.connectivity().out_arcs(self.ground);
        let ends = Coalition::singleton(from).with(to);
        let mut critical = ends;
        for i in self.ground.difference(ends).players() {
            let allowed = self.ground.without(i).mask();
            let reach = closure(&adj, Coalition::singleton(from).mask(), allowed);
            if reach >> to.bit() & 1 == 0 {
                critical = critical.with(i);
            }
        }
        Ok(critical)
    }

    /// The partition of the ground set into components.
    pub fn strong_components(&self, semantics: ConnectivitySemantics) -> Partition {
        self.connectivity().components(self.ground, semantics)
    }

    /// Keeps the edges lying entirely inside `subset`; the result's ground
    /// set is `subset` (intersected with the current ground).
    pub fn induced_subgraph(&self, subset: Coalition) -> DirectedHypergraph {
        let ground = self.ground.intersection(subset);
        Self {
            players: self.players,
            ground,
            edges: self
                .edges
                .iter()
                .filter(|(_, e)| e.support().is_subset(ground))
                .cloned()
                .collect(),
        }
    }

    /// Components of the subgraph induced by `subset`.
    pub fn components_of_subset(
        &self,
        subset: Coalition,
        semantics: ConnectivitySemantics,
    ) -> Partition {
        self.induced_subgraph(subset).strong_components(semantics)
    }

    /// The same hypergraph with edge `id` deleted.
    pub fn without_edge(&self, id: EdgeId) -> Result<DirectedHypergraph> {
        self.edge(id)?;
        Ok(Self {
            players: self.players,
            ground: self.ground,
            edges: self
                .edges
                .iter()
                .filter(|(k, _)| *k != id)
                .cloned()
                .collect(),
        })
    }

    /// Whether deleting `id` strictly refines the component partition.
    pub fn is_bridge(&self, id: EdgeId, semantics: ConnectivitySemantics) -> Result<bool> {
        let before = self.strong_components(semantics);
        let after = self.without_edge(id)?.strong_components(semantics);
        debug_assert!(after.refines(&before));
        Ok(after.strictly_refines(&before))
    }
}

/// Reflexive closure of `start` under `adj`, never leaving `allowed`.
fn closure(adj: &[u64; MAX_PLAYERS], start: u64, allowed: u64) -> u64 {
    let mut seen = start & allowed;
    let mut frontier = seen;
    while frontier != 0 {
        let mut next = 0u64;
        let mut f = frontier;
        while f != 0 {
            next |= adj[f.trailing_zeros() as usize];
            f &= f - 1;
        }
        frontier = next & allowed & !seen;
        seen |= frontier;
    }
    seen
}

#[derive(Debug, Clone, Copy)]
struct EdgeMasks {
    support: u64,
    tail: u64,
    head: u64,
}

/// Precomputed edge masks for fast repeated component queries.
#[derive(Debug, Clone)]
pub(crate) struct Connectivity {
    edges: Vec<EdgeMasks>,
}

impl Connectivity {
    fn new(_players: usize, edges: impl Iterator<Item = DirectedHyperedge>) -> Self {
        Self {
            edges: edges
                .map(|e| EdgeMasks {
                    support: e.support().mask(),
                    tail: e.tail.mask(),
                    head: e.head.mask(),
                })
                .collect(),
        }
    }

    /// Out-arcs of the arc expansion restricted to edges inside `subset`.
    fn out_arcs(&self, subset: Coalition) -> [u64; MAX_PLAYERS] {
        let s = subset.mask();
        let mut adj = [0u64; MAX_PLAYERS];
        for e in self.edges.iter().filter(|e| e.support & !s == 0) {
            let mut t = e.tail;
            while t != 0 {
                let i = t.trailing_zeros() as usize;
                adj[i] |= e.head & !(1u64 << i);
                t &= t - 1;
            }
        }
        adj
    }

    fn in_arcs(&self, subset: Coalition) -> [u64; MAX_PLAYERS] {
        let s = subset.mask();
        let mut adj = [0u64; MAX_PLAYERS];
        for e in self.edges.iter().filter(|e| e.support & !s == 0) {
            let mut h = e.head;
            while h != 0 {
                let j = h.trailing_zeros() as usize;
                adj[j] |= e.tail & !(1u64 << j);
                h &= h - 1;
            }
        }
        adj
    }

    /// Calls `visit` with each component of the subgraph induced by
    /// `subset`, in order of lowest member.
    pub(crate) fn for_each_component(
        &self,
        subset: Coalition,
        semantics: ConnectivitySemantics,
        mut visit: impl FnMut(Coalition),
    ) {
        let s = subset.mask();
        let mut remaining = s;
        match semantics {
            ConnectivitySemantics::Strong => {
                let fwd = self.out_arcs(subset);
                let bwd = self.in_arcs(subset);
                while remaining != 0 {
                    let start = remaining & remaining.wrapping_neg();
                    let block = closure(&fwd, start, s) & closure(&bwd, start, s);
                    visit(Coalition::from_mask(block));
                    remaining &= !block;
                }
            }
            ConnectivitySemantics::Weak => {
                let inside: Vec<u64> = self
                    .edges
                    .iter()
                    .filter(|e| e.support & !s == 0)
                    .map(|e| e.support)
                    .collect();
                while remaining != 0 {
                    let mut block = remaining & remaining.wrapping_neg();
                    loop {
                        let grown = inside
                            .iter()
                            .filter(|&&m| m & block != 0)
                            .fold(block, |acc, m| acc | m);
                        if grown == block {
                            break;
                        }
                        block = grown;
                    }
                    visit(Coalition::from_mask(block));
                    remaining &= !block;
                }
            }
        }
    }

    pub(crate) fn components(
        &self,
        subset: Coalition,
        semantics: ConnectivitySemantics,
    ) -> Partition {
        let mut blocks = Vec::new();
        self.for_each_component(subset, semantics, |b| blocks.push(b));
        Partition::from_sorted_blocks(subset, blocks)
    }
}
