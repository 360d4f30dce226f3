//! Verification harness for the allocation-rule axioms and the
//! bridge/safety equivalence, with re-checkable counterexamples.
//!
//! Nothing here assumes the properties hold. Each check evaluates the
//! defining (in)equality exactly and records every violation as a
//! [`Witness`], in canonical order: edge, then player, then coalition.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::coalition::{Coalition, Partition, PlayerId};
use crate::error::{Error, Result};
use crate::game::{ExhaustiveLimits, TUGame};
use crate::hypergraph::{ConnectivitySemantics, DirectedHyperedge, DirectedHypergraph, EdgeId};
use crate::rational::Rational;
use crate::restriction::RestrictedGame;
use crate::values::{myerson, Allocation};

/// A directed hypergraph game together with the connectivity reading.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub graph: DirectedHypergraph,
    pub game: TUGame,
    pub semantics: ConnectivitySemantics,
}

impl Instance {
    pub fn new(
        graph: DirectedHypergraph,
        game: TUGame,
        semantics: ConnectivitySemantics,
    ) -> Result<Self> {
        if graph.players() != game.players() {
            return Err(Error::PlayerCountMismatch {
                left: graph.players(),
                right: game.players(),
            });
        }
        Ok(Self {
            graph,
            game,
            semantics,
        })
    }

    pub fn with_semantics(&self, semantics: ConnectivitySemantics) -> Self {
        Self {
            semantics,
            ..self.clone()
        }
    }

    pub fn players(&self) -> usize {
        self.graph.players()
    }

    pub fn myerson(&self) -> Result<Allocation> {
        myerson(&self.graph, &self.game, self.semantics)
    }

    pub fn myerson_without(&self, edge: EdgeId) -> Result<Allocation> {
        myerson(&self.graph.without_edge(edge)?, &self.game, self.semantics)
    }

    /// `v^E(N)` under the instance's semantics.
    pub fn restricted_grand_worth(&self, graph: &DirectedHypergraph) -> Result<Rational> {
        RestrictedGame::new(&self.game, graph, self.semantics)?
            .restricted_worth(Coalition::grand(self.players()))
    }

    pub fn fingerprint(&self) -> String {
        crate::io::fingerprint(self)
    }
}

/// Which property a report covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Property {
    ComponentEfficiency,
    Fairness,
    Decomposition,
    Stability,
    Safety,
    BridgeSafetyTheorem,
    ReportedEfficiency,
}

impl Property {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::ComponentEfficiency => "component_efficiency",
            Self::Fairness => "fairness",
            Self::Decomposition => "decomposition",
            Self::Stability => "stability",
            Self::Safety => "safety",
            Self::BridgeSafetyTheorem => "bridge_safety_theorem",
            Self::ReportedEfficiency => "reported_grand_coalition_efficiency",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Holds,
    Fails,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Holds => "holds",
            Self::Fails => "fails",
        }
    }
}

/// A concrete counterexample, with both sides of the violated relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// `Σ_{i∈T} μ_i ≠ v(T)` for a component `T`.
    ComponentEfficiency {
        component: Coalition,
        payoff_sum: Rational,
        worth: Rational,
    },
    /// Deleting `edge` moves a tail player's and a head player's payoff by
    /// different amounts.
    Fairness {
        edge: EdgeId,
        tail_player: PlayerId,
        head_player: PlayerId,
        tail_delta: Rational,
        head_delta: Rational,
    },
    /// `v^E(S) ≠ Σ_i v^E(S ∩ T_i)`.
    Decomposition {
        coalition: Coalition,
        lhs: Rational,
        rhs: Rational,
    },
    /// `player` is strictly better off once `edge` is deleted.
    PayoffGain {
        edge: EdgeId,
        player: PlayerId,
        with_edge: Rational,
        without_edge: Rational,
    },
    /// `edge` is safe but deleting it leaves the components unchanged.
    SafeNonBridge { edge: EdgeId, components: Partition },
    /// A reported allocation whose total is not `v^E(N)`.
    ReportedEfficiency {
        label: String,
        deleted_edge: Option<EdgeId>,
        reported_total: Rational,
        grand_worth: Rational,
    },
}

impl Witness {
    /// Recomputes the witness from the instance and confirms it still
    /// describes a genuine violation with the recorded exact values.
    pub fn reverify(&self, instance: &Instance) -> Result<bool> {
        Ok(match self {
            Self::ComponentEfficiency {
                component,
                payoff_sum,
                worth,
            } => {
                let mu = instance.myerson()?;
                let is_component = instance
                    .graph
                    .strong_components(instance.semantics)
                    .blocks()
                    .contains(component);
                is_component
                    && mu.total_over(*component) == *payoff_sum
                    && instance.game.worth(*component)? == *worth
                    && payoff_sum != worth
            }
            Self::Fairness {
                edge,
                tail_player,
                head_player,
                tail_delta,
                head_delta,
            } => {
                let e = instance.graph.edge(*edge)?;
                let with = instance.myerson()?;
                let without = instance.myerson_without(*edge)?;
                e.tail().contains(*tail_player)
                    && e.head().contains(*head_player)
                    && &with[*tail_player] - &without[*tail_player] == *tail_delta
                    && &with[*head_player] - &without[*head_player] == *head_delta
                    && tail_delta != head_delta
            }
            Self::Decomposition {
                coalition,
                lhs,
                rhs,
            } => {
                let r = RestrictedGame::new(&instance.game, &instance.graph, instance.semantics)?;
                let mut sum = Rational::default();
                for &block in instance
                    .graph
                    .strong_components(instance.semantics)
                    .blocks()
                {
                    sum += r.restricted_worth(coalition.intersection(block))?;
                }
                r.restricted_worth(*coalition)? == *lhs && sum == *rhs && lhs != rhs
            }
            Self::PayoffGain {
                edge,
                player,
                with_edge,
                without_edge,
            } => {
                instance.myerson()?[*player] == *with_edge
                    && instance.myerson_without(*edge)?[*player] == *without_edge
                    && with_edge < without_edge
            }
            Self::SafeNonBridge { edge, components } => {
                let safe = check_safety(instance, *edge)?.verdict == Verdict::Holds;
                let before = instance.graph.strong_components(instance.semantics);
                safe && !instance.graph.is_bridge(*edge, instance.semantics)?
                    && before == *components
            }
            Self::ReportedEfficiency {
                deleted_edge,
                reported_total,
                grand_worth,
                ..
            } => {
                let graph = match deleted_edge {
                    Some(e) => instance.graph.without_edge(*e)?,
                    None => instance.graph.clone(),
                };
                instance.restricted_grand_worth(&graph)? == *grand_worth
                    && reported_total != grand_worth
            }
        })
    }
}

/// One row of the bridge/safety agreement table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeAgreement {
    pub edge: EdgeId,
    pub bridge: bool,
    pub safe: bool,
}

impl EdgeAgreement {
    pub fn agrees(&self) -> bool {
        self.bridge == self.safe
    }
}

/// Additional structured output carried by some reports.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum ReportDetails {
    #[default]
    None,
    EdgeTable(Vec<EdgeAgreement>),
    Allocations(Vec<(String, Allocation)>),
}

/// Outcome of one property check on one instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyReport {
    pub property: Property,
    pub semantics: ConnectivitySemantics,
    pub edge: Option<EdgeId>,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    pub fingerprint: String,
    pub details: ReportDetails,
}

impl PropertyReport {
    fn from_witnesses(
        instance: &Instance,
        property: Property,
        edge: Option<EdgeId>,
        witnesses: Vec<Witness>,
    ) -> Self {
        let verdict = if witnesses.is_empty() {
            Verdict::Holds
        } else {
            Verdict::Fails
        };
        Self {
            property,
            semantics: instance.semantics,
            edge,
            verdict,
            witnesses,
            fingerprint: instance.fingerprint(),
            details: ReportDetails::None,
        }
    }

    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    /// Re-verifies every witness against `instance`.
    pub fn witnesses_reverify(&self, instance: &Instance) -> Result<bool> {
        for w in &self.witnesses {
            if !w.reverify(instance)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Each component's members are paid exactly the component's worth.
pub fn check_component_efficiency(instance: &Instance) -> Result<PropertyReport> {
    let mu = instance.myerson()?;
    let mut witnesses = Vec::new();
    for &component in instance
        .graph
        .strong_components(instance.semantics)
        .blocks()
    {
        let payoff_sum = mu.total_over(component);
        let worth = instance.game.worth(component)?;
        if payoff_sum != worth {
            witnesses.push(Witness::ComponentEfficiency {
                component,
                payoff_sum,
                worth,
            });
        }
    }
    Ok(PropertyReport::from_witnesses(
        instance,
        Property::ComponentEfficiency,
        None,
        witnesses,
    ))
}

/// Deleting any edge shifts every tail player's and every head player's
/// payoff by the same amount.
pub fn check_fairness(instance: &Instance) -> Result<PropertyReport> {
    let with = instance.myerson()?;
    let ids: Vec<EdgeId> = instance.graph.edge_ids().collect();
    let per_edge: Vec<Vec<Witness>> = ids
        .par_iter()
        .map(|&id| -> Result<Vec<Witness>> {
            let e = instance.graph.edge(id)?;
            let without = instance.myerson_without(id)?;
            let mut found = Vec::new();
            for i in e.tail().players() {
                let tail_delta = &with[i] - &without[i];
                for j in e.head().players() {
                    let head_delta = &with[j] - &without[j];
                    if tail_delta != head_delta {
                        found.push(Witness::Fairness {
                            edge: id,
                            tail_player: i,
                            head_player: j,
                            tail_delta: tail_delta.clone(),
                            head_delta,
                        });
                    }
                }
            }
            Ok(found)
        })
        .collect::<Result<_>>()?;
    Ok(PropertyReport::from_witnesses(
        instance,
        Property::Fairness,
        None,
        per_edge.into_iter().flatten().collect(),
    ))
}

/// The component-slice identity `v^E(S) = Σ_i v^E(S ∩ T_i)`. Only the first
/// failing coalition is reported.
pub fn check_decomposition(instance: &Instance) -> Result<PropertyReport> {
    let r =
        RestrictedGame::new(&instance.game, &instance.graph, instance.semantics)?.build_cache()?;
    let witnesses = r
        .decomposition_check()?
        .map(|w| Witness::Decomposition {
            coalition: w.coalition,
            lhs: w.lhs,
            rhs: w.rhs,
        })
        .into_iter()
        .collect();
    Ok(PropertyReport::from_witnesses(
        instance,
        Property::Decomposition,
        None,
        witnesses,
    ))
}

fn payoff_gains(
    instance: &Instance,
    edge: EdgeId,
    players: Coalition,
    with: &Allocation,
) -> Result<Vec<Witness>> {
    let without = instance.myerson_without(edge)?;
    Ok(players
        .players()
        .filter(|&k| with[k] < without[k])
        .map(|k| Witness::PayoffGain {
            edge,
            player: k,
            with_edge: with[k].clone(),
            without_edge: without[k].clone(),
        })
        .collect())
}

/// No player on `edge` gains from deleting it.
pub fn check_stability(instance: &Instance, edge: EdgeId) -> Result<PropertyReport> {
    let members = instance.graph.edge(edge)?.support();
    let witnesses = payoff_gains(instance, edge, members, &instance.myerson()?)?;
    Ok(PropertyReport::from_witnesses(
        instance,
        Property::Stability,
        Some(edge),
        witnesses,
    ))
}

/// No player at all gains from deleting `edge`.
pub fn check_safety(instance: &Instance, edge: EdgeId) -> Result<PropertyReport> {
    instance.graph.edge(edge)?;
    let everyone = Coalition::grand(instance.players());
    let witnesses = payoff_gains(instance, edge, everyone, &instance.myerson()?)?;
    Ok(PropertyReport::from_witnesses(
        instance,
        Property::Safety,
        Some(edge),
        witnesses,
    ))
}

/// Compares "bridge" with "safe" edge by edge. Requires a convex game;
/// strict convexity is not required.
///
/// A bridge that is not safe contributes its [`Witness::PayoffGain`]s; a
/// safe non-bridge contributes a [`Witness::SafeNonBridge`].
pub fn verify_bridge_safety_theorem(instance: &Instance) -> Result<PropertyReport> {
    if let Some(w) = instance
        .game
        .convexity_violation(false, ExhaustiveLimits::default())?
    {
        return Err(Error::NotConvex(Box::new(w)));
    }
    let with = instance.myerson()?;
    let everyone = Coalition::grand(instance.players());
    let components = instance.graph.strong_components(instance.semantics);
    let ids: Vec<EdgeId> = instance.graph.edge_ids().collect();
    let rows: Vec<(EdgeAgreement, Vec<Witness>)> = ids
        .par_iter()
        .map(|&id| -> Result<_> {
            let bridge = instance.graph.is_bridge(id, instance.semantics)?;
            let gains = payoff_gains(instance, id, everyone, &with)?;
            let safe = gains.is_empty();
            let witnesses = match (bridge, safe) {
                (true, false) => gains,
                (false, true) => vec![Witness::SafeNonBridge {
                    edge: id,
                    components: components.clone(),
                }],
                _ => Vec::new(),
            };
            Ok((
                EdgeAgreement {
                    edge: id,
                    bridge,
                    safe,
                },
                witnesses,
            ))
        })
        .collect::<Result<_>>()?;
    let (table, witnesses): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
    let mut report = PropertyReport::from_witnesses(
        instance,
        Property::BridgeSafetyTheorem,
        None,
        witnesses.into_iter().flatten().collect(),
    );
    report.details = ReportDetails::EdgeTable(table);
    Ok(report)
}

/// An externally reported allocation for the instance, optionally after
/// deleting one edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportedAllocation {
    pub label: String,
    pub deleted_edge: Option<EdgeId>,
    pub payoffs: Allocation,
}

/// Checks each reported allocation against grand-coalition efficiency of
/// the restricted game, `Σ_i μ_i = v^E(N)`. The report also carries the
/// engine's own exact values for each configuration.
pub fn audit_reported_allocations(
    instance: &Instance,
    reported: &[ReportedAllocation],
) -> Result<PropertyReport> {
    let mut witnesses = Vec::new();
    let mut computed = vec![("E".to_string(), instance.myerson()?)];
    for entry in reported {
        let graph = match entry.deleted_edge {
            Some(e) => instance.graph.without_edge(e)?,
            None => instance.graph.clone(),
        };
        if entry.payoffs.players() != instance.players() {
            return Err(Error::PlayerCountMismatch {
                left: instance.players(),
                right: entry.payoffs.players(),
            });
        }
        let grand_worth = instance.restricted_grand_worth(&graph)?;
        let reported_total = entry.payoffs.total();
        if reported_total != grand_worth {
            witnesses.push(Witness::ReportedEfficiency {
                label: entry.label.clone(),
                deleted_edge: entry.deleted_edge,
                reported_total,
                grand_worth,
            });
        }
        if let Some(e) = entry.deleted_edge {
            let label = format!("E\\{e}");
            if !computed.iter().any(|(l, _)| *l == label) {
                computed.push((label, myerson(&graph, &instance.game, instance.semantics)?));
            }
        }
    }
    let mut report =
        PropertyReport::from_witnesses(instance, Property::ReportedEfficiency, None, witnesses);
    report.details = ReportDetails::Allocations(computed);
    Ok(report)
}

/// Seeded random hypergraph. Tail and head sizes are uniform in
/// `[1, tail_max]` and `[1, head_max]`; members are drawn uniformly.
pub fn random_hypergraph(
    players: usize,
    edge_count: usize,
    tail_max: usize,
    head_max: usize,
    seed: u64,
) -> Result<DirectedHypergraph> {
    if players == 0 && edge_count > 0 {
        return Err(Error::InvalidParameter(
            "edges need at least one player".into(),
        ));
    }
    for (name, max) in [("tail_max", tail_max), ("head_max", head_max)] {
        if edge_count > 0 && (max == 0 || max > players) {
            return Err(Error::InvalidParameter(format!(
                "{name} must lie in 1..={players}, got {max}"
            )));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pool: Vec<usize> = (1..=players).collect();
    let mut pick = |rng: &mut ChaCha8Rng, max: usize| {
        let size = rng.gen_range(1..=max);
        pool.shuffle(rng);
        pool[..size]
            .iter()
            .fold(Coalition::EMPTY, |acc, &p| acc.with(PlayerId::unchecked(p)))
    };
    let mut edges = Vec::with_capacity(edge_count);
    for _ in 0..edge_count {
        let tail = pick(&mut rng, tail_max);
        let head = pick(&mut rng, head_max);
        edges.push(DirectedHyperedge::new(tail, head)?);
    }
    DirectedHypergraph::new(players, edges)
}
