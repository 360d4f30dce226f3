//! JSON instance documents and canonical report output.
//!
//! Instance document:
//!
//! ```json
//! {
//!   "players": 3,
//!   "edges": [{"tail": [1], "head": [2, 3]}],
//!   "game": {"type": "table", "values": [0, 1, 1, "5/2", 1, "5/2", 2, 6]},
//!   "semantics": "strong"
//! }
//! ```
//!
//! Table index `m` is the coalition whose members are the set bits of `m`
//! (bit `i - 1` for player `i`), so in the document above entry 3 is
//! `v({1,2})` and entry 5 is `v({1,3})`. Rationals are integers or `"p/q"`
//! strings on input and always `"p/q"` strings on output.
//!
//! All emitted JSON has sorted object keys and a trailing newline, so equal
//! inputs give byte-identical output.

use num_traits::Zero;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::analysis::{
    EdgeAgreement, Instance, PropertyReport, ReportDetails, ReportedAllocation, Witness,
};
use crate::coalition::{Coalition, Partition};
use crate::error::{Error, Result};
use crate::game::{GameFamily, TUGame};
use crate::hypergraph::{ConnectivitySemantics, DirectedHyperedge, DirectedHypergraph, EdgeId};
use crate::rational::{self, Rational};
use crate::values::{Allocation, McEstimate};

fn parse_err(path: &str, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_string(),
        message: message.into(),
    }
}

fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| parse_err("$", format!("malformed JSON: {e}")))
}

fn object<'a>(value: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    value
        .as_object()
        .ok_or_else(|| parse_err(path, "expected an object"))
}

fn reject_unknown(map: &Map<String, Value>, path: &str, known: &[&str]) -> Result<()> {
    match map.keys().find(|k| !known.contains(&k.as_str())) {
        Some(k) => Err(parse_err(&format!("{path}.{k}"), "unknown field")),
        None => Ok(()),
    }
}

fn field<'a>(map: &'a Map<String, Value>, path: &str, key: &str) -> Result<&'a Value> {
    map.get(key)
        .ok_or_else(|| parse_err(&format!("{path}.{key}"), "missing field"))
}

fn unsigned(value: &Value, path: &str) -> Result<u64> {
    value
        .as_u64()
        .ok_or_else(|| parse_err(path, "expected a non-negative integer"))
}

fn rational_value(value: &Value, path: &str) -> Result<Rational> {
    match value {
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(rational::from_int(i)),
            None => Err(parse_err(path, "expected an integer or a \"p/q\" string")),
        },
        Value::String(s) => rational::parse_fraction(s).map_err(|m| parse_err(path, m)),
        _ => Err(parse_err(path, "expected an integer or a \"p/q\" string")),
    }
}

fn rational_list(value: &Value, path: &str) -> Result<Vec<Rational>> {
    let items = value
        .as_array()
        .ok_or_else(|| parse_err(path, "expected an array"))?;
    items
        .iter()
        .enumerate()
        .map(|(k, v)| rational_value(v, &format!("{path}[{k}]")))
        .collect()
}

fn player_set(value: &Value, path: &str, players: usize) -> Result<Coalition> {
    let items = value
        .as_array()
        .ok_or_else(|| parse_err(path, "expected an array of player indices"))?;
    if items.is_empty() {
        return Err(parse_err(path, "player list must be non-empty"));
    }
    let mut set = Coalition::EMPTY;
    for (k, item) in items.iter().enumerate() {
        let p = unsigned(item, &format!("{path}[{k}]"))? as usize;
        let id = crate::coalition::PlayerId::new(p, players).map_err(|_| {
            parse_err(
                &format!("{path}[{k}]"),
                format!("player {p} is outside 1..={players}"),
            )
        })?;
        set = set.with(id);
    }
    Ok(set)
}

fn parse_semantics(value: &Value, path: &str) -> Result<ConnectivitySemantics> {
    value
        .as_str()
        .ok_or_else(|| parse_err(path, "expected \"strong\" or \"weak\""))?
        .parse()
        .map_err(|m: String| parse_err(path, m))
}

fn parse_game(value: &Value, path: &str, players: usize) -> Result<TUGame> {
    let map = object(value, path)?;
    let kind = field(map, path, "type")?
        .as_str()
        .ok_or_else(|| parse_err(&format!("{path}.type"), "expected a string"))?;
    let at = |key: &str| format!("{path}.{key}");
    let wrap = |e: Error, key: &str| match e {
        Error::Parse { .. } => e,
        other => parse_err(&at(key), other.to_string()),
    };
    match kind {
        "table" => {
            reject_unknown(map, path, &["type", "values"])?;
            let values = rational_list(field(map, path, "values")?, &at("values"))?;
            if let Some(first) = values.first() {
                if !first.is_zero() {
                    return Err(parse_err(
                        &format!("{path}.values[0]"),
                        "worth of the empty coalition must be 0",
                    ));
                }
            }
            TUGame::table(players, values).map_err(|e| wrap(e, "values"))
        }
        "cardinality_power" => {
            reject_unknown(map, path, &["type", "k"])?;
            let k = unsigned(field(map, path, "k")?, &at("k"))?;
            let k = u32::try_from(k).map_err(|_| parse_err(&at("k"), "exponent too large"))?;
            TUGame::cardinality_power(players, k).map_err(|e| wrap(e, "k"))
        }
        "additive" => {
            reject_unknown(map, path, &["type", "weights"])?;
            let weights = rational_list(field(map, path, "weights")?, &at("weights"))?;
            if weights.len() != players {
                return Err(parse_err(
                    &at("weights"),
                    format!("expected {players} weights, got {}", weights.len()),
                ));
            }
            TUGame::additive(weights).map_err(|e| wrap(e, "weights"))
        }
        "unanimity" => {
            reject_unknown(map, path, &["type", "carrier"])?;
            let carrier = player_set(field(map, path, "carrier")?, &at("carrier"), players)?;
            TUGame::unanimity(players, carrier).map_err(|e| wrap(e, "carrier"))
        }
        "random_supermodular" => {
            reject_unknown(map, path, &["type", "seed", "terms", "epsilon"])?;
            let seed = unsigned(field(map, path, "seed")?, &at("seed"))?;
            let terms = unsigned(field(map, path, "terms")?, &at("terms"))? as usize;
            let epsilon = match map.get("epsilon") {
                Some(v) => rational_value(v, &at("epsilon"))?,
                None => Rational::zero(),
            };
            TUGame::random_supermodular(players, terms, seed, epsilon).map_err(|e| wrap(e, "type"))
        }
        other => Err(parse_err(
            &at("type"),
            format!("unknown game type {other:?}"),
        )),
    }
}

fn instance_from_value(value: &Value, path: &str) -> Result<Instance> {
    let map = object(value, path)?;
    reject_unknown(
        map,
        path,
        &["players", "edges", "game", "semantics", "description"],
    )?;
    let players = unsigned(field(map, path, "players")?, &format!("{path}.players"))? as usize;
    if players > crate::coalition::MAX_PLAYERS {
        return Err(parse_err(
            &format!("{path}.players"),
            format!(
                "at most {} players are supported",
                crate::coalition::MAX_PLAYERS
            ),
        ));
    }
    let edges_path = format!("{path}.edges");
    let edge_items = field(map, path, "edges")?
        .as_array()
        .ok_or_else(|| parse_err(&edges_path, "expected an array"))?;
    let mut edges = Vec::with_capacity(edge_items.len());
    for (k, item) in edge_items.iter().enumerate() {
        let at = format!("{edges_path}[{k}]");
        let e = object(item, &at)?;
        reject_unknown(e, &at, &["tail", "head"])?;
        let tail = player_set(field(e, &at, "tail")?, &format!("{at}.tail"), players)?;
        let head = player_set(field(e, &at, "head")?, &format!("{at}.head"), players)?;
        edges.push(DirectedHyperedge::new(tail, head).map_err(|m| parse_err(&at, m.to_string()))?);
    }
    let graph = DirectedHypergraph::new(players, edges)
        .map_err(|e| parse_err(&edges_path, e.to_string()))?;
    let game = parse_game(field(map, path, "game")?, &format!("{path}.game"), players)?;
    let semantics = match map.get("semantics") {
        Some(v) => parse_semantics(v, &format!("{path}.semantics"))?,
        None => ConnectivitySemantics::Strong,
    };
    Instance::new(graph, game, semantics)
}

/// Parses one instance document.
pub fn parse_instance(text: &str) -> Result<Instance> {
    instance_from_value(&parse_json(text)?, "$")
}

/// Parses either a single instance document or an array of them.
pub fn parse_instances(text: &str) -> Result<Vec<Instance>> {
    let value = parse_json(text)?;
    match &value {
        Value::Array(items) => items
            .iter()
            .enumerate()
            .map(|(k, v)| instance_from_value(v, &format!("$[{k}]")))
            .collect(),
        _ => Ok(vec![instance_from_value(&value, "$")?]),
    }
}

fn fraction(value: &Rational) -> Value {
    Value::String(rational::to_fraction_string(value))
}

fn fractions(values: &[Rational]) -> Value {
    Value::Array(values.iter().map(fraction).collect())
}

fn players_json(coalition: Coalition) -> Value {
    json!(coalition.indices())
}

fn partition_json(partition: &Partition) -> Value {
    json!(partition.to_indices())
}

pub fn game_to_json(game: &TUGame) -> Value {
    match game.family() {
        GameFamily::Table(values) => json!({"type": "table", "values": fractions(values)}),
        GameFamily::CardinalityPower { k } => json!({"type": "cardinality_power", "k": k}),
        GameFamily::Additive { weights } => {
            json!({"type": "additive", "weights": fractions(weights)})
        }
        GameFamily::Unanimity { carrier } => {
            json!({"type": "unanimity", "carrier": players_json(*carrier)})
        }
        GameFamily::RandomSupermodular {
            seed,
            terms,
            epsilon,
        } => json!({
            "type": "random_supermodular",
            "seed": seed,
            "terms": terms,
            "epsilon": fraction(epsilon),
        }),
    }
}

pub fn instance_to_json(instance: &Instance) -> Value {
    let edges: Vec<Value> = instance
        .graph
        .edges()
        .map(|(_, e)| json!({"tail": players_json(e.tail()), "head": players_json(e.head())}))
        .collect();
    json!({
        "players": instance.players(),
        "edges": edges,
        "game": game_to_json(&instance.game),
        "semantics": instance.semantics.as_str(),
    })
}

/// Pretty, key-sorted JSON with a trailing newline.
pub fn canonical_text(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    text.push('\n');
    text
}

pub fn emit_instance(instance: &Instance) -> String {
    canonical_text(&instance_to_json(instance))
}

pub fn emit_instances(instances: &[Instance]) -> String {
    canonical_text(&Value::Array(
        instances.iter().map(instance_to_json).collect(),
    ))
}

/// SHA-256 of the compact canonical instance serialization, hex encoded.
pub fn fingerprint(instance: &Instance) -> String {
    let compact = serde_json::to_string(&instance_to_json(instance)).expect("serializable");
    hex::encode(Sha256::digest(compact.as_bytes()))
}

fn edge_json(edge: EdgeId) -> Value {
    json!(edge.label())
}

pub fn witness_to_json(witness: &Witness) -> Value {
    match witness {
        Witness::ComponentEfficiency {
            component,
            payoff_sum,
            worth,
        } => json!({
            "kind": "component_efficiency",
            "component": players_json(*component),
            "payoff_sum": fraction(payoff_sum),
            "worth": fraction(worth),
        }),
        Witness::Fairness {
            edge,
            tail_player,
            head_player,
            tail_delta,
            head_delta,
        } => json!({
            "kind": "fairness",
            "edge": edge_json(*edge),
            "tail_player": tail_player.index(),
            "head_player": head_player.index(),
            "tail_delta": fraction(tail_delta),
            "head_delta": fraction(head_delta),
        }),
        Witness::Decomposition {
            coalition,
            lhs,
            rhs,
        } => json!({
            "kind": "decomposition",
            "coalition": players_json(*coalition),
            "restricted_worth": fraction(lhs),
            "component_slice_sum": fraction(rhs),
        }),
        Witness::PayoffGain {
            edge,
            player,
            with_edge,
            without_edge,
        } => json!({
            "kind": "payoff_gain",
            "edge": edge_json(*edge),
            "player": player.index(),
            "with_edge": fraction(with_edge),
            "without_edge": fraction(without_edge),
        }),
        Witness::SafeNonBridge { edge, components } => json!({
            "kind": "safe_non_bridge",
            "edge": edge_json(*edge),
            "components": partition_json(components),
        }),
        Witness::ReportedEfficiency {
            label,
            deleted_edge,
            reported_total,
            grand_worth,
        } => json!({
            "kind": "reported_efficiency",
            "label": label,
            "deleted_edge": deleted_edge.map(edge_json),
            "reported_total": fraction(reported_total),
            "restricted_grand_worth": fraction(grand_worth),
        }),
    }
}

fn agreement_json(row: &EdgeAgreement) -> Value {
    json!({
        "edge": edge_json(row.edge),
        "bridge": row.bridge,
        "safe": row.safe,
        "agrees": row.agrees(),
    })
}

pub fn report_to_json(report: &PropertyReport) -> Value {
    let mut map = Map::new();
    map.insert("property".into(), json!(report.property.as_str()));
    map.insert("semantics".into(), json!(report.semantics.as_str()));
    map.insert("verdict".into(), json!(report.verdict.as_str()));
    map.insert(
        "witnesses".into(),
        Value::Array(report.witnesses.iter().map(witness_to_json).collect()),
    );
    map.insert("fingerprint".into(), json!(report.fingerprint));
    if let Some(edge) = report.edge {
        map.insert("edge".into(), edge_json(edge));
    }
    match &report.details {
        ReportDetails::None => {}
        ReportDetails::EdgeTable(rows) => {
            map.insert(
                "edges".into(),
                Value::Array(rows.iter().map(agreement_json).collect()),
            );
        }
        ReportDetails::Allocations(allocations) => {
            let computed: Map<String, Value> = allocations
                .iter()
                .map(|(label, a)| (label.clone(), fractions(a.payoffs())))
                .collect();
            map.insert("computed".into(), Value::Object(computed));
        }
    }
    Value::Object(map)
}

pub fn emit_report(report: &PropertyReport) -> String {
    canonical_text(&report_to_json(report))
}

pub fn allocation_to_json(allocation: &Allocation) -> Value {
    json!({"payoffs": fractions(allocation.payoffs())})
}

pub fn emit_allocation(allocation: &Allocation) -> String {
    canonical_text(&allocation_to_json(allocation))
}

pub fn estimate_to_json(estimate: &McEstimate) -> Value {
    json!({
        "payoffs": estimate.payoffs,
        "samples": estimate.samples,
        "seed": estimate.seed,
    })
}

/// Reads a list of externally reported allocations:
///
/// ```json
/// {"reported": [{"label": "...", "deleted_edge": 2, "payoffs": ["28/5", 1]}]}
/// ```
///
/// `deleted_edge` is a one-based edge label or `null`.
pub fn parse_reported_allocations(text: &str) -> Result<Vec<ReportedAllocation>> {
    let value = parse_json(text)?;
    let map = object(&value, "$")?;
    reject_unknown(map, "$", &["reported", "description"])?;
    let items = field(map, "$", "reported")?
        .as_array()
        .ok_or_else(|| parse_err("$.reported", "expected an array"))?;
    items
        .iter()
        .enumerate()
        .map(|(k, item)| {
            let at = format!("$.reported[{k}]");
            let entry = object(item, &at)?;
            reject_unknown(entry, &at, &["label", "deleted_edge", "payoffs"])?;
            let label = field(entry, &at, "label")?
                .as_str()
                .ok_or_else(|| parse_err(&format!("{at}.label"), "expected a string"))?
                .to_string();
            let deleted_edge = match entry.get("deleted_edge") {
                None | Some(Value::Null) => None,
                Some(v) => {
                    let label = unsigned(v, &format!("{at}.deleted_edge"))? as usize;
                    Some(EdgeId::from_label(label).ok_or_else(|| {
                        parse_err(&format!("{at}.deleted_edge"), "edge labels start at 1")
                    })?)
                }
            };
            let payoffs = rational_list(field(entry, &at, "payoffs")?, &format!("{at}.payoffs"))?;
            Ok(ReportedAllocation {
                label,
                deleted_edge,
                payoffs: Allocation::new(payoffs),
            })
        })
        .collect()
}

/// Plain-text rendering of an allocation, one player per line.
pub fn allocation_table(allocation: &Allocation) -> String {
    let mut out = String::from("player  payoff\n");
    for (k, p) in allocation.payoffs().iter().enumerate() {
        out.push_str(&format!(
            "{:>6}  {}\n",
            k + 1,
            rational::to_fraction_string(p)
        ));
    }
    out.push_str(&format!(
        " total  {}\n",
        rational::to_fraction_string(&allocation.total())
    ));
    out
}

/// Plain-text rendering of a report.
pub fn report_table(report: &PropertyReport) -> String {
    let mut out = format!(
        "{} [{}]{}: {}\n",
        report.property,
        report.semantics,
        report.edge.map(|e| format!(" {e}")).unwrap_or_default(),
        report.verdict.as_str()
    );
    if let ReportDetails::EdgeTable(rows) = &report.details {
        out.push_str("edge  bridge  safe   agrees\n");
        for r in rows {
            out.push_str(&format!(
                "{:<5} {:<7} {:<6} {}\n",
                r.edge.to_string(),
                r.bridge,
                r.safe,
                r.agrees()
            ));
        }
    }
    if let ReportDetails::Allocations(allocations) = &report.details {
        for (label, a) in allocations {
            let payoffs: Vec<String> = a
                .payoffs()
                .iter()
                .map(rational::to_fraction_string)
                .collect();
            out.push_str(&format!("computed {label}: ({})\n", payoffs.join(", ")));
        }
    }
    for w in &report.witnesses {
        out.push_str(&format!("  witness {}\n", witness_to_json(w)));
    }
    out
}
