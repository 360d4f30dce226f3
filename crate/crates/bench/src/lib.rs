//! Seeded fixtures shared by the benchmarks.

use hypermyerson_core::analysis::random_hypergraph;
use hypermyerson_core::game::random_table_game;
use hypermyerson_core::{ConnectivitySemantics, Instance};

/// Table-game instance with `edges` random hyperedges of side size at most 3.
pub fn table_instance(players: usize, edges: usize, seed: u64) -> Instance {
    let side = players.min(3);
    let graph = random_hypergraph(players, edges, side, side, seed).expect("valid parameters");
    let game = random_table_game(players, seed.wrapping_add(1)).expect("dense game");
    Instance::new(graph, game, ConnectivitySemantics::Strong).expect("matching players")
}
