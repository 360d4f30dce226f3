#![allow(dead_code)]

use hypermyerson_core::analysis::random_hypergraph;
use hypermyerson_core::{Coalition, DirectedHypergraph, EdgeId, PlayerId};

/// Every simple path from `from` to `to`, walking hyperedges directly:
/// each step leaves the current player through an edge whose tail holds
/// it and lands on a head member not yet visited. Returns the player sets.
pub fn simple_paths(h: &DirectedHypergraph, from: usize, to: usize) -> Vec<Vec<usize>> {
    fn walk(h: &DirectedHypergraph, path: &mut Vec<usize>, to: usize, found: &mut Vec<Vec<usize>>) {
        let here = *path.last().unwrap();
        if here == to && path.len() > 1 {
            found.push(path.clone());
            return;
        }
        for (_, e) in h.edges() {
            if !e.tail().indices().contains(&here) {
                continue;
            }
            for next in e.head().indices() {
                if path.contains(&next) {
                    continue;
                }
                path.push(next);
                walk(h, path, to, found);
                path.pop();
            }
        }
    }
    let mut found = Vec::new();
    walk(h, &mut vec![from], to, &mut found);
    found.sort();
    found.dedup();
    found
}

pub fn player(i: usize, n: usize) -> PlayerId {
    PlayerId::new(i, n).unwrap()
}

pub fn coalition(players: &[usize], n: usize) -> Coalition {
    Coalition::from_players(players, n).unwrap()
}

/// Deterministic small hypergraph sample: n in 2..=5, up to 4 edges.
pub fn small_hypergraphs(count: u64) -> Vec<DirectedHypergraph> {
    (0..count)
        .map(|seed| {
            let n = 2 + (seed % 4) as usize;
            let edges = (seed / 4 % 5) as usize;
            let tail_max = 1 + (seed / 20 % n as u64) as usize;
            let head_max = 1 + (seed / 7 % n as u64) as usize;
            random_hypergraph(n, edges, tail_max, head_max, seed).unwrap()
        })
        .collect()
}

pub fn edge(label: usize) -> EdgeId {
    EdgeId::from_label(label).unwrap()
}

pub fn worked_example() -> DirectedHypergraph {
    use hypermyerson_core::DirectedHyperedge;
    let e = |t: &[usize], h: &[usize]| DirectedHyperedge::from_players(t, h, 5).unwrap();
    DirectedHypergraph::new(
        5,
        vec![
            e(&[1], &[2]),
            e(&[2], &[1]),
            e(&[2, 3], &[4]),
            e(&[3, 4, 5], &[1]),
        ],
    )
    .unwrap()
}
