//! Fixed inputs shared by the benchmarks.

use vmgbs::graph::Graph;
use vmgbs::rng;

/// Connected G(n, 1/2) graph drawn from `seed`.
pub fn connected_graph(n: usize, seed: u64) -> Graph {
    let mut r = rng::seeded(seed);
    loop {
        let g = Graph::random(n, 0.5, &mut r).expect("size within range");
        if g.is_connected() {
            return g;
        }
    }
}

/// Graphs of sizes `sizes`, one per entry, drawn from consecutive seeds.
pub fn graph_family(sizes: &[usize], seed: u64) -> Vec<Graph> {
    sizes
        .iter()
        .enumerate()
        .map(|(i, &n)| connected_graph(n, rng::mix(seed, i as u64)))
        .collect()
}
