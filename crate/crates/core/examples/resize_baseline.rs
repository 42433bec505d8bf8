//! How resizing an adjacency matrix to a fixed width distorts the graph:
//! dropped or padded nodes, edges lost, and the resulting connectivity.
//!
//! ```text
//! cargo run --release --example resize_baseline -- [width]
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use robnet::graph::Graph;
use robnet::model::resize_adjacency;
use robnet::netgen::{generate, GeneratorConfig, NetworkModel};
use robnet::sim::{AttackKind, Measure, Simulation};

fn from_matrix(a: &robnet::AdjacencyMatrix) -> robnet::Result<Graph> {
    let n = a.size();
    let edges = (0..n).flat_map(|i| (i + 1..n).filter(move |&j| a.get(i, j) == 1).map(move |j| (i, j)));
    Graph::from_edges(n, false, edges)
}

fn main() -> robnet::Result<()> {
    let width: usize = std::env::args().nth(1).map_or(150, |s| s.parse().expect("width"));
    let sim = Simulation::new(Measure::Connectivity, AttackKind::MaxDegree);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    println!("{:>5} {:>6} {:>7} {:>7} {:>8} {:>8}", "n", "delta", "edges", "kept", "R", "R resized");
    for n in [75, 120, 150, 200, 300] {
        let g = generate(&GeneratorConfig::new(NetworkModel::Er, n, false, 5.0, n as u64))?;
        let (b, delta) = resize_adjacency(&g.adjacency_matrix()?, width, &mut rng);
        let h = from_matrix(&b)?;
        println!(
            "{n:>5} {delta:>6.3} {:>7} {:>7} {:>8.4} {:>8.4}",
            g.edge_count(),
            h.edge_count(),
            sim.curve(&g, 0)?.scalar().0,
            sim.curve(&h, 0)?.scalar().0
        );
    }
    Ok(())
}
