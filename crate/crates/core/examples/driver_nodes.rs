//! Driver-node counts from maximum matching and from exact rank, on a
//! directed graph and its undirected counterpart, plus a matching kept
//! up to date while nodes are removed.
//!
//! ```text
//! cargo run --release --example driver_nodes -- [n]
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use robnet::netgen::{generate, orient_randomly, GeneratorConfig, NetworkModel};
use robnet::sim::{
    attack_sequence, driver_count_ect, driver_count_mit, AttackKind, AttackStrategy,
    DirectedMatching,
};

fn main() -> robnet::Result<()> {
    let n: usize = std::env::args().nth(1).map_or(300, |s| s.parse().expect("n"));
    let undirected = generate(&GeneratorConfig::new(NetworkModel::Er, n, false, 4.0, 7))?;
    let directed = orient_randomly(&undirected, &mut ChaCha8Rng::seed_from_u64(7));

    println!("undirected ER, n = {n}: ECT drivers {}", driver_count_ect(&undirected)?);
    println!(
        "randomly oriented:    MIT drivers {}, ECT drivers {}",
        driver_count_mit(&directed)?,
        driver_count_ect(&directed)?
    );

    // warm-started matching under a degree attack
    let mut g = directed.clone();
    let mut m = DirectedMatching::maximum(&g);
    let seq = attack_sequence(&g, AttackStrategy::new(AttackKind::MaxDegree, 0));
    for (step, &v) in seq.iter().enumerate().take(n / 2) {
        if step % (n / 10).max(1) == 0 {
            let drivers = (g.n_alive() - m.size()).max(1);
            println!(
                "step {step:4}: {:4} nodes left, matching {:4}, drivers {:4} (fresh {})",
                g.n_alive(),
                m.size(),
                drivers,
                driver_count_mit(&g)?
            );
        }
        g.remove_node(v)?;
        m.node_removed(&g, v);
    }
    Ok(())
}
