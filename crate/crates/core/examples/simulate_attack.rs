//! Connectivity and controllability curves of one scale-free graph under
//! the three attack strategies.
//!
//! ```text
//! cargo run --release --example simulate_attack -- [n] [seed]
//! ```

use robnet::netgen::{generate, GeneratorConfig, NetworkModel};
use robnet::sim::{AttackKind, Measure, Simulation};

fn sparkline(values: &[f64], width: usize) -> String {
    const BARS: [char; 8] = ['▁', '▂', '▃', '▄', '▅', '▆', '▇', '█'];
    (0..width)
        .map(|c| {
            let v = values[c * values.len() / width];
            BARS[((v * 7.0).round() as usize).min(7)]
        })
        .collect()
}

fn main() -> robnet::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(200, |s| s.parse().expect("n"));
    let seed: u64 = args.next().map_or(1, |s| s.parse().expect("seed"));
    let g = generate(&GeneratorConfig::new(NetworkModel::Ba, n, false, 4.0, seed))?;
    println!("BA graph: {} nodes, {} edges", g.n_alive(), g.edge_count());

    for measure in [Measure::Connectivity, Measure::Controllability] {
        println!("\n{measure}");
        for attack in [AttackKind::MaxDegree, AttackKind::InitialDegree, AttackKind::Random] {
            let curve = Simulation::new(measure, attack).curve(&g, seed)?;
            println!(
                "  {:<13} R = {:.4}  {}",
                format!("{attack:?}"),
                curve.scalar().0,
                sparkline(curve.values(), 60)
            );
        }
    }
    Ok(())
}
