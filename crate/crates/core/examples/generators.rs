//! Generates one graph from every synthetic family and prints its realized
//! size and average degree.
//!
//! ```text
//! cargo run --example generators -- [n] [seed]
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use robnet::netgen::{average_degree, generate, sample_config, NetworkModel, SizeRange};

fn main() -> robnet::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(500, |s| s.parse().expect("n"));
    let seed: u64 = args.next().map_or(0, |s| s.parse().expect("seed"));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    println!("{:<6} {:>8} {:>6} {:>8} {:>8} {:>6}", "model", "directed", "n", "edges", "k_avg", "lcc");
    for directed in [false, true] {
        for model in NetworkModel::ALL {
            let cfg = sample_config(model, directed, SizeRange::new(n, n)?, &mut rng);
            let g = generate(&cfg)?;
            println!(
                "{:<6} {:>8} {:>6} {:>8} {:>8.2} {:>6}",
                model.tag(),
                directed,
                g.n_alive(),
                g.edge_count(),
                average_degree(&g),
                g.largest_component_size()?
            );
        }
    }
    Ok(())
}
