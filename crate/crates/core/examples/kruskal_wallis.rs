//! Prediction errors of two methods compared with the Kruskal-Wallis test,
//! and the false-rejection rate of the test when both share a distribution.
//!
//! ```text
//! cargo run --release --example kruskal_wallis
//! ```

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use robnet::stats::{kruskal_wallis, significance_sign, ALPHA};

fn main() -> robnet::Result<()> {
    let kw = kruskal_wallis(&[&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]])?;
    println!("{{1,2,3}} vs {{4,5,6}}: H = {:.4}, p = {:.4}", kw.h, kw.p);

    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let better: Vec<f64> = (0..50).map(|_| rng.random_range(0.02..0.08)).collect();
    let worse: Vec<f64> = (0..50).map(|_| rng.random_range(0.04..0.10)).collect();
    for (label, a, b) in [("better vs worse", &better, &worse), ("worse vs better", &worse, &better), ("same", &better, &better)] {
        let s = significance_sign(a, b, ALPHA)?;
        println!("{label:16} H = {:8.3}  p = {:.2e}  sign {}", s.h, s.p, s.sign);
    }

    let trials = 2000;
    let mut rejected = 0;
    for _ in 0..trials {
        let a: Vec<f64> = (0..20).map(|_| rng.random()).collect();
        let b: Vec<f64> = (0..20).map(|_| rng.random()).collect();
        if kruskal_wallis(&[&a, &b])?.p < ALPHA {
            rejected += 1;
        }
    }
    println!("null rejections at alpha {ALPHA}: {:.1}%", 100.0 * rejected as f64 / trials as f64);
    Ok(())
}
