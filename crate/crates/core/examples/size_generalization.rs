//! Trains on graphs of 100 to 200 nodes and tests on 200 to 300 nodes,
//! comparing the SPP-CNN against a resized-input network of the same trunk
//! and against the training-mean curve.
//!
//! ```text
//! cargo run --release --example size_generalization -- [epochs] [resize-width]
//! ```

use std::time::Instant;

use robnet::io::{generate_instances, Recipe};
use robnet::model::{
    mean_curve, mean_error, resample_curve, train_with, InputMode, Model, ModelConfig, Sample,
    TrainConfig,
};
use robnet::netgen::{sets, SizeRange};
use robnet::stats::{prediction_error, significance_sign, ALPHA};
use robnet::sim::{AttackKind, Measure, TheoremChoice};

fn split(size: SizeRange, count: usize, seed: u64) -> robnet::Result<Vec<Sample>> {
    let recipe = Recipe {
        models: sets::S2.to_vec(),
        directed: false,
        size,
        count,
        measure: Measure::Connectivity,
        attack: AttackKind::MaxDegree,
        theorem: TheoremChoice::Auto,
        reps: 5,
        seed,
    };
    Ok(generate_instances(&recipe)?.iter().map(|i| i.to_sample()).collect())
}

fn main() -> robnet::Result<()> {
    let mut args = std::env::args().skip(1);
    let epochs = args.next().map_or(30, |s| s.parse().expect("epochs"));
    let width = args.next().map_or(150, |s| s.parse().expect("width"));
    let lr = args.next().map_or(1e-4, |s| s.parse().expect("lr"));

    let start = Instant::now();
    let train = split(SizeRange::new(100, 200)?, 200, 1)?;
    let test = split(SizeRange::new(200, 300)?, 50, 2)?;
    println!("data ready in {:.1?}", start.elapsed());

    let m = 128;
    let base = mean_curve(&train, m)?;
    let base_err: Vec<f64> = test
        .iter()
        .map(|s| {
            let pred = resample_curve(&base, s.curve.len())?;
            prediction_error(s.curve.values(), &pred)
        })
        .collect::<robnet::Result<_>>()?;
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    println!("mean-curve baseline test xi {:.4}", mean(&base_err));

    let cfg = TrainConfig {
        lr,
        epochs,
        eval_every: 5,
        ..Default::default()
    };
    for (label, input) in [
        ("spp", InputMode::Native),
        ("resize", InputMode::Resize { width, seed: 0 }),
    ] {
        let t = Instant::now();
        let model = Model::new(ModelConfig::reduced(m).with_input(input), 0)?;
        let (ck, _) = train_with(model, &train, None, &cfg, |s| {
            if let Some(xi) = s.selection_xi {
                println!("  {label} epoch {:3} loss {:.5} train xi {:.4}", s.epoch, s.loss, xi);
            }
        })?;
        let errs: Vec<f64> = test
            .iter()
            .map(|s| {
                let pred = robnet::model::predict_values(&ck.model, &s.graph)?;
                prediction_error(s.curve.values(), &pred)
            })
            .collect::<robnet::Result<_>>()?;
        let sig = significance_sign(&errs, &base_err, ALPHA)?;
        println!(
            "{label}: test xi {:.4} (train {:.4}) vs baseline sign {} p={:.3e}  [{:.0?}]",
            mean(&errs),
            mean_error(&ck.model, &train)?,
            sig.sign,
            sig.p,
            t.elapsed()
        );
    }
    Ok(())
}
