//! Overfits the reduced SPP-CNN on 20 small undirected ER/BA graphs and
//! reports the training prediction error per epoch.
//!
//! ```text
//! cargo run --release --example overfit -- [epochs] [lr]
//! ```

use std::time::Instant;

use robnet::io::{generate_instances, Recipe};
use robnet::model::{train_with, Model, ModelConfig, Sample, TrainConfig};
use robnet::netgen::{NetworkModel, SizeRange};
use robnet::sim::{AttackKind, Measure, TheoremChoice};

fn main() -> robnet::Result<()> {
    let mut args = std::env::args().skip(1);
    let epochs = args.next().map_or(500, |s| s.parse().expect("epochs"));
    let lr = args.next().map_or(1e-4, |s| s.parse().expect("learning rate"));

    let recipe = Recipe {
        models: vec![NetworkModel::Er, NetworkModel::Ba],
        directed: false,
        size: SizeRange::new(50, 100)?,
        count: 20,
        measure: Measure::Connectivity,
        attack: AttackKind::MaxDegree,
        theorem: TheoremChoice::Auto,
        reps: 5,
        seed: 6,
    };
    let data: Vec<Sample> = generate_instances(&recipe)?
        .iter()
        .map(|i| i.to_sample())
        .collect();
    let model = Model::new(ModelConfig::reduced(128), 0)?;
    println!("{} parameters", model.parameter_count());
    let cfg = TrainConfig {
        lr,
        epochs,
        stop_below: Some(0.05),
        eval_every: 5,
        ..Default::default()
    };
    let start = Instant::now();
    let (ck, report) = train_with(model, &data, None, &cfg, |s| {
        if let Some(xi) = s.selection_xi {
            println!(
                "epoch {:4}  loss {:.5}  train xi {:.4}  {:.0?}",
                s.epoch,
                s.loss,
                xi,
                start.elapsed()
            );
        }
    })?;
    println!(
        "best train xi {:.4} at epoch {:?} after {} steps",
        ck.meta.best_xi.unwrap_or(f64::NAN),
        report.best_epoch,
        report.steps
    );
    Ok(())
}
