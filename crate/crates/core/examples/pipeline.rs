//! The full workflow through the library: generate a dataset on disk,
//! train a small model, save and reload the checkpoint, predict the held-out
//! split and compare it with the training-mean curve.
//!
//! ```text
//! cargo run --release --example pipeline -- [dir] [epochs]
//! ```

use std::path::PathBuf;

use robnet::io::{build_dataset, CurveTable, DatasetManifest, Recipe};
use robnet::model::{
    mean_curve, predict, resample_curve, train_with, Model, ModelCheckpoint, ModelConfig,
    TrainConfig,
};
use robnet::netgen::{NetworkModel, SizeRange};
use robnet::stats::{prediction_error, significance_sign, EvalReport, InstanceRow, ALPHA};

fn main() -> robnet::Result<()> {
    let mut args = std::env::args().skip(1);
    let dir: PathBuf = args.next().map_or_else(|| std::env::temp_dir().join("robnet-pipeline"), PathBuf::from);
    let epochs = args.next().map_or(20, |s| s.parse().expect("epochs"));

    let recipe = |count, seed| Recipe {
        models: vec![NetworkModel::Er, NetworkModel::Ba, NetworkModel::SwNw],
        size: SizeRange::new(40, 80).unwrap(),
        count,
        reps: 3,
        seed,
        ..Recipe::named("S1").unwrap()
    };
    build_dataset(&recipe(60, 1), dir.join("train"))?;
    build_dataset(&recipe(20, 2), dir.join("test"))?;
    let (m, base) = DatasetManifest::read(dir.join("train"))?;
    let train_set = m.load_samples(&base)?;
    let (m_test, base_test) = DatasetManifest::read(dir.join("test"))?;
    let test = m_test.load_samples(&base_test)?;
    println!("{} training and {} test graphs under {}", train_set.len(), test.len(), dir.display());

    let cfg = TrainConfig { epochs, lr: 3e-4, eval_every: 5, ..Default::default() };
    let (ck, _) = train_with(Model::new(ModelConfig::reduced(64), 0)?, &train_set, None, &cfg, |s| {
        if let Some(xi) = s.selection_xi {
            println!("epoch {:3}  loss {:.5}  train xi {:.4}", s.epoch, s.loss, xi);
        }
    })?;
    let path = dir.join("model.sppc");
    ck.save(&path)?;
    let ck = ModelCheckpoint::load(&path)?;

    let mean = mean_curve(&train_set, 64)?;
    let mut report = EvalReport::default();
    for (e, s) in m_test.entries.iter().zip(&test) {
        let pred = predict(&ck, &s.graph)?.into_values();
        CurveTable::both(s.curve.values().to_vec(), pred.clone())?.write(dir.join("test").join(format!("{}.pred.csv", e.id)))?;
        for (method, p) in [("spp", pred), ("mean", resample_curve(&mean, s.curve.len())?)] {
            report.push(InstanceRow {
                dataset_id: e.id.clone(),
                model: e.model.tag().to_owned(),
                n: e.n,
                measure: e.measure.to_string(),
                directed: e.directed,
                method: method.to_owned(),
                xi: prediction_error(s.curve.values(), &p)?,
                runtime: None,
            });
        }
    }
    print!("{}", report.summary_csv());
    let s = significance_sign(&report.errors_of("spp"), &report.errors_of("mean"), ALPHA)?;
    println!("spp vs mean curve: sign {} (p = {:.3e})", s.sign, s.p);
    Ok(())
}
