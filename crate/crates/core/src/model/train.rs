use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use super::adam::AdamState;
use super::checkpoint::{ModelCheckpoint, TrainingMeta};
use super::config::{InputMode, TrainConfig};
use super::network::Model;
use super::resample::resample_curve;
use crate::error::{Error, Result};
use crate::graph::{AdjacencyMatrix, Graph};
use crate::sim::{Measure, RobustnessCurve};
use crate::stats::prediction_error;
use crate::tensor::{Tape, Tensor};

/// A graph with its ground-truth curve.
#[derive(Clone, Debug)]
pub struct Sample {
    pub graph: Graph,
    pub curve: RobustnessCurve,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrainReport {
    /// Mean per-sample loss of every epoch.
    pub epoch_losses: Vec<f64>,
    /// `(epoch, ξ)` at every selection evaluation (1-based epochs).
    pub selection: Vec<(usize, f64)>,
    pub best_epoch: Option<usize>,
    pub steps: usize,
}

/// Progress after each epoch.
#[derive(Clone, Copy, Debug)]
pub struct EpochStats {
    pub epoch: usize,
    pub loss: f64,
    pub selection_xi: Option<f64>,
}

pub fn train(
    model: Model,
    data: &[Sample],
    validation: Option<&[Sample]>,
    cfg: &TrainConfig,
) -> Result<(ModelCheckpoint, TrainReport)> {
    train_with(model, data, validation, cfg, |_| {})
}

/// Adam on the mean squared error between the network output and the
/// ground truth resampled to the output length, accumulating gradients
/// over `cfg.accumulation` samples per step. Samples within a step may run
/// in parallel; their gradients are summed in sample order, so the result
/// does not depend on the worker count.
///
/// The returned checkpoint holds the parameters with the lowest selection
/// ξ, measured on `validation` or, without one, on the training data.
pub fn train_with<F: FnMut(&EpochStats)>(
    mut model: Model,
    data: &[Sample],
    validation: Option<&[Sample]>,
    cfg: &TrainConfig,
    mut progress: F,
) -> Result<(ModelCheckpoint, TrainReport)> {
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if cfg.accumulation == 0 || cfg.eval_every == 0 {
        return Err(Error::InvalidConfig(
            "accumulation and eval_every must be at least 1".into(),
        ));
    }
    let m = model.config().output_len();
    let measure = data[0].curve.measure();
    let inputs = data
        .iter()
        .map(|s| s.graph.adjacency_matrix())
        .collect::<Result<Vec<_>>>()?;
    if model.config().input == InputMode::Native {
        for a in &inputs {
            model.prepare(a.clone(), 0)?;
        }
    }
    let targets = data
        .iter()
        .map(|s| {
            let t = resample_curve(s.curve.values(), m)?;
            Tensor::new(&[1, m], t.into_iter().map(|v| v as f32).collect())
        })
        .collect::<Result<Vec<_>>>()?;
    let selection_set = validation.unwrap_or(data);

    let mut adam: Vec<AdamState> = model
        .parameters()
        .iter()
        .map(|p| AdamState::new(p.value.len()))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut order: Vec<usize> = (0..data.len()).collect();
    let mut report = TrainReport::default();
    let mut best: Option<(f64, Model)> = None;
    let mut since_best = 0;

    for epoch in 1..=cfg.epochs {
        order.shuffle(&mut rng);
        let mut loss_sum = 0.0;
        for chunk in order.chunks(cfg.accumulation) {
            let step = report.steps + 1;
            let results = chunk
                .par_iter()
                .map(|&i| {
                    let salt = (step as u64) << 20 | i as u64;
                    let a = model.prepare(inputs[i].clone(), salt)?;
                    sample_gradient(&model, &a, &targets[i])
                })
                .collect::<Result<Vec<_>>>()?;
            let mut total: Option<Vec<Vec<f32>>> = None;
            for (loss, grads) in results {
                if !loss.is_finite() {
                    return Err(Error::Divergence { step });
                }
                loss_sum += loss;
                match &mut total {
                    None => total = Some(grads),
                    Some(acc) => {
                        for (a, g) in acc.iter_mut().zip(&grads) {
                            for (x, y) in a.iter_mut().zip(g) {
                                *x += y;
                            }
                        }
                    }
                }
            }
            let mut grads = total.expect("nonempty chunk");
            let scale = 1.0 / chunk.len() as f32;
            for (p, (g, state)) in model
                .parameters_mut()
                .iter_mut()
                .zip(grads.iter_mut().zip(&mut adam))
            {
                g.iter_mut().for_each(|x| *x *= scale);
                state.step(cfg, step, p.value.data_mut(), g);
            }
            report.steps = step;
        }
        let loss = loss_sum / data.len() as f64;
        report.epoch_losses.push(loss);

        let mut selection_xi = None;
        if epoch % cfg.eval_every == 0 || epoch == cfg.epochs {
            let xi = mean_error(&model, selection_set)?;
            selection_xi = Some(xi);
            report.selection.push((epoch, xi));
            if best.as_ref().is_none_or(|(b, _)| xi < *b) {
                best = Some((xi, model.clone()));
                report.best_epoch = Some(epoch);
                since_best = 0;
            } else {
                since_best += cfg.eval_every;
            }
        }
        progress(&EpochStats {
            epoch,
            loss,
            selection_xi,
        });
        let reached = selection_xi
            .zip(cfg.stop_below)
            .is_some_and(|(xi, bound)| xi < bound);
        let stalled = cfg.patience.is_some_and(|p| since_best >= p);
        if reached || stalled {
            break;
        }
    }

    let meta = TrainingMeta {
        epochs_run: report.epoch_losses.len(),
        steps: report.steps,
        final_loss: report.epoch_losses.last().copied(),
        best_xi: best.as_ref().map(|(xi, _)| *xi),
        best_epoch: report.best_epoch,
        dataset_fingerprint: dataset_fingerprint(data),
        measure: Some(measure),
    };
    let model = best.map_or(model, |(_, m)| m);
    Ok((ModelCheckpoint::new(model, meta), report))
}

/// Loss and per-parameter gradients for one sample.
fn sample_gradient(
    model: &Model,
    a: &AdjacencyMatrix,
    target: &Tensor,
) -> Result<(f64, Vec<Vec<f32>>)> {
    let mut tape = Tape::new();
    let rec = model.record(&mut tape, a, true)?;
    let t = tape.constant(target.clone());
    let loss = tape.mse_loss(rec.output, t)?;
    let value = f64::from(tape.value(loss).data()[0]);
    tape.backward(loss)?;
    let grads = rec
        .params
        .iter()
        .map(|&p| {
            tape.take_grad(p)
                .unwrap_or_else(|| vec![0.0; tape.value(p).len()])
        })
        .collect();
    Ok((value, grads))
}

/// Mean ξ of `predict` over `samples`.
pub fn mean_error(model: &Model, samples: &[Sample]) -> Result<f64> {
    let errs = samples
        .par_iter()
        .map(|s| {
            let pred = predict_values(model, &s.graph)?;
            prediction_error(s.curve.values(), &pred)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(errs.iter().sum::<f64>() / errs.len().max(1) as f64)
}

/// Forward pass resampled to one value per removal step, floored at 1e-6.
pub fn predict_values(model: &Model, g: &Graph) -> Result<Vec<f64>> {
    let out: Vec<f64> = model.forward(g)?.into_iter().map(f64::from).collect();
    let n = g.n_alive();
    let values = if n == 1 {
        vec![out[out.len() - 1]]
    } else {
        resample_curve(&out, n)?
    };
    Ok(values.into_iter().map(|v| v.clamp(1e-6, 1.0)).collect())
}

/// Predicted robustness curve of `g`, one value per removal step.
pub fn predict(checkpoint: &ModelCheckpoint, g: &Graph) -> Result<RobustnessCurve> {
    let measure = checkpoint.meta.measure.unwrap_or(Measure::Connectivity);
    RobustnessCurve::new(predict_values(&checkpoint.model, g)?, measure)
}

/// Per-index mean of the training curves after resampling each to `len`
/// points: the best constant predictor under the resampled parameterization.
pub fn mean_curve(samples: &[Sample], len: usize) -> Result<Vec<f64>> {
    if samples.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut acc = vec![0.0; len];
    for s in samples {
        for (a, v) in acc.iter_mut().zip(resample_curve(s.curve.values(), len)?) {
            *a += v;
        }
    }
    Ok(acc.into_iter().map(|a| a / samples.len() as f64).collect())
}

/// Hex SHA-256 over every sample's directedness, size, edges and curve.
pub fn dataset_fingerprint(samples: &[Sample]) -> String {
    let mut h = Sha256::new();
    for s in samples {
        let g = &s.graph;
        h.update([u8::from(g.is_directed())]);
        h.update((g.n_alive() as u64).to_le_bytes());
        for (u, v) in g.edges() {
            h.update((u as u64).to_le_bytes());
            h.update((v as u64).to_le_bytes());
        }
        for v in s.curve.values() {
            h.update(v.to_le_bytes());
        }
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelConfig;
    use crate::netgen::{generate, GeneratorConfig, NetworkModel};
    use crate::sim::{AttackKind, Simulation};

    fn samples(count: usize, n: usize) -> Vec<Sample> {
        (0..count)
            .map(|i| {
                let g = generate(&GeneratorConfig::new(NetworkModel::Er, n, false, 3.0, i as u64))
                    .unwrap();
                let curve = Simulation::new(Measure::Connectivity, AttackKind::MaxDegree)
                    .curve(&g, 0)
                    .unwrap();
                Sample { graph: g, curve }
            })
            .collect()
    }

    fn tiny() -> ModelConfig {
        ModelConfig::from_groups(&[(3, 4), (3, 8)], &[16], 8)
    }

    #[test]
    fn zero_epochs_keeps_initialization() {
        let model = Model::new(tiny(), 4).unwrap();
        let cfg = TrainConfig {
            epochs: 0,
            ..Default::default()
        };
        let (ck, report) = train(model.clone(), &samples(2, 12), None, &cfg).unwrap();
        assert_eq!(ck.model, model);
        assert!(report.epoch_losses.is_empty());
        assert_eq!(ck.meta.epochs_run, 0);
    }

    #[test]
    fn deterministic_history() {
        let data = samples(5, 12);
        let cfg = TrainConfig {
            epochs: 3,
            accumulation: 2,
            lr: 1e-3,
            seed: 9,
            ..Default::default()
        };
        let run = || train(Model::new(tiny(), 1).unwrap(), &data, None, &cfg).unwrap();
        let (a, ra) = run();
        let (b, rb) = run();
        assert_eq!(ra, rb);
        assert_eq!(a, b);
        assert_eq!(ra.steps, 9);
        assert_eq!(a.meta.dataset_fingerprint.len(), 64);
    }

    #[test]
    fn predict_contract() {
        let data = samples(1, 20);
        let ck = ModelCheckpoint::new(Model::new(tiny(), 2).unwrap(), TrainingMeta::default());
        let c = predict(&ck, &data[0].graph).unwrap();
        assert_eq!(c.len(), 20);
        assert!(c.values().iter().all(|&v| v > 0.0 && v <= 1.0));
        assert_eq!(c, predict(&ck, &data[0].graph).unwrap());
    }

    #[test]
    fn empty_dataset_rejected() {
        let model = Model::new(tiny(), 4).unwrap();
        assert!(matches!(
            train(model, &[], None, &TrainConfig::default()),
            Err(Error::EmptyDataset)
        ));
    }
}
