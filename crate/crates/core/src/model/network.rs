use rand::distr::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::{InputMode, ModelConfig};
use super::resize::resize_adjacency;
use crate::error::{Error, Result};
use crate::graph::{AdjacencyMatrix, Graph};
use crate::tensor::{Tape, Tensor, Var};

/// A named trainable tensor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Parameter {
    pub name: String,
    pub value: Tensor,
}

/// Conv trunk, spatial pyramid pooling and a dense head ending in a
/// hard-sigmoid.
///
/// Parameter order is fixed: for each conv group its kernel then bias, then
/// for each dense layer its weight (`[in, out]`) then bias.
#[derive(Clone, Debug, PartialEq)]
pub struct Model {
    config: ModelConfig,
    params: Vec<Parameter>,
}

/// Handles for one recorded forward pass.
pub(crate) struct Recorded {
    pub params: Vec<Var>,
    pub output: Var,
}

impl Model {
    /// He-uniform weights, zero biases, all drawn from `seed`.
    pub fn new(config: ModelConfig, seed: u64) -> Result<Self> {
        config.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut params = Vec::new();
        let mut cin = 1;
        for (i, g) in config.conv_groups.iter().enumerate() {
            let fan_in = cin * g.kernel * g.kernel;
            params.push(Parameter {
                name: format!("conv{i}.weight"),
                value: he_uniform(&[g.out_channels, cin, g.kernel, g.kernel], fan_in, &mut rng),
            });
            params.push(Parameter {
                name: format!("conv{i}.bias"),
                value: Tensor::zeros(&[g.out_channels]),
            });
            cin = g.out_channels;
        }
        for (i, w) in config.fc_widths.windows(2).enumerate() {
            params.push(Parameter {
                name: format!("fc{i}.weight"),
                value: he_uniform(&[w[0], w[1]], w[0], &mut rng),
            });
            params.push(Parameter {
                name: format!("fc{i}.bias"),
                value: Tensor::zeros(&[w[1]]),
            });
        }
        Ok(Self { config, params })
    }

    /// Rebuilds a model from stored parameters, checking every shape.
    pub fn from_parameters(config: ModelConfig, params: Vec<Parameter>) -> Result<Self> {
        let reference = Self::new(config, 0)?;
        if reference.params.len() != params.len() {
            return Err(Error::Shape(format!(
                "expected {} parameter tensors, got {}",
                reference.params.len(),
                params.len()
            )));
        }
        for (r, p) in reference.params.iter().zip(&params) {
            if r.name != p.name || r.value.shape() != p.value.shape() {
                return Err(Error::Shape(format!(
                    "parameter {} {:?} does not match {} {:?}",
                    p.name,
                    p.value.shape(),
                    r.name,
                    r.value.shape()
                )));
            }
        }
        Ok(Self {
            config: reference.config,
            params,
        })
    }

    pub fn config(&self) -> &ModelConfig {
        &self.config
    }

    pub fn parameters(&self) -> &[Parameter] {
        &self.params
    }

    pub fn parameters_mut(&mut self) -> &mut [Parameter] {
        &mut self.params
    }

    pub fn into_parameters(self) -> Vec<Parameter> {
        self.params
    }

    /// Total number of scalar weights and biases.
    pub fn parameter_count(&self) -> usize {
        self.params.iter().map(|p| p.value.len()).sum()
    }

    /// The matrix the network sees for `g`: the adjacency matrix itself in
    /// native mode, or a resized copy in resize mode. `salt` varies the
    /// resize draw (training passes the step, prediction passes 0).
    pub fn input_matrix(&self, g: &Graph, salt: u64) -> Result<AdjacencyMatrix> {
        let a = g.adjacency_matrix()?;
        self.prepare(a, salt)
    }

    pub(crate) fn prepare(&self, a: AdjacencyMatrix, salt: u64) -> Result<AdjacencyMatrix> {
        match self.config.input {
            InputMode::Native => {
                let min = self.config.min_input_size();
                if a.size() < min {
                    return Err(Error::GraphTooSmall { n: a.size(), min });
                }
                Ok(a)
            }
            InputMode::Resize { width, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(salt);
                Ok(resize_adjacency(&a, width, &mut rng).0)
            }
        }
    }

    /// Predicted fixed-length curve (length `M`, values in `[0, 1]`).
    pub fn forward(&self, g: &Graph) -> Result<Vec<f32>> {
        let a = self.input_matrix(g, 0)?;
        self.forward_matrix(&a)
    }

    /// Forward on an already prepared input matrix.
    pub fn forward_matrix(&self, a: &AdjacencyMatrix) -> Result<Vec<f32>> {
        let mut tape = Tape::new();
        let rec = self.record(&mut tape, a, false)?;
        Ok(tape.value(rec.output).data().to_vec())
    }

    /// Records the network on `tape`, with parameters tracked when `train`.
    pub(crate) fn record(&self, tape: &mut Tape, a: &AdjacencyMatrix, train: bool) -> Result<Recorded> {
        let n = a.size();
        let min = self.config.min_input_size();
        if n < min {
            return Err(Error::GraphTooSmall { n, min });
        }
        let params: Vec<Var> = self
            .params
            .iter()
            .map(|p| {
                if train {
                    tape.param(p.value.clone())
                } else {
                    tape.constant(p.value.clone())
                }
            })
            .collect();
        let mut x = tape.constant(Tensor::new(&[1, 1, n, n], a.to_f32())?);
        let groups = self.config.conv_groups.len();
        for (i, g) in self.config.conv_groups.iter().enumerate() {
            x = tape.conv2d(x, params[2 * i], params[2 * i + 1], g.kernel / 2)?;
            x = tape.relu(x);
            x = tape.maxpool2d(x)?;
        }
        x = tape.spp(x, &self.config.spp_levels)?;
        let layers = self.config.fc_widths.len() - 1;
        for j in 0..layers {
            let w = params[2 * (groups + j)];
            let b = params[2 * (groups + j) + 1];
            x = tape.dense(x, w, b)?;
            x = if j + 1 < layers {
                tape.relu(x)
            } else {
                tape.hard_sigmoid(x)
            };
        }
        Ok(Recorded { params, output: x })
    }
}

fn he_uniform(shape: &[usize], fan_in: usize, rng: &mut ChaCha8Rng) -> Tensor {
    let bound = (6.0 / fan_in as f32).sqrt();
    let dist = Uniform::new_inclusive(-bound, bound).expect("finite bound");
    let len = shape.iter().product();
    let data = (0..len).map(|_| dist.sample(rng)).collect();
    Tensor::new(shape, data).expect("shape matches length")
}
