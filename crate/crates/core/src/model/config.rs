use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::pyramid_width;

/// One convolution followed by ReLU and 2×2/stride-2 max pooling.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvGroup {
    pub kernel: usize,
    pub out_channels: usize,
}

/// How a graph becomes the network input.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum InputMode {
    /// The full `n × n` adjacency matrix, unresized.
    #[default]
    Native,
    /// Rows/columns randomly deleted or zero-padded to `width × width`.
    Resize { width: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub conv_groups: Vec<ConvGroup>,
    pub spp_levels: Vec<usize>,
    /// Dense layer widths from the pyramid vector to the output curve,
    /// inclusive of both ends.
    pub fc_widths: Vec<usize>,
    #[serde(default)]
    pub input: InputMode,
}

impl Default for ModelConfig {
    /// Six conv groups (7/64, 5/64, 3/128, 3/128, 3/256, 3/256), pyramid
    /// levels 1, 2, 4 and dense layers 5376 → 1024 → 1024 → 256.
    fn default() -> Self {
        let groups = [(7, 64), (5, 64), (3, 128), (3, 128), (3, 256), (3, 256)];
        Self::from_groups(&groups, &[1024, 1024], 256)
    }
}

impl ModelConfig {
    /// Desk-scale preset: four groups ending in 64 channels (pyramid width
    /// 1344), two hidden layers of 512.
    pub fn reduced(output_len: usize) -> Self {
        let groups = [(7, 16), (5, 16), (3, 32), (3, 64)];
        Self::from_groups(&groups, &[512, 512], output_len)
    }

    pub fn from_groups(groups: &[(usize, usize)], hidden: &[usize], output_len: usize) -> Self {
        let conv_groups: Vec<ConvGroup> = groups
            .iter()
            .map(|&(kernel, out_channels)| ConvGroup {
                kernel,
                out_channels,
            })
            .collect();
        let spp_levels = vec![1, 2, 4];
        let last = conv_groups.last().map_or(1, |g| g.out_channels);
        let mut fc_widths = vec![pyramid_width(&spp_levels, last)];
        fc_widths.extend_from_slice(hidden);
        fc_widths.push(output_len);
        Self {
            conv_groups,
            spp_levels,
            fc_widths,
            input: InputMode::Native,
        }
    }

    pub fn with_input(mut self, input: InputMode) -> Self {
        self.input = input;
        self
    }

    /// Named preset: `default` or `reduced` (optionally `reduced:<M>`).
    pub fn preset(name: &str) -> Result<Self> {
        match name.split_once(':') {
            None if name == "default" => Ok(Self::default()),
            None if name == "reduced" => Ok(Self::reduced(128)),
            Some(("reduced", m)) | Some(("default", m)) => {
                let m: usize = m
                    .parse()
                    .map_err(|_| Error::InvalidConfig(format!("bad output length in `{name}`")))?;
                let mut c = if name.starts_with("reduced") {
                    Self::reduced(m)
                } else {
                    Self::default()
                };
                *c.fc_widths.last_mut().expect("nonempty") = m;
                Ok(c)
            }
            _ => Err(Error::InvalidConfig(format!("unknown preset `{name}`"))),
        }
    }

    /// Length `M` of the predicted curve.
    pub fn output_len(&self) -> usize {
        self.fc_widths.last().copied().unwrap_or(0)
    }

    /// `p = Σ levels²`.
    pub fn total_bins(&self) -> usize {
        self.spp_levels.iter().map(|l| l * l).sum()
    }

    /// Channels `L` of the last convolution.
    pub fn last_channels(&self) -> usize {
        self.conv_groups.last().map_or(1, |g| g.out_channels)
    }

    /// Smallest accepted `n`: each pooling halves the map, which must stay
    /// at least 1×1.
    pub fn min_input_size(&self) -> usize {
        1 << self.conv_groups.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.spp_levels.is_empty() || self.spp_levels.contains(&0) {
            return Err(Error::InvalidConfig(format!(
                "pyramid levels {:?}",
                self.spp_levels
            )));
        }
        if self.conv_groups.iter().any(|g| g.kernel == 0 || g.out_channels == 0) {
            return Err(Error::InvalidConfig("zero-sized conv group".into()));
        }
        if self.fc_widths.len() < 2 || self.fc_widths.contains(&0) {
            return Err(Error::InvalidConfig(format!(
                "dense widths {:?}",
                self.fc_widths
            )));
        }
        let expected = self.total_bins() * self.last_channels();
        if self.fc_widths[0] != expected {
            return Err(Error::InvalidConfig(format!(
                "first dense layer takes {} inputs but the pyramid yields {expected}",
                self.fc_widths[0]
            )));
        }
        if self.output_len() < 2 {
            return Err(Error::InvalidConfig("output length must be at least 2".into()));
        }
        if let InputMode::Resize { width, .. } = self.input {
            if width < self.min_input_size() {
                return Err(Error::InvalidConfig(format!(
                    "resize width {width} is below the minimum input size {}",
                    self.min_input_size()
                )));
            }
        }
        Ok(())
    }
}

/// Adam with gradient accumulation over `accumulation` samples per step.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub lr: f32,
    pub beta1: f32,
    pub beta2: f32,
    pub eps: f32,
    pub epochs: usize,
    pub accumulation: usize,
    pub seed: u64,
    /// Stop after this many epochs without a better selection ξ.
    pub patience: Option<usize>,
    /// Stop as soon as the selection ξ falls below this value.
    pub stop_below: Option<f64>,
    /// Evaluate the selection ξ every this many epochs.
    pub eval_every: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            lr: 1e-4,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            epochs: 50,
            accumulation: 8,
            seed: 0,
            patience: None,
            stop_below: None,
            eval_every: 1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_widths() {
        let d = ModelConfig::default();
        assert_eq!(d.fc_widths, vec![5376, 1024, 1024, 256]);
        assert_eq!(d.total_bins(), 21);
        assert_eq!(d.min_input_size(), 64);
        d.validate().unwrap();
        let r = ModelConfig::reduced(128);
        assert_eq!(r.fc_widths[0], 21 * 64);
        assert_eq!(r.fc_widths[0], 1344);
        assert_eq!(r.min_input_size(), 16);
        assert_eq!(r.output_len(), 128);
        assert_eq!(ModelConfig::preset("reduced:64").unwrap().output_len(), 64);
        assert!(ModelConfig::preset("huge").is_err());
    }

    #[test]
    fn inconsistent_widths_rejected() {
        let mut c = ModelConfig::reduced(32);
        c.fc_widths[0] = 1000;
        assert!(matches!(c.validate(), Err(Error::InvalidConfig(_))));
        let c = ModelConfig::reduced(32).with_input(InputMode::Resize { width: 8, seed: 0 });
        assert!(c.validate().is_err());
    }
}
