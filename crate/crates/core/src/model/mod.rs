//! Spatial-pyramid-pooling CNN over adjacency matrices.
//!
//! The network emits a fixed-length curve of `M` points whatever the input
//! size. Ground-truth curves of length `n` are linearly resampled to `M` for
//! training, and predictions are resampled back to `n`.

mod adam;
mod checkpoint;
mod config;
mod network;
mod resample;
mod resize;
mod train;

pub use checkpoint::{ModelCheckpoint, TrainingMeta, FORMAT_VERSION, MAGIC};
pub use config::{ConvGroup, InputMode, ModelConfig, TrainConfig};
pub use network::{Model, Parameter};
pub use resample::resample_curve;
pub use resize::resize_adjacency;
pub use train::{
    dataset_fingerprint, mean_curve, mean_error, predict, predict_values, train, train_with, EpochStats,
    Sample, TrainReport,
};
