//! A small convolutional network with hand-written backward passes.
//!
//! [`layers`] holds the building blocks (convolution, 2x2 max-pooling, ReLU,
//! dense, softmax cross-entropy), each a forward function plus a backward
//! function returning input and parameter gradients. [`ctn`] stacks them into
//! the CTN classifier and [`train`] fits it with minibatch SGD + momentum.
//!
//! Activations and gradients are `f64`; stored model parameters are `f32`.

pub mod ctn;
pub mod layers;
pub mod tensor;
pub mod train;

pub use ctn::{CtnArch, CtnModel};
pub use tensor::Tensor4;
pub use train::{evaluate, train_ctn, EpochStats, Sample, TrainConfig};
