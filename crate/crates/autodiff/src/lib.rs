//! Reverse-mode differentiation engine for the small 1D convolutional and
//! dense networks used across this workspace.
//!
//! Networks are sequential layer stacks built from [`LayerSpec`] values.
//! Everything runs in double precision; weight init, dropout, and any other
//! stochastic behaviour draw from seeded SplitMix64 streams so training is
//! reproducible bit-for-bit.

pub mod error;
pub mod gradcheck;
pub mod init;
pub mod layer;
pub mod layers;
pub mod loss;
pub mod network;
pub mod optim;
pub mod tensor;

pub use error::AutodiffError;
pub use gradcheck::{grad_check, GradCheckConfig, GradCheckReport};
pub use layer::{Layer, LayerSpec, Mode, Padding, Pass};
pub use network::{Checkpoint, Network};
pub use optim::Adam;
pub use tensor::Tensor;
