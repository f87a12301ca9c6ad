pub mod act;
pub mod conv;
pub mod dense;
pub mod dropout;
pub mod norm;
pub mod pool;
pub mod shape;

pub use act::{LeakyRelu, Relu, Sigmoid, Tanh};
pub use conv::{Conv1d, ConvTranspose1d};
pub use dense::Dense;
pub use dropout::Dropout;
pub use norm::BatchNorm1d;
pub use pool::{AdaptiveAvgPool1d, MaxPool1d, Upsample1d, ZeroPad1d};
pub use shape::{Flatten, Reshape};
