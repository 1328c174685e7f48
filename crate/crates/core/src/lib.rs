//! Knowledge-distillation workbench.
//!
//! Trains small convolutional and dense teachers, distills them into
//! students from labeled data, mismatched unlabeled stimulus or a mixture
//! of both, and measures stimulus complexity from first-layer activations.

pub mod arch;
pub mod cli;
pub mod complexity;
pub mod datasets;
pub mod distill;
pub mod error;
pub mod layers;
pub mod losses;
pub mod network;
pub mod tensor;

pub use arch::{count_params, parse_arch, ArchSpec, LayerSpec, Shape3};
pub use error::{KdError, Result};
pub use network::Network;
pub use tensor::{Real, Tensor};
