//! Adaptive filters: the linear RGA family and the kernel-recursive filters.

pub mod kernel;
pub mod linear;

pub use kernel::{KernelAlgorithm, KernelConfig, KernelModel, OmegaWeight, UpdateInfo};
pub use linear::{make_baseline, Algo, AlgorithmKind, FilterState, SampleIO};
