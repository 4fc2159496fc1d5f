//! Robust generalized adaptive filtering.
//!
//! One parameterized cost (RGA) covers LMS, LMF, LMP, the sign algorithm,
//! LMLS/RLMLS and MCC/GMCC as limit cases. On top of it sit an asymmetric
//! variant for skewed noise (NARGA) and a kernel-recursive filter for
//! nonlinear prediction (KRNRGA), along with the noise generators, Chua
//! circuit series and Monte Carlo harness used to evaluate them.

pub mod chua;
pub mod cost;
pub mod error;
pub mod experiments;
pub mod filters;
pub mod linalg;
pub mod noise;
pub mod rng;

pub use error::{Error, Result};

/// Library version recorded in run metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
