//! Low-rank map completion and prediction-aided coverage planning.
//!
//! A partially observed feature map is treated as a matrix and completed by
//! nuclear-norm regularized soft thresholding ([`matcomp`]). Maze maps,
//! encodings and the map file format live in [`mapmodel`]; robot and static
//! observation models in [`sensing`]; coverage planners in [`planner`]; the
//! closed-loop simulator and accuracy metrics in [`sim`]; and the experiment
//! harness behind the `lrmc` binary in [`cli`].

pub mod cli;
pub mod error;
pub mod linalg;
pub mod mapmodel;
pub mod matcomp;
pub mod planner;
pub mod rng;
pub mod sensing;
pub mod sim;

pub use error::{Error, Result};
pub use linalg::DenseMatrix;
