//! Topological-entropy reweighting and wedge mixup for imbalanced edge
//! classification.

pub mod config;
pub mod entropy;
pub mod error;
pub mod graph;
pub mod metrics;
pub mod mixup;
pub mod nn;
pub mod report;
pub mod reweight;
pub mod sparse;
pub mod tensor;
pub mod train;

pub use error::{Error, Result};
