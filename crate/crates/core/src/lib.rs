//! Quantile expansions for Pareto-type tails and asymptotic expansions of
//! moments of the largest order statistics.

pub mod beta;
pub mod catalog;
pub mod closed_forms;
pub mod error;
pub mod inversion;
pub mod moments;
pub mod oracle;
pub mod quantile;
pub mod scalar;
pub mod series;
pub mod special;
pub mod typos;

pub use error::{Error, Result};
pub use scalar::{Exact, Scalar};
