//! Algebraic Wasserstein distances, Wasserstein stable ranks and metric
//! learning for persistence modules.

pub mod assignment;
pub mod barcode;
pub mod contour;
pub mod distance;
pub mod error;
pub mod harness;
pub mod learning;
pub mod norms;
mod par;
pub mod reduction;
pub mod stable_rank;

pub use barcode::{Bar, Barcode};
pub use contour::{Component, Contour, GaussianMixture};
pub use error::{Error, Result};
pub use norms::{p_norm, Exponent};
