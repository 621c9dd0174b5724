//! Exact Siegel-Veech constants, Masur-Veech volumes and Lyapunov exponent
//! sums for strata of quadratic differentials.

pub mod cli;
pub mod config;
pub mod error;
pub mod exactnum;
pub mod families;
pub mod geometry;
pub mod reference;
pub mod strata;
pub mod svcore;
pub mod volumes;

pub use error::{Error, Result};
pub use exactnum::{PiValue, Rational};
