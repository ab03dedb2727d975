//! Multi-curve interest-rate analytics: curve bootstrapping, forward basis,
//! quanto adjustments, vanilla pricing and delta hedging.

pub mod basis;
pub mod credit;
pub mod bootstrap;
pub mod curve;
pub mod error;
pub mod market;
pub mod pricer;
pub mod portfolio;
pub mod quanto;
pub mod risk;
pub mod solver;
pub mod timegrid;

pub use error::{Error, Result};
