//! Wiener chaos propagators for linear stochastic evolution equations.

pub mod chaos;
pub mod cli;
pub mod config;
pub mod error;
pub mod io;
pub mod multiindex;
pub mod operators;
pub mod oracle;
pub mod propagator;

pub use error::{Error, Result};
