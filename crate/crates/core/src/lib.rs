//! Spectra, exceptional points and relaxation dynamics of two exchange-coupled
//! qubits with one of them pumped by a dissipative channel.
//!
//! Units are dimensionless with the x-exchange coupling and ħ set to one.

pub mod dynamics;
mod error;
pub mod lepm;
pub mod model;
mod params;
pub mod spectra;

pub use error::{LepmError, Result};
pub use params::ModelParams;
