use crate::{LepmError, Result};

/// Dimensionless couplings in units of the x-exchange: anisotropy `gamma`,
/// z-coupling `delta` and dissipation strength `big_gamma`.
///
/// Only squares of the parameters enter the spectra, so a negative
/// `big_gamma` is replaced by its absolute value. `gamma` and `delta` keep
/// their sign because the Hamiltonian itself depends on it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub gamma: f64,
    pub delta: f64,
    pub big_gamma: f64,
}

impl ModelParams {
    pub fn new(gamma: f64, delta: f64, big_gamma: f64) -> Result<Self> {
        if !(gamma.is_finite() && delta.is_finite() && big_gamma.is_finite()) {
            return Err(LepmError::InvalidParams(format!(
                "non-finite value in (gamma={gamma}, delta={delta}, Gamma={big_gamma})"
            )));
        }
        Ok(Self {
            gamma,
            delta,
            big_gamma: big_gamma.abs(),
        })
    }

    /// `γ²`
    pub fn x(&self) -> f64 {
        self.gamma * self.gamma
    }

    /// `Δ²`
    pub fn y(&self) -> f64 {
        self.delta * self.delta
    }

    /// `Γ²`
    pub fn z(&self) -> f64 {
        self.big_gamma * self.big_gamma
    }

    pub fn with_gamma(self, gamma: f64) -> Result<Self> {
        Self::new(gamma, self.delta, self.big_gamma)
    }

    pub fn with_delta(self, delta: f64) -> Result<Self> {
        Self::new(self.gamma, delta, self.big_gamma)
    }

    pub fn with_big_gamma(self, big_gamma: f64) -> Result<Self> {
        Self::new(self.gamma, self.delta, big_gamma)
    }
}
