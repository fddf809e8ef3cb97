use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("medium parameters must be positive and finite (c = {c}, tau = {tau})")]
pub struct MediumError {
    pub c: f64,
    pub tau: f64,
}

/// Wave-front velocity `c` and relaxation time `τ` of the medium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediumParams {
    c: f64,
    tau: f64,
}

impl MediumParams {
    pub fn new(c: f64, tau: f64) -> Result<Self, MediumError> {
        if c.is_finite() && tau.is_finite() && c > 0.0 && tau > 0.0 {
            Ok(Self { c, tau })
        } else {
            Err(MediumError { c, tau })
        }
    }

    /// `c = τ = 1`: every output is already in non-dimensional units.
    pub fn unit() -> Self {
        Self { c: 1.0, tau: 1.0 }
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Characteristic length `c·τ`.
    pub fn length_scale(&self) -> f64 {
        self.c * self.tau
    }
}

impl Default for MediumParams {
    fn default() -> Self {
        Self::unit()
    }
}
