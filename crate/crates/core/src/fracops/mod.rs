//! Fractional operators: the quantum Riesz operator acting through a
//! momentum-space representation, the Riesz derivative on a sampled grid,
//! and the Caputo derivative with its Laplace-transform property.

mod caputo;
mod riesz;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

pub use caputo::{caputo_derivative, caputo_laplace_check, caputo_laplace_sides};
pub use riesz::{quantum_riesz_apply, riesz_apply_grid, Boundary, GridRiesz, SpectralFunction};

/// Uniformly spaced samples `samples[k] = f(domain_start + k * spacing)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridFunction {
    pub samples: Vec<Complex64>,
    pub spacing: f64,
    pub domain_start: f64,
}

impl GridFunction {
    pub fn new(samples: Vec<Complex64>, spacing: f64, domain_start: f64) -> Result<Self> {
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(Error::domain("grid spacing must be positive"));
        }
        if samples.len() < 4 {
            return Err(Error::domain("a grid function needs at least 4 samples"));
        }
        Ok(Self {
            samples,
            spacing,
            domain_start,
        })
    }

    /// Samples `f` at `n` points starting at `start`.
    pub fn sample<F: Fn(f64) -> Complex64>(f: F, start: f64, spacing: f64, n: usize) -> Result<Self> {
        Self::new((0..n).map(|k| f(start + k as f64 * spacing)).collect(), spacing, start)
    }

    /// Real-valued variant of [`GridFunction::sample`].
    pub fn sample_real<F: Fn(f64) -> f64>(f: F, start: f64, spacing: f64, n: usize) -> Result<Self> {
        Self::sample(|x| Complex64::new(f(x), 0.0), start, spacing, n)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn point(&self, k: usize) -> f64 {
        self.domain_start + k as f64 * self.spacing
    }

    pub fn end(&self) -> f64 {
        self.point(self.len() - 1)
    }
}
