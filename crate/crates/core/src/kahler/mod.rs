//! Symplectic potentials on Delzant polytopes in floating point: Hessians,
//! Abreu's scalar curvature, toric energy functionals, and ray probes.

mod abreu;
mod energy;
mod potential;
pub mod quadrature;

pub use abreu::{
    abreu_scalar, duality_residual, interior_grid, inverse_gradient, inverse_hessian, legendre_hessian,
    scalar_samples, ScalSummary, ScalarSamples,
};
pub use energy::{
    energy_e, energy_m, j_proxy, ray_energy, EnergyContext, Integrand, RayReport, ReferenceContext,
};
pub use potential::{Monomial, SymplecticPotential};

use crate::error::{Error, Result};

/// Sampling and discretisation parameters for the numerical operations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    /// Minimum distance to ∂P for pointwise curvature evaluation.
    pub margin: f64,
    /// Spacing of the sample grid for curvature evaluation.
    pub spacing: f64,
    /// Finite-difference step as a fraction of the distance to ∂P.
    pub fd_step: f64,
    /// Number of geometric refinement levels towards each end of a quadrature interval.
    pub grade: u32,
    /// Gauss–Legendre order per quadrature interval.
    pub order: usize,
}

impl GridSpec {
    /// Defaults sized so that a full evaluation stays at desk scale in dimension `n`.
    pub fn for_dim(n: usize) -> Self {
        let (grade, order) = match n {
            0 | 1 => (30, 8),
            2 => (20, 8),
            _ => (6, 4),
        };
        GridSpec {
            margin: 0.05,
            spacing: 0.05,
            fd_step: 0.01,
            grade,
            order,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.margin > 0.0) {
            return Err(Error::InvalidGrid("margin must be positive".into()));
        }
        if !(self.fd_step > 0.0 && self.fd_step < self.margin / 4.0) {
            return Err(Error::InvalidGrid(format!(
                "fd_step {} must lie in (0, margin/4 = {})",
                self.fd_step,
                self.margin / 4.0
            )));
        }
        if !(self.spacing > 0.0) {
            return Err(Error::InvalidGrid("spacing must be positive".into()));
        }
        if self.grade < 2 {
            return Err(Error::InvalidGrid("grade must be at least 2".into()));
        }
        if self.order == 0 {
            return Err(Error::InvalidGrid("quadrature order must be positive".into()));
        }
        Ok(())
    }
}

/// A quadrature value with an error estimate from a two-level comparison.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

impl Estimate {
    /// Combines the values at grade `m` and `m − 2` with a roundoff floor
    /// proportional to the absolute mass of the summands.
    pub fn from_levels(hi: f64, lo: f64, abs_mass: f64) -> Estimate {
        Estimate {
            value: hi,
            error: (hi - lo).abs() + 1e-12 * abs_mass.max(1.0),
        }
    }
}

/// Toric energies of a potential; all terms carry the `1/V` normalisation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergyReport {
    /// `E = −(1/V) ∫_P u`
    pub e: f64,
    /// `M = nonlinear_term + linear_term`
    pub m: f64,
    /// `−(1/V) ∫_P log det(u_ij)`
    pub nonlinear_term: f64,
    /// `(1/V) L(u)`
    pub linear_term: f64,
    pub error_estimate: f64,
    pub volume: f64,
}
