//! Physical parameters, the conduction-state temperature profile and the
//! mapping from box geometry to horizontal wavenumbers.
//!
//! Two vertical frames are in use: the physical frame `z` in
//! `[-1/2, 1/2]` (or `[-h/2, h/2]` dimensionally) and the translated frame
//! `x = z + 1/2` in `[0, 1]` used by every solver.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Conduction (basic) state of a layer of depth `h` with a uniform heat source.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasicState {
    /// Temperature at the lower wall, z = -h/2.
    pub theta_bottom: f64,
    /// Temperature drop from the lower to the upper wall.
    pub delta_theta: f64,
    pub h: f64,
    /// Heating rate.
    pub eta: f64,
    /// Thermal conductivity.
    pub kappa: f64,
}

impl BasicState {
    pub fn new(theta_bottom: f64, delta_theta: f64, h: f64, eta: f64, kappa: f64) -> Result<Self> {
        if !(h > 0.0) || !(kappa > 0.0) {
            return Err(Error::domain(format!(
                "layer depth and conductivity must be positive (h = {h}, k = {kappa})"
            )));
        }
        Ok(Self { theta_bottom, delta_theta, h, eta, kappa })
    }
}

/// Potential temperature of the conduction state at height `z`.
///
/// The quadratic correction is `(eta / 2k) (z^2 - (h/2)^2)`, which vanishes at
/// both walls so the wall temperatures are `theta_bottom` and
/// `theta_bottom - delta_theta`.
pub fn basic_state_temperature(z: f64, bs: &BasicState) -> Result<f64> {
    let half = 0.5 * bs.h;
    if !(z.abs() <= half) {
        return Err(Error::domain(format!("z = {z} outside [-{half}, {half}]")));
    }
    Ok(bs.theta_bottom - bs.delta_theta / bs.h * (z + half)
        + bs.eta / (2.0 * bs.kappa) * (z * z - half * half))
}

/// Dimensionless control parameters of the marginal-stability problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowParams {
    /// Heating (cooling) rate parameter N.
    pub n_rate: f64,
    /// Squared horizontal wavenumber a^2.
    pub a_sq: f64,
    /// Prandtl number. The threshold depends only on Ra = Gr * Pr.
    pub pr: f64,
}

impl FlowParams {
    pub fn new(n_rate: f64, a_sq: f64) -> Result<Self> {
        Self::with_prandtl(n_rate, a_sq, 1.0)
    }

    pub fn with_prandtl(n_rate: f64, a_sq: f64, pr: f64) -> Result<Self> {
        if !n_rate.is_finite() {
            return Err(Error::domain(format!("N must be finite, got {n_rate}")));
        }
        if !(a_sq > 0.0) || !a_sq.is_finite() {
            return Err(Error::domain(format!("a^2 must be positive and finite, got {a_sq}")));
        }
        if !(pr > 0.0) || !pr.is_finite() {
            return Err(Error::domain(format!("Pr must be positive and finite, got {pr}")));
        }
        Ok(Self { n_rate, a_sq, pr })
    }

    /// Parameters from the wavenumber `a` rather than its square.
    pub fn from_wavenumber(n_rate: f64, a: f64) -> Result<Self> {
        if !(a > 0.0) {
            return Err(Error::domain(format!("wavenumber must be positive, got {a}")));
        }
        Self::new(n_rate, a * a)
    }

    pub fn a(&self) -> f64 {
        self.a_sq.sqrt()
    }

    /// N1 = 1 + N/2, the value of the coupling weight at the lower wall.
    pub fn n1(&self) -> f64 {
        1.0 + self.n_rate / 2.0
    }

    /// Coupling weight N1 - N x of the translated frame.
    pub fn weight(&self, x: f64) -> f64 {
        self.n1() - self.n_rate * x
    }

    /// Grashof number matching a Rayleigh number at this Prandtl number.
    pub fn grashof(&self, rayleigh: f64) -> f64 {
        rayleigh / self.pr
    }
}

/// Box geometry: cell counts and aspect ratios L/H, l/H.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxSpec {
    pub m_cells: u32,
    pub n_cells: u32,
    pub aspect_x: f64,
    pub aspect_y: f64,
}

/// Returns `(m, n, a^2)` with `m = 2 pi m' / a1`, `n = 2 pi n' / a2`.
pub fn wavenumbers_from_box(b: &BoxSpec) -> Result<(f64, f64, f64)> {
    if b.m_cells < 1 || b.n_cells < 1 {
        return Err(Error::domain("cell counts must be at least 1"));
    }
    if !(b.aspect_x > 0.0) || !(b.aspect_y > 0.0) {
        return Err(Error::domain(format!(
            "aspect ratios must be positive (got {}, {})",
            b.aspect_x, b.aspect_y
        )));
    }
    let m = 2.0 * PI * f64::from(b.m_cells) / b.aspect_x;
    let n = 2.0 * PI * f64::from(b.n_cells) / b.aspect_y;
    Ok((m, n, m * m + n * n))
}

/// Physical frame z in [-1/2, 1/2] to the translated frame x in [0, 1].
pub fn z_to_x(z: f64) -> f64 {
    z + 0.5
}

pub fn x_to_z(x: f64) -> f64 {
    x - 0.5
}
