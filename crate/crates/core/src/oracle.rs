//! Reference solver: Chebyshev collocation of the coupled two-point problem
//!
//! ```text
//! (D^2 - a^2)^2 w = a^2 Gr theta,    (D^2 - a^2) theta = -Pr (N1 - N x) w,
//! w = Dw = theta = 0 at x = 0, 1.
//! ```
//!
//! `w` is carried in clamped form (see [`crate::chebyshev`]) and `theta` with
//! Dirichlet rows removed. Eliminating `theta` leaves the standard eigenproblem
//! `-a^2 Pr L4^-1 L2^-1 F w = (1 / Gr) w`, which has no spurious infinite
//! eigenvalues. Each solve is repeated at twice the resolution to report
//! grid convergence.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::chebyshev::ChebGrid;
use crate::eigen::largest_positive_real;
use crate::error::{Error, Result};
use crate::model::FlowParams;

pub const DEFAULT_RESOLUTION: usize = 32;
pub const MIN_RESOLUTION: usize = 32;

/// Relative disagreement between the two resolutions above which a result
/// is flagged as not converged.
pub const CONVERGENCE_TOLERANCE: f64 = 1e-3;

/// Nominal order used for the two-level extrapolation. The collocation error
/// decays spectrally, so the correction is far below this order's prediction.
const EXTRAPOLATION_ORDER: i32 = 4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    /// Smallest positive Ra at `grid_points`.
    pub rayleigh: f64,
    pub grid_points: usize,
    /// Ra at twice the resolution.
    pub refined_rayleigh: f64,
    /// Two-level extrapolation from `rayleigh` and `refined_rayleigh`.
    pub richardson_estimate: f64,
    /// Largest wall value of `w`, `Dw` or `theta`, relative to `max |w|`.
    pub max_bc_violation: f64,
    pub converged: bool,
}

/// Eigenfunction pair on the collocation grid, normalized to `max |w| = 1`.
#[derive(Debug, Clone)]
pub struct OracleProfile {
    pub rayleigh: f64,
    grid: ChebGrid,
    w: Vec<f64>,
    theta: Vec<f64>,
}

impl OracleProfile {
    /// Interior collocation nodes, descending.
    pub fn nodes(&self) -> Vec<f64> {
        self.grid.interior_x()
    }

    pub fn w_nodes(&self) -> &[f64] {
        &self.w
    }

    pub fn theta_nodes(&self) -> &[f64] {
        &self.theta
    }

    pub fn w_at(&self, x: f64) -> f64 {
        self.grid.interpolate_clamped(&self.w, x)
    }

    pub fn theta_at(&self, x: f64) -> f64 {
        self.grid.interpolate_dirichlet(&self.theta, x)
    }

    /// `Dw` at `x = 0` and `x = 1`.
    pub fn wall_slopes(&self) -> (f64, f64) {
        let (at_one, at_zero) = self.grid.clamped_wall_slopes(&self.w);
        (at_zero, at_one)
    }

    /// Samples `(w, theta)` at arbitrary points of `[0, 1]`.
    pub fn sample(&self, xs: &[f64]) -> (Vec<f64>, Vec<f64>) {
        (xs.iter().map(|&x| self.w_at(x)).collect(), xs.iter().map(|&x| self.theta_at(x)).collect())
    }
}

struct Collocated {
    rayleigh: f64,
    grid: ChebGrid,
    w: DVector<f64>,
    theta: DVector<f64>,
}

fn collocate(params: &FlowParams, n: usize) -> Result<Collocated> {
    let grid = ChebGrid::new(n);
    let m = grid.interior_len();
    let a2 = params.a_sq;
    let eye = DMatrix::<f64>::identity(m, m);
    let d2 = grid.dirichlet_d2();
    let l4 = grid.clamped_d4() - &d2 * (2.0 * a2) + &eye * (a2 * a2);
    let l2 = d2 - &eye * a2;
    let weight = DMatrix::from_diagonal(&DVector::from_iterator(
        m,
        grid.interior_x().into_iter().map(|x| params.weight(x)),
    ));

    let l2_lu = l2.lu();
    let l4_lu = l4.lu();
    let singular = || Error::numeric(format!("singular collocation operator at resolution {n}"));
    let inner = l2_lu.solve(&weight).ok_or_else(singular)?;
    let op = l4_lu.solve(&inner).ok_or_else(singular)? * (-a2 * params.pr);

    let pair = largest_positive_real(&op)?
        .ok_or(Error::NoNeutralThreshold { a_sq: a2, n_rate: params.n_rate })?;
    let grashof = 1.0 / pair.value;

    let mut w = pair.vector;
    let pivot = w.iter().copied().fold(0.0f64, |acc, v| if v.abs() > acc.abs() { v } else { acc });
    w /= pivot;
    let theta = l2_lu.solve(&(&weight * &w)).ok_or_else(singular)? * (-params.pr);
    Ok(Collocated { rayleigh: grashof * params.pr, grid, w, theta })
}

fn check_resolution(resolution: usize) -> Result<()> {
    if resolution < MIN_RESOLUTION {
        return Err(Error::domain(format!("oracle resolution must be at least {MIN_RESOLUTION}, got {resolution}")));
    }
    Ok(())
}

pub fn oracle_rayleigh(params: &FlowParams, resolution: usize) -> Result<OracleResult> {
    check_resolution(resolution)?;
    let coarse = collocate(params, resolution)?;
    let fine = collocate(params, 2 * resolution)?;

    let factor = 2f64.powi(EXTRAPOLATION_ORDER) - 1.0;
    let richardson = fine.rayleigh + (fine.rayleigh - coarse.rayleigh) / factor;
    let disagreement = (fine.rayleigh - coarse.rayleigh).abs() / fine.rayleigh.abs();

    let (slope_one, slope_zero) = coarse.grid.clamped_wall_slopes(coarse.w.as_slice());
    let wmax = coarse.w.amax();
    let theta_walls = coarse.grid.interpolate_dirichlet(coarse.theta.as_slice(), 0.0).abs()
        + coarse.grid.interpolate_dirichlet(coarse.theta.as_slice(), 1.0).abs();
    let w_walls = coarse.grid.interpolate_clamped(coarse.w.as_slice(), 0.0).abs()
        + coarse.grid.interpolate_clamped(coarse.w.as_slice(), 1.0).abs();
    let max_bc_violation = [slope_one.abs(), slope_zero.abs(), theta_walls, w_walls]
        .into_iter()
        .fold(0.0, f64::max)
        / wmax;

    Ok(OracleResult {
        rayleigh: coarse.rayleigh,
        grid_points: resolution,
        refined_rayleigh: fine.rayleigh,
        richardson_estimate: richardson,
        max_bc_violation,
        converged: disagreement <= CONVERGENCE_TOLERANCE,
    })
}

pub fn oracle_eigenfunction(params: &FlowParams, resolution: usize) -> Result<OracleProfile> {
    check_resolution(resolution)?;
    let c = collocate(params, resolution)?;
    Ok(OracleProfile {
        rayleigh: c.rayleigh,
        grid: c.grid,
        w: c.w.as_slice().to_vec(),
        theta: c.theta.as_slice().to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn classical_rigid_rigid_value() {
        let p = FlowParams::from_wavenumber(0.0, 3.117).unwrap();
        let r = oracle_rayleigh(&p, 32).unwrap();
        assert!((r.rayleigh - 1707.762).abs() < 0.01, "{}", r.rayleigh);
        assert!(r.converged);
        assert!((r.rayleigh - r.richardson_estimate).abs() / r.richardson_estimate <= 1e-4);
        assert!(r.max_bc_violation <= 1e-8);
    }

    #[test]
    fn prandtl_number_does_not_change_ra() {
        let r1 = oracle_rayleigh(&FlowParams::with_prandtl(0.0, 9.711, 1.0).unwrap(), 32).unwrap();
        let r7 = oracle_rayleigh(&FlowParams::with_prandtl(0.0, 9.711, 7.0).unwrap(), 32).unwrap();
        assert_relative_eq!(r1.rayleigh, r7.rayleigh, max_relative = 1e-10);
    }

    #[test]
    fn rejects_coarse_grids() {
        let p = FlowParams::new(0.0, 9.711).unwrap();
        assert!(matches!(oracle_rayleigh(&p, 16), Err(Error::Domain(_))));
    }

    #[test]
    fn eigenfunction_symmetry_and_walls() {
        let f = oracle_eigenfunction(&FlowParams::new(0.0, 9.711).unwrap(), 32).unwrap();
        let w = f.w_nodes();
        let n = w.len();
        assert_eq!(w.iter().fold(0.0f64, |m, v| m.max(v.abs())), 1.0);
        for i in 0..n {
            assert!((w[i] - w[n - 1 - i]).abs() <= 1e-6);
        }
        let (s0, s1) = f.wall_slopes();
        assert!(s0.abs() <= 1e-8 && s1.abs() <= 1e-8);
        assert!(f.w_at(0.0).abs() <= 1e-8 && f.theta_at(1.0).abs() <= 1e-8);

        let g = oracle_eigenfunction(&FlowParams::new(10.0, 12.0).unwrap(), 32).unwrap();
        let (t1, t3) = (g.theta_at(0.25).abs(), g.theta_at(0.75).abs());
        assert!((t1 - t3).abs() / t1.max(t3) > 1e-3);
    }
}
