//! Galerkin estimate of the threshold from admissible trial functions.
//!
//! `w` is expanded in clamped-clamped beam modes (`f = Df = 0` at both
//! walls) and `theta` in `sin(k pi x)`. Testing the velocity equation with
//! the beam modes and the temperature equation with the sines gives the
//! `2K x 2K` pencil
//!
//! ```text
//! [ A      0 ] [c]        [ 0  a^2 E ] [c]
//! [ -Pr C  D ] [d]  = Gr  [ 0    0   ] [d]
//! ```
//!
//! with `A_ij = int(phi_i'' phi_j'' + 2 a^2 phi_i' phi_j' + a^4 phi_i phi_j)`,
//! `E_ij = int phi_i sin(j pi x)`, `C_ij = int sin(i pi x)(N1 - N x) phi_j` and
//! `D = diag((j^2 pi^2 + a^2) / 2)`. For `N = 0` this is the Ritz method for a
//! symmetric definite problem and the estimate decreases with `K`.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::DMatrix;

use crate::eigen::largest_positive_real;
use crate::error::{Error, Result};
use crate::model::FlowParams;
use crate::quadrature::GaussLegendre;

/// Basis size used when none is requested.
pub const DEFAULT_BASIS_SIZE: usize = 2;

#[derive(Debug, Clone)]
pub struct VariationalBasis {
    size: usize,
    beams: Vec<BeamMode>,
    rule: GaussLegendre,
}

#[derive(Debug, Clone, Copy)]
struct BeamMode {
    lambda: f64,
    sigma: f64,
    /// `(cos l - sin l - e^-l) / (1 - e^-2l - 2 sin l e^-l)`; scales the growing exponential.
    grow: f64,
}

impl BeamMode {
    fn new(lambda: f64) -> Self {
        let em = (-lambda).exp();
        let g = lambda.cos() - lambda.sin() - em;
        let den = 1.0 - em * em - 2.0 * lambda.sin() * em;
        let grow = g / den;
        Self { lambda, sigma: 1.0 - 2.0 * grow * em, grow }
    }

    /// `d`-th derivative of `cosh - cos - sigma (sinh - sin)` at `x`, written
    /// with decaying exponentials only.
    fn eval(&self, x: f64, d: u32) -> f64 {
        let l = self.lambda;
        let scale = l.powi(d as i32);
        let e_plus = self.grow * (l * (x - 1.0)).exp();
        let e_minus = 0.5 * (1.0 + self.sigma) * (-l * x).exp();
        let parity = if d.is_multiple_of(2) { 1.0 } else { -1.0 };
        let phase = l * x + f64::from(d) * FRAC_PI_2;
        scale * (e_plus + parity * e_minus - phase.cos() + self.sigma * phase.sin())
    }
}

/// Roots of `cos(l) cosh(l) = 1`, one per interval `[n pi, (n + 1) pi]`.
fn beam_root(n: usize) -> f64 {
    let g = |l: f64| l.cos() - 1.0 / l.cosh();
    let (mut lo, mut hi) = (n as f64 * PI, (n + 1) as f64 * PI);
    let g_lo = g(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (g(mid) > 0.0) == (g_lo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

impl VariationalBasis {
    pub fn new(size: usize) -> Result<Self> {
        if size < 1 {
            return Err(Error::domain("basis size must be at least 1"));
        }
        let beams = (1..=size).map(|n| BeamMode::new(beam_root(n))).collect();
        let rule = GaussLegendre::new(64 + 8 * size, 0.0, 1.0);
        Ok(Self { size, beams, rule })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// `d`-th derivative of the `i`-th beam mode (0-based).
    pub fn beam(&self, i: usize, x: f64, d: u32) -> f64 {
        self.beams[i].eval(x, d)
    }

    pub fn beam_eigenvalue(&self, i: usize) -> f64 {
        self.beams[i].lambda
    }

    /// Largest wall value of any beam mode or its slope.
    pub fn boundary_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.size {
            for x in [0.0, 1.0] {
                let scale = self.beams[i].lambda;
                worst = worst.max(self.beam(i, x, 0).abs()).max(self.beam(i, x, 1).abs() / scale);
            }
        }
        worst
    }

    /// Gram matrix of the beam modes in `L2(0, 1)`.
    pub fn gram(&self) -> DMatrix<f64> {
        let vals = self.tabulate(0);
        DMatrix::from_fn(self.size, self.size, |i, j| self.dot(&vals[i], &vals[j], |_| 1.0))
    }

    /// 2-norm condition number of [`Self::gram`].
    pub fn gram_condition(&self) -> f64 {
        let sv = self.gram().singular_values();
        sv.max() / sv.min()
    }

    fn tabulate(&self, d: u32) -> Vec<Vec<f64>> {
        (0..self.size).map(|i| self.rule.nodes.iter().map(|&x| self.beam(i, x, d)).collect()).collect()
    }

    fn dot(&self, u: &[f64], v: &[f64], weight: impl Fn(f64) -> f64) -> f64 {
        self.rule
            .nodes
            .iter()
            .zip(&self.rule.weights)
            .zip(u.iter().zip(v))
            .map(|((&x, &wq), (a, b))| wq * weight(x) * a * b)
            .sum()
    }
}

/// Smallest positive Ra of the Galerkin pencil. Requires `K >= 2`.
pub fn variational_ra(params: &FlowParams, basis: &VariationalBasis) -> Result<f64> {
    let k = basis.size;
    if k < 2 {
        return Err(Error::domain("variational estimate needs at least two trial functions"));
    }
    let a2 = params.a_sq;
    let phi = basis.tabulate(0);
    let dphi = basis.tabulate(1);
    let ddphi = basis.tabulate(2);
    let sines: Vec<Vec<f64>> = (1..=k)
        .map(|j| basis.rule.nodes.iter().map(|&x| (j as f64 * PI * x).sin()).collect())
        .collect();

    let mut lhs = DMatrix::zeros(2 * k, 2 * k);
    let mut rhs = DMatrix::zeros(2 * k, 2 * k);
    for i in 0..k {
        for j in 0..k {
            let one = |_: f64| 1.0;
            lhs[(i, j)] = basis.dot(&ddphi[i], &ddphi[j], one)
                + 2.0 * a2 * basis.dot(&dphi[i], &dphi[j], one)
                + a2 * a2 * basis.dot(&phi[i], &phi[j], one);
            lhs[(k + i, j)] = -params.pr * basis.dot(&sines[i], &phi[j], |x| params.weight(x));
            rhs[(i, k + j)] = a2 * basis.dot(&phi[i], &sines[j], one);
        }
        let jpi = (i + 1) as f64 * PI;
        lhs[(k + i, k + i)] = 0.5 * (jpi * jpi + a2);
    }

    let reduced = lhs
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::numeric("singular variational stiffness matrix"))?;
    let pair = largest_positive_real(&reduced)?
        .ok_or(Error::NoNeutralThreshold { a_sq: a2, n_rate: params.n_rate })?;
    Ok(params.pr / pair.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::adaptive_integrate;

    #[test]
    fn beam_roots_match_known_values() {
        let b = VariationalBasis::new(4).unwrap();
        let known = [4.730_040_744_862_704, 7.853_204_624_095_838, 10.995_607_838_001_67, 14.137_165_491_257_46];
        for (i, k) in known.iter().enumerate() {
            assert!((b.beam_eigenvalue(i) - k).abs() < 1e-12);
        }
    }

    #[test]
    fn beam_modes_are_admissible_and_orthonormal() {
        let b = VariationalBasis::new(10).unwrap();
        assert!(b.boundary_residual() <= 1e-10, "{}", b.boundary_residual());
        assert!((b.gram_condition() - 1.0).abs() < 1e-8);
        // derivative consistency against an independent quadrature of phi'
        let i = 3;
        let integral = adaptive_integrate(|x| b.beam(i, x, 1), 0.0, 0.7, 1e-13);
        assert!((integral - (b.beam(i, 0.7, 0) - b.beam(i, 0.0, 0))).abs() < 1e-11);
    }

    #[test]
    fn needs_two_functions() {
        let p = FlowParams::new(0.0, 9.711).unwrap();
        assert!(variational_ra(&p, &VariationalBasis::new(1).unwrap()).is_err());
    }

    #[test]
    fn approaches_classical_value_from_above() {
        let p = FlowParams::new(0.0, 9.711).unwrap();
        let ra = variational_ra(&p, &VariationalBasis::new(10).unwrap()).unwrap();
        assert!((1707.76..=1707.762 * 1.01).contains(&ra), "{ra}");
    }
}
