//! Galerkin secular determinant for the marginal Rayleigh number.
//!
//! On the translated layer `x in [0, 1]` the temperature-like unknown is
//! written `theta = sum_k psi_k Theta_k`, where each `Theta_k` solves
//! `(D^2 - a^2)^3 Theta_k = (N1 - N x) sin(k pi x)` with
//! `Theta_k = (D^2 - a^2) Theta_k = D (D^2 - a^2) Theta_k = 0` at both walls.
//! Projecting `psi = -a^2 Ra theta` onto `sin(l pi x)` gives the pencil
//! `det(delta_kl / 2 - a^2 Ra M_kl) = 0`, so every positive eigenvalue `mu`
//! of `M` yields a threshold `Ra = 1 / (2 a^2 mu)`.
//!
//! The sixth-order problem in `theta` carries the adjoint boundary conditions
//! of the sixth-order problem in `w`; the two share their eigenvalues.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, Matrix6, Vector6};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::chebyshev::ChebGrid;
use crate::eigen::largest_positive_real;
use crate::error::{Error, Result};
use crate::model::FlowParams;

/// Truncation used when none is requested explicitly.
pub const DEFAULT_TRUNCATION: usize = 8;

/// Collocation resolution used to recover `w` from `theta`.
const RECONSTRUCTION_GRID: usize = 48;

fn sign(n: usize) -> f64 {
    if n.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `int_0^1 x sin(k pi x) sin(l pi x) dx`.
pub fn coupling_t(k: usize, l: usize) -> f64 {
    debug_assert!(k >= 1 && l >= 1);
    if k == l {
        return 0.25;
    }
    let (kf, lf) = (k as f64, l as f64);
    2.0 * kf * lf * (sign(k + l) - 1.0) / (PI * PI * (lf - kf).powi(2) * (lf + kf).powi(2))
}

/// `l [(-1)^(k+l) - 1] / (pi (l - k)(l + k))`, zero on the diagonal.
///
/// This is `-int_0^1 cos(k pi x) sin(l pi x) dx`; the minus sign is absorbed
/// into the `+ 6 k pi N / q * U_kl` term of the secular bracket.
pub fn coupling_u(k: usize, l: usize) -> f64 {
    debug_assert!(k >= 1 && l >= 1);
    if k == l {
        return 0.0;
    }
    let (kf, lf) = (k as f64, l as f64);
    lf * (sign(k + l) - 1.0) / (PI * (lf - kf) * (lf + kf))
}

/// Hyperbolic factor of an [`coupling_i`] integrand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hyperbolic {
    Cosh,
    Sinh,
}

/// `int_0^1 x^i e^(c x) dx` by upward recurrence; stable for `|c| > i`.
fn exp_moment(power: usize, c: Complex64) -> Complex64 {
    let e = c.exp();
    let mut v = (e - 1.0) / c;
    for n in 1..=power {
        v = (e - v * n as f64) / c;
    }
    v
}

/// `int_0^1 x^i cosh(a x) sin(l pi x) dx` (or with `sinh`), in closed form.
///
/// Evaluated as the imaginary part of `int x^i e^((+-a + i l pi) x) dx`.
pub fn coupling_i(l: usize, power: usize, family: Hyperbolic, a: f64) -> f64 {
    debug_assert!(l >= 1);
    let b = l as f64 * PI;
    let plus = exp_moment(power, Complex64::new(a, b));
    let minus = exp_moment(power, Complex64::new(-a, b));
    match family {
        Hyperbolic::Cosh => 0.5 * (plus.im + minus.im),
        Hyperbolic::Sinh => 0.5 * (plus.im - minus.im),
    }
}

/// Homogeneous-part coefficients of `Theta_k`:
/// `(a0 + a1 x + a2 x^2) cosh(a x) + (b0 + b1 x + b2 x^2) sinh(a x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParticularCoeffs {
    pub mode_k: usize,
    pub a: f64,
    pub n_rate: f64,
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
    pub b0: f64,
    pub b1: f64,
    pub b2: f64,
}

/// The six boundary conditions on `Theta_k`, unknowns ordered
/// `(A0, A1, A2, B0, B1, B2)`.
pub fn coefficient_system(k: usize, a: f64, n_rate: f64) -> (Matrix6<f64>, Vector6<f64>) {
    let kpi = k as f64 * PI;
    let q = kpi * kpi + a * a;
    let n1 = 1.0 + n_rate / 2.0;
    let (ch, sh) = (a.cosh(), a.sinh());
    let s = sign(k);
    let a2 = a * a;
    #[rustfmt::skip]
    let m = Matrix6::from_row_slice(&[
        1.0, 0.0,      0.0,                         0.0, 0.0,      0.0,
        ch,  ch,       ch,                          sh,  sh,       sh,
        0.0, 0.0,      1.0,                         0.0, a,        0.0,
        0.0, a * sh,   ch + 2.0 * a * sh,           0.0, a * ch,   sh + 2.0 * a * ch,
        0.0, a2,       0.0,                         0.0, 0.0,      3.0 * a,
        0.0, a2 * ch,  2.0 * a2 * ch + 3.0 * a * sh, 0.0, a2 * sh, 3.0 * a * ch + 2.0 * a2 * sh,
    ]);
    let c = 6.0 * kpi * n_rate / q;
    let rhs = Vector6::new(
        c,
        c * s,
        -2.0 * kpi * n_rate,
        -2.0 * kpi * n_rate * s,
        0.5 * n1 * kpi * q,
        0.5 * (n1 - n_rate) * kpi * s * q,
    );
    (m, rhs)
}

pub fn solve_particular_coeffs(k: usize, a: f64, n_rate: f64) -> Result<ParticularCoeffs> {
    if k < 1 {
        return Err(Error::domain("mode index k must be at least 1"));
    }
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::domain(format!("wavenumber must be positive, got {a}")));
    }
    let (m, rhs) = coefficient_system(k, a, n_rate);
    // The first equation pins A0; substitute it and solve for the other five.
    let a0 = rhs[0];
    let reduced = m.fixed_view::<5, 5>(1, 1).into_owned();
    let reduced_rhs = rhs.fixed_rows::<5>(1) - m.fixed_view::<5, 1>(1, 0) * a0;
    let x = reduced
        .lu()
        .solve(&reduced_rhs)
        .filter(|x| x.iter().all(|v| v.is_finite()))
        .ok_or_else(|| Error::numeric(format!("singular coefficient system for k = {k}, a = {a}")))?;
    Ok(ParticularCoeffs { mode_k: k, a, n_rate, a0, a1: x[0], a2: x[1], b0: x[2], b1: x[3], b2: x[4] })
}

impl ParticularCoeffs {
    fn as_vector(&self) -> Vector6<f64> {
        Vector6::new(self.a0, self.a1, self.a2, self.b0, self.b1, self.b2)
    }

    /// Largest equation residual relative to the right-hand-side norm.
    pub fn relative_residual(&self) -> f64 {
        let (m, rhs) = coefficient_system(self.mode_k, self.a, self.n_rate);
        let r = m * self.as_vector() - rhs;
        r.amax() / rhs.norm().max(f64::MIN_POSITIVE)
    }

    /// `k^2 pi^2 + a^2`.
    pub fn q(&self) -> f64 {
        let kpi = self.mode_k as f64 * PI;
        kpi * kpi + self.a * self.a
    }
}

/// `Theta_k(x)`. The expression is entire, so it may be evaluated outside `[0, 1]`.
pub fn theta_k_eval(x: f64, c: &ParticularCoeffs) -> f64 {
    let kpi = c.mode_k as f64 * PI;
    let q = c.q();
    let n1 = 1.0 + c.n_rate / 2.0;
    let ax = c.a * x;
    let homogeneous = (c.a0 + c.a1 * x + c.a2 * x * x) * ax.cosh() + (c.b0 + c.b1 * x + c.b2 * x * x) * ax.sinh();
    let forced = (n1 - c.n_rate * x) * (kpi * x).sin() - 6.0 * kpi * c.n_rate / q * (kpi * x).cos();
    -(homogeneous + forced) / (q * q * q)
}

/// Truncated secular matrix and the data it was built from.
#[derive(Debug, Clone)]
pub struct SecularAssembly {
    pub truncation: usize,
    /// `M_kl`, row `k - 1`, column `l - 1`.
    pub matrix: DMatrix<f64>,
    pub params: FlowParams,
    pub coeffs: Vec<ParticularCoeffs>,
}

pub fn assemble_secular_matrix(params: &FlowParams, truncation: usize) -> Result<SecularAssembly> {
    if truncation < 1 {
        return Err(Error::domain("truncation K must be at least 1"));
    }
    let a = params.a();
    let n = params.n_rate;
    let n1 = params.n1();
    let coeffs = (1..=truncation)
        .map(|k| solve_particular_coeffs(k, a, n))
        .collect::<Result<Vec<_>>>()?;

    // I^l_ij for every l, reused across rows
    let integrals: Vec<[f64; 6]> = (1..=truncation)
        .map(|l| {
            let ic = |p| coupling_i(l, p, Hyperbolic::Cosh, a);
            let is = |p| coupling_i(l, p, Hyperbolic::Sinh, a);
            [ic(0), ic(1), ic(2), is(0), is(1), is(2)]
        })
        .collect();

    let mut matrix = DMatrix::zeros(truncation, truncation);
    for (row, c) in coeffs.iter().enumerate() {
        let k = row + 1;
        let q = c.q();
        let cos_weight = 6.0 * k as f64 * PI * n / q;
        for (col, i) in integrals.iter().enumerate() {
            let l = col + 1;
            let mut bracket =
                c.a0 * i[0] + c.a1 * i[1] + c.a2 * i[2] + c.b0 * i[3] + c.b1 * i[4] + c.b2 * i[5];
            if k == l {
                bracket += 0.5 * n1;
            }
            if n != 0.0 {
                bracket += -n * coupling_t(k, l) + cos_weight * coupling_u(k, l);
            }
            matrix[(row, col)] = bracket / (q * q * q);
        }
    }
    if matrix.iter().any(|v| !v.is_finite()) {
        return Err(Error::numeric(format!(
            "non-finite secular matrix entry at a^2 = {}, N = {n}",
            params.a_sq
        )));
    }
    Ok(SecularAssembly { truncation, matrix, params: *params, coeffs })
}

/// Marginal state: Rayleigh number and Galerkin coefficients `psi_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeSolution {
    pub rayleigh: f64,
    /// Normalized so the largest-magnitude entry is `+1`.
    pub psi: Vec<f64>,
    pub params: FlowParams,
    pub truncation: usize,
    /// Complex-conjugate eigenvalue pairs of `M`, never used as thresholds.
    pub complex_pairs: usize,
}

impl ModeSolution {
    pub fn grashof(&self) -> f64 {
        self.params.grashof(self.rayleigh)
    }
}

pub fn smallest_rayleigh(asm: &SecularAssembly) -> Result<ModeSolution> {
    let p = asm.params;
    let pair = largest_positive_real(&asm.matrix)?
        .ok_or(Error::NoNeutralThreshold { a_sq: p.a_sq, n_rate: p.n_rate })?;
    Ok(ModeSolution {
        rayleigh: 1.0 / (2.0 * p.a_sq * pair.value),
        psi: normalize_max_positive(&pair.vector),
        params: p,
        truncation: asm.truncation,
        complex_pairs: pair.complex_pairs,
    })
}

/// Assembles and solves in one step.
pub fn solve_secular(params: &FlowParams, truncation: usize) -> Result<ModeSolution> {
    smallest_rayleigh(&assemble_secular_matrix(params, truncation)?)
}

pub(crate) fn normalize_max_positive(v: &DVector<f64>) -> Vec<f64> {
    let pivot = v.iter().copied().fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
    v.iter().map(|x| x / pivot).collect()
}

/// One-mode closed form. Independent of N: the single-mode projection drops
/// every N-dependent term.
pub fn first_approximation_ra(a: f64) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::domain(format!("wavenumber must be positive, got {a}")));
    }
    let pi2 = PI * PI;
    let s = pi2 + a * a;
    let den = a * a * ((a.sinh() + a) * s * s - 8.0 * a * pi2 * (1.0 + a.cosh()));
    if !(den > 0.0) {
        return Err(Error::domain(format!("first approximation has nonpositive denominator at a = {a}")));
    }
    Ok(s.powi(5) * (a + a.sinh()) / den)
}

/// Sampled eigenfunction pair of a marginal state.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenfunctions {
    pub x: Vec<f64>,
    pub theta: Vec<f64>,
    pub w: Vec<f64>,
}

/// `theta = sum psi_k Theta_k` and `w` from `(D^2 - a^2)^2 w = a^2 Gr theta`
/// with clamped walls, sampled at `samples`.
pub fn reconstruct_eigenfunctions(sol: &ModeSolution, samples: &[f64]) -> Result<Eigenfunctions> {
    if let Some(x) = samples.iter().find(|x| !(0.0..=1.0).contains(*x)) {
        return Err(Error::domain(format!("sample {x} outside [0, 1]")));
    }
    let p = sol.params;
    let a = p.a();
    let coeffs = (1..=sol.truncation)
        .map(|k| solve_particular_coeffs(k, a, p.n_rate))
        .collect::<Result<Vec<_>>>()?;
    let theta_at = |x: f64| -> f64 { coeffs.iter().zip(&sol.psi).map(|(c, psi)| psi * theta_k_eval(x, c)).sum() };

    let grid = ChebGrid::new(RECONSTRUCTION_GRID);
    let m = grid.interior_len();
    let a2 = p.a_sq;
    let op = grid.clamped_d4() - grid.dirichlet_d2() * (2.0 * a2) + DMatrix::identity(m, m) * (a2 * a2);
    let forcing = a2 * sol.grashof();
    let rhs = DVector::from_iterator(m, grid.interior_x().into_iter().map(|x| forcing * theta_at(x)));
    let w_nodes = op
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::numeric("singular velocity reconstruction operator"))?;
    let w_nodes = w_nodes.as_slice();

    Ok(Eigenfunctions {
        x: samples.to_vec(),
        theta: samples.iter().map(|&x| theta_at(x)).collect(),
        w: samples.iter().map(|&x| grid.interpolate_clamped(w_nodes, x)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::adaptive_integrate;
    use approx::assert_relative_eq;

    #[test]
    fn coupling_t_examples() {
        assert_eq!(coupling_t(1, 1), 0.25);
        assert_relative_eq!(coupling_t(1, 2), -8.0 / (9.0 * PI * PI), epsilon = 1e-15);
        assert_relative_eq!(coupling_t(1, 2), -0.090_063_274_348_744_7, epsilon = 1e-15);
        assert_eq!(coupling_t(1, 3), 0.0);
    }

    #[test]
    fn coupling_u_examples() {
        assert_eq!(coupling_u(2, 2), 0.0);
        assert_relative_eq!(coupling_u(1, 2), -4.0 / (3.0 * PI), epsilon = 1e-15);
        assert_eq!(coupling_u(2, 4), 0.0);
        let direct = adaptive_integrate(|x| (PI * x).cos() * (2.0 * PI * x).sin(), 0.0, 1.0, 1e-14);
        assert_relative_eq!(coupling_u(1, 2), -direct, epsilon = 1e-12);
    }

    #[test]
    fn coupling_i_examples() {
        assert_relative_eq!(coupling_i(1, 0, Hyperbolic::Cosh, 1e-8), 2.0 / PI, epsilon = 1e-12);
        // mpmath, 40 digits
        assert_relative_eq!(coupling_i(1, 0, Hyperbolic::Sinh, 1.0), 0.339_663_091_701_047_35, epsilon = 1e-14);
        assert_relative_eq!(
            coupling_i(2, 1, Hyperbolic::Cosh, 3.1163),
            -1.261_616_343_886_179,
            epsilon = 1e-13
        );
    }

    #[test]
    fn particular_coeffs_examples() {
        let a = 3.1163;
        let c = solve_particular_coeffs(1, a, 0.0).unwrap();
        assert_eq!(c.a0, 0.0);
        assert!(c.relative_residual() <= 1e-10);
        // mpmath reference
        assert_relative_eq!(c.a1, -0.553_728_229_984_154_7, epsilon = 1e-12);
        assert_relative_eq!(c.b2, 3.865_170_046_469_015, epsilon = 1e-12);

        let c = solve_particular_coeffs(1, a, 1.0).unwrap();
        assert_relative_eq!(c.a0, 6.0 * PI / (PI * PI + a * a), epsilon = 1e-15);
        assert_relative_eq!(c.a0, 0.962_648_650_184_220_6, epsilon = 1e-14);
        assert!(solve_particular_coeffs(0, a, 1.0).is_err());
        assert!(solve_particular_coeffs(1, 0.0, 1.0).is_err());
    }

    #[test]
    fn theta_vanishes_at_walls_and_matches_reference() {
        for &(k, a, n) in &[(1, 3.1163, 0.0), (2, 3.0, 10.0), (5, 3.4641, 50.0), (3, 0.5, -4.0)] {
            let c = solve_particular_coeffs(k, a, n).unwrap();
            assert!(theta_k_eval(0.0, &c).abs() <= 1e-12);
            assert!(theta_k_eval(1.0, &c).abs() <= 1e-12);
        }
        let c = solve_particular_coeffs(1, 3.1163, 0.0).unwrap();
        assert_relative_eq!(theta_k_eval(0.5, &c), -6.162_402_358_915_803e-5, epsilon = 1e-12);
    }

    #[test]
    fn zero_heating_has_no_t_or_u_terms() {
        let p = FlowParams::new(0.0, 9.711).unwrap();
        let asm = assemble_secular_matrix(&p, 2).unwrap();
        // odd/even decoupling under reflection symmetry
        assert!(asm.matrix[(0, 1)].abs() < 1e-15);
        assert!(asm.matrix[(1, 0)].abs() < 1e-15);
        let manual = {
            let c = &asm.coeffs[0];
            let a = p.a();
            let i = |pw, f| coupling_i(2, pw, f, a);
            (c.a0 * i(0, Hyperbolic::Cosh) + c.a1 * i(1, Hyperbolic::Cosh) + c.a2 * i(2, Hyperbolic::Cosh)
                + c.b0 * i(0, Hyperbolic::Sinh) + c.b1 * i(1, Hyperbolic::Sinh) + c.b2 * i(2, Hyperbolic::Sinh))
                / c.q().powi(3)
        };
        assert_eq!(asm.matrix[(0, 1)], manual);
    }

    #[test]
    fn single_mode_reproduces_closed_form() {
        let ra = first_approximation_ra(9.711f64.sqrt()).unwrap();
        for n in [0.0, 1.0, 12.0, 50.0] {
            let p = FlowParams::new(n, 9.711).unwrap();
            let asm = assemble_secular_matrix(&p, 1).unwrap();
            assert_relative_eq!(1.0 / (2.0 * p.a_sq * asm.matrix[(0, 0)]), ra, max_relative = 1e-9);
            assert_relative_eq!(smallest_rayleigh(&asm).unwrap().rayleigh, ra, max_relative = 1e-9);
        }
    }

    #[test]
    fn first_approximation_values() {
        // mpmath, 40 digits
        assert_relative_eq!(first_approximation_ra(1.0).unwrap(), 5872.334_111_311_151, max_relative = 1e-12);
        assert_relative_eq!(first_approximation_ra(9.711f64.sqrt()).unwrap(), 1715.079_354_112_99, max_relative = 1e-12);
        assert!(first_approximation_ra(1e-3).unwrap() > 1e6);
        assert!(first_approximation_ra(0.0).is_err());
    }

    #[test]
    fn table_one_spot_checks() {
        let ra = |n, a2, k| solve_secular(&FlowParams::new(n, a2).unwrap(), k).unwrap().rayleigh;
        assert_relative_eq!(ra(0.0, 9.711, 2), 1715.079324, max_relative = 1e-7);
        assert_relative_eq!(ra(1.0, 9.711, 3), 1704.733019, max_relative = 1e-7);
        assert_relative_eq!(ra(50.0, 9.0, 3), 647.561188, max_relative = 1e-7);
    }

    #[test]
    fn psi_normalization_and_finiteness() {
        let p = FlowParams::new(10.0, 12.0).unwrap();
        let asm = assemble_secular_matrix(&p, 64).unwrap();
        assert!(asm.matrix.iter().all(|v| v.is_finite()));
        let sol = solve_secular(&p, 8).unwrap();
        let max = sol.psi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert_eq!(max, 1.0);
        assert!(sol.psi.contains(&1.0));
        assert!(sol.rayleigh > 0.0);
    }

    #[test]
    fn reconstruction_boundary_behaviour() {
        let samples: Vec<f64> = (0..=200).map(|i| i as f64 / 200.0).collect();
        for n in [0.0, 10.0] {
            let sol = solve_secular(&FlowParams::new(n, 9.711).unwrap(), 12).unwrap();
            let f = reconstruct_eigenfunctions(&sol, &samples).unwrap();
            let tmax = f.theta.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let wmax = f.w.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            assert!(f.theta[0].abs() <= 1e-10 * tmax && f.theta[200].abs() <= 1e-10 * tmax);
            assert!(f.w[0].abs() <= 1e-12 * wmax && f.w[200].abs() <= 1e-12 * wmax);
            // one-sided slopes, O(h^2)
            let h = 1e-4;
            let e = reconstruct_eigenfunctions(&sol, &[0.0, h, 2.0 * h, 1.0 - 2.0 * h, 1.0 - h, 1.0]).unwrap();
            let slope0 = (-3.0 * e.w[0] + 4.0 * e.w[1] - e.w[2]) / (2.0 * h);
            let slope1 = (3.0 * e.w[5] - 4.0 * e.w[4] + e.w[3]) / (2.0 * h);
            assert!(slope0.abs() <= 1e-5 * wmax && slope1.abs() <= 1e-5 * wmax, "{slope0} {slope1} {wmax}");
            if n == 0.0 {
                for i in 0..=200 {
                    assert!((f.theta[i] - f.theta[200 - i]).abs() <= 1e-8 * tmax);
                }
            }
        }
        let sol = solve_secular(&FlowParams::new(0.0, 9.711).unwrap(), 4).unwrap();
        assert!(reconstruct_eigenfunctions(&sol, &[1.5]).is_err());
    }
}
