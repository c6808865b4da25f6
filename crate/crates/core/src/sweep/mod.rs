//! Neutral curves `Ra(a)`, neutral surfaces `Ra(a, N)` and critical points.
//!
//! Grid points are independent and evaluated on the ambient rayon pool.
//! Results are collected in grid order, so output does not depend on the
//! number of threads.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::method::Method;
use crate::model::FlowParams;

pub mod table1;

pub use table1::{table1_report, Table1Cell, Table1Report, Table1Row, TABLE1};

/// Width of the final golden-section bracket.
pub const CRITICAL_TOLERANCE: f64 = 1e-4;

const SCAN_POINTS: usize = 17;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeutralPoint {
    pub a: f64,
    pub n_rate: f64,
    pub rayleigh: f64,
    pub method: String,
}

impl NeutralPoint {
    pub fn a_sq(&self) -> f64 {
        self.a * self.a
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointFailure {
    pub a: f64,
    pub n_rate: f64,
    pub method: String,
    pub error: Error,
}

/// Points that solved plus the ones that did not, both in grid order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct NeutralSweep {
    pub points: Vec<NeutralPoint>,
    pub failures: Vec<PointFailure>,
}

fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    (0..count).map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64).collect()
}

fn check_range(name: &str, lo: f64, hi: f64, count: usize, min_count: usize) -> Result<()> {
    if !lo.is_finite() || !hi.is_finite() {
        return Err(Error::domain(format!("{name} range must be finite")));
    }
    if count < min_count {
        return Err(Error::domain(format!("{name} needs at least {min_count} samples, got {count}")));
    }
    if count > 1 && !(lo < hi) {
        return Err(Error::domain(format!("{name} range [{lo}, {hi}] must be increasing")));
    }
    Ok(())
}

fn evaluate_grid(coords: &[(f64, f64)], method: Method) -> NeutralSweep {
    let tag = method.to_string();
    let outcomes: Vec<_> = coords
        .par_iter()
        .map(|&(n_rate, a)| FlowParams::from_wavenumber(n_rate, a).and_then(|p| method.rayleigh(&p)))
        .collect();
    let mut sweep = NeutralSweep::default();
    for (&(n_rate, a), outcome) in coords.iter().zip(outcomes) {
        match outcome {
            Ok(rayleigh) => sweep.points.push(NeutralPoint { a, n_rate, rayleigh, method: tag.clone() }),
            Err(error) => sweep.failures.push(PointFailure { a, n_rate, method: tag.clone(), error }),
        }
    }
    sweep
}

/// `Ra(a)` at fixed N on `samples` uniformly spaced wavenumbers.
pub fn neutral_curve(n_rate: f64, a_range: (f64, f64), samples: usize, method: Method) -> Result<NeutralSweep> {
    let (lo, hi) = a_range;
    check_range("wavenumber", lo, hi, samples, 2)?;
    if !(lo > 0.0) {
        return Err(Error::domain(format!("wavenumbers must be positive, got a_min = {lo}")));
    }
    method.validate()?;
    let coords: Vec<_> = linspace(lo, hi, samples).into_iter().map(|a| (n_rate, a)).collect();
    Ok(evaluate_grid(&coords, method))
}

/// Tensor grid, N outer and a inner.
pub fn neutral_surface(
    n_range: (f64, f64),
    n_samples: usize,
    a_range: (f64, f64),
    a_samples: usize,
    method: Method,
) -> Result<NeutralSweep> {
    check_range("heating-rate", n_range.0, n_range.1, n_samples, 1)?;
    check_range("wavenumber", a_range.0, a_range.1, a_samples, 1)?;
    if !(a_range.0 > 0.0) {
        return Err(Error::domain(format!("wavenumbers must be positive, got a_min = {}", a_range.0)));
    }
    method.validate()?;
    let a_values = linspace(a_range.0, a_range.1, a_samples);
    let coords: Vec<_> = linspace(n_range.0, n_range.1, n_samples)
        .into_iter()
        .flat_map(|n| a_values.iter().map(move |&a| (n, a)))
        .collect();
    Ok(evaluate_grid(&coords, method))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub a_crit: f64,
    pub ra_crit: f64,
    pub n_rate: f64,
    /// Width of the final search interval.
    pub bracket: f64,
    pub method: String,
}

/// Minimizes `Ra(a)` over `a_bracket` by golden-section search.
///
/// A coarse scan first locates the smallest sample; it must be interior,
/// otherwise the bracket holds no minimum and the scan is returned in the error.
pub fn critical_point(n_rate: f64, method: Method, a_bracket: (f64, f64)) -> Result<CriticalPoint> {
    let (lo, hi) = a_bracket;
    check_range("wavenumber", lo, hi, SCAN_POINTS, 2)?;
    if !(lo > 0.0) {
        return Err(Error::domain(format!("wavenumbers must be positive, got {lo}")));
    }
    method.validate()?;
    let ra = |a: f64| FlowParams::from_wavenumber(n_rate, a).and_then(|p| method.rayleigh(&p));

    let grid = linspace(lo, hi, SCAN_POINTS);
    let scan = grid.par_iter().map(|&a| ra(a)).collect::<Result<Vec<_>>>()?;
    let best = scan
        .iter()
        .enumerate()
        .min_by(|x, y| x.1.total_cmp(y.1))
        .map(|(i, _)| i)
        .expect("scan is nonempty");
    if best == 0 || best == SCAN_POINTS - 1 {
        let trace = grid
            .iter()
            .zip(&scan)
            .map(|(a, r)| format!("{a:.4}:{r:.6}"))
            .collect::<Vec<_>>()
            .join(" ");
        return Err(Error::NoInteriorMinimum { lo, hi, trace });
    }

    let (a, b) = golden_section(&ra, grid[best - 1], grid[best + 1], CRITICAL_TOLERANCE)?;
    let a_crit = 0.5 * (a + b);
    Ok(CriticalPoint { a_crit, ra_crit: ra(a_crit)?, n_rate, bracket: b - a, method: method.to_string() })
}

/// Shrinks `[a, b]` around a minimum of `f` until `b - a <= tol`.
fn golden_section(f: &impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64)> {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while b - a > tol {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2)?;
        }
    }
    Ok((a, b))
}
