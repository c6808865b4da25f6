//! Dominant positive real eigenpair of a small dense nonsymmetric matrix.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

pub(crate) struct PositiveEigenpair {
    pub value: f64,
    pub vector: DVector<f64>,
    /// Number of complex-conjugate pairs in the spectrum, skipped as thresholds.
    pub complex_pairs: usize,
}

/// Largest positive real eigenvalue of `m` with its eigenvector, or `None`
/// when the spectrum has no positive real member.
pub(crate) fn largest_positive_real(m: &DMatrix<f64>) -> Result<Option<PositiveEigenpair>> {
    let n = m.nrows();
    if n == 0 || n != m.ncols() {
        return Err(Error::numeric(format!("expected a nonempty square matrix, got {}x{}", n, m.ncols())));
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::numeric("matrix has non-finite entries"));
    }
    let schur = nalgebra::linalg::Schur::try_new(m.clone(), f64::EPSILON, 100_000)
        .ok_or_else(|| Error::numeric("Schur iteration did not converge"))?;
    let eigs = schur.complex_eigenvalues();
    let radius = eigs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let tol = 1e-10 * radius;

    let mut complex_pairs = 0;
    let mut best: Option<f64> = None;
    for z in eigs.iter() {
        if z.im.abs() > tol {
            if z.im > 0.0 {
                complex_pairs += 1;
            }
            continue;
        }
        if z.re > tol && best.is_none_or(|b| z.re > b) {
            best = Some(z.re);
        }
    }
    let Some(value) = best else {
        return Ok(None);
    };
    let vector = inverse_iteration(m, value)?;
    Ok(Some(PositiveEigenpair { value, vector, complex_pairs }))
}

fn inverse_iteration(m: &DMatrix<f64>, value: f64) -> Result<DVector<f64>> {
    let n = m.nrows();
    let mut rel_shift = 1e-10;
    for _ in 0..6 {
        let shift = value * (1.0 + rel_shift);
        let shifted = m - DMatrix::identity(n, n) * shift;
        let lu = shifted.lu();
        let mut v = DVector::from_fn(n, |i, _| 1.0 + 0.1 * (i as f64).sin());
        v /= v.norm();
        let mut ok = true;
        for _ in 0..4 {
            match lu.solve(&v) {
                Some(next) if next.iter().all(|x| x.is_finite()) && next.norm() > 0.0 => {
                    v = &next / next.norm();
                }
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            return Ok(v);
        }
        rel_shift *= 100.0;
    }
    Err(Error::numeric("inverse iteration failed to produce an eigenvector"))
}
