//! Chebyshev-Gauss-Lobatto collocation on the translated layer `[0, 1]`.
//!
//! Nodes are `y_j = cos(pi j / n)` on `[-1, 1]`, mapped by `x = (1 + y) / 2`.
//! Functions with clamped walls (`w = Dw = 0`) are represented as
//! `w = (1 - y^2) p(y)` with `p(+-1) = 0`, so both conditions hold exactly and
//! the unknowns are the interior nodal values of `w`.

use std::f64::consts::PI;

use nalgebra::DMatrix;

#[derive(Debug, Clone)]
pub struct ChebGrid {
    n: usize,
    y: Vec<f64>,
    d1: DMatrix<f64>,
    d2: DMatrix<f64>,
    d3: DMatrix<f64>,
    d4: DMatrix<f64>,
}

impl ChebGrid {
    /// Grid with `n + 1` nodes (`n - 1` interior). Requires `n >= 4`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 4, "Chebyshev grid needs n >= 4");
        let y: Vec<f64> = (0..=n).map(|j| (PI * j as f64 / n as f64).cos()).collect();
        let c = |j: usize| {
            let s = if j.is_multiple_of(2) { 1.0 } else { -1.0 };
            if j == 0 || j == n {
                2.0 * s
            } else {
                s
            }
        };
        let mut d1 = DMatrix::zeros(n + 1, n + 1);
        for i in 0..=n {
            for j in 0..=n {
                if i != j {
                    d1[(i, j)] = c(i) / c(j) / (y[i] - y[j]);
                }
            }
        }
        for i in 0..=n {
            let row_sum: f64 = (0..=n).filter(|&j| j != i).map(|j| d1[(i, j)]).sum();
            d1[(i, i)] = -row_sum;
        }
        let d2 = &d1 * &d1;
        let d3 = &d2 * &d1;
        let d4 = &d3 * &d1;
        Self { n, y, d1, d2, d3, d4 }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn interior_len(&self) -> usize {
        self.n - 1
    }

    /// Interior nodes in the translated frame, ordered as the matrices are
    /// (descending x).
    pub fn interior_x(&self) -> Vec<f64> {
        self.y[1..self.n].iter().map(|&y| 0.5 * (1.0 + y)).collect()
    }

    /// `d^2/dx^2` on interior nodes for functions vanishing at both walls.
    pub fn dirichlet_d2(&self) -> DMatrix<f64> {
        let m = self.n - 1;
        DMatrix::from_fn(m, m, |i, j| 4.0 * self.d2[(i + 1, j + 1)])
    }

    /// `d^4/dx^4` on interior nodes for clamped functions `w = (1 - y^2) p`.
    pub fn clamped_d4(&self) -> DMatrix<f64> {
        let m = self.n - 1;
        DMatrix::from_fn(m, m, |i, j| {
            let (r, c) = (i + 1, j + 1);
            let yr = self.y[r];
            let op = (1.0 - yr * yr) * self.d4[(r, c)] - 8.0 * yr * self.d3[(r, c)] - 12.0 * self.d2[(r, c)];
            16.0 * op / (1.0 - self.y[c] * self.y[c])
        })
    }

    fn bary_weight(&self, j: usize) -> f64 {
        let s = if j.is_multiple_of(2) { 1.0 } else { -1.0 };
        if j == 0 || j == self.n {
            0.5 * s
        } else {
            s
        }
    }

    fn bary_eval(&self, full: &[f64], y: f64) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for (j, (&yj, &fj)) in self.y.iter().zip(full).enumerate() {
            let d = y - yj;
            if d == 0.0 {
                return fj;
            }
            let t = self.bary_weight(j) / d;
            num += t * fj;
            den += t;
        }
        num / den
    }

    /// Interpolates a function that vanishes at both walls from its interior values.
    pub fn interpolate_dirichlet(&self, interior: &[f64], x: f64) -> f64 {
        let full = self.pad(interior);
        self.bary_eval(&full, 2.0 * x - 1.0)
    }

    /// Interpolates a clamped function from its interior values.
    pub fn interpolate_clamped(&self, interior: &[f64], x: f64) -> f64 {
        let p = self.clamped_factor(interior);
        let y = 2.0 * x - 1.0;
        (1.0 - y * y) * self.bary_eval(&p, y)
    }

    /// `dw/dx` of a clamped function at the nodes `x = 1` and `x = 0`.
    pub fn clamped_wall_slopes(&self, interior: &[f64]) -> (f64, f64) {
        let p = self.clamped_factor(interior);
        let slope = |r: usize| {
            let y = self.y[r];
            let dp: f64 = (0..=self.n).map(|j| self.d1[(r, j)] * p[j]).sum();
            2.0 * (-2.0 * y * p[r] + (1.0 - y * y) * dp)
        };
        (slope(0), slope(self.n))
    }

    fn clamped_factor(&self, interior: &[f64]) -> Vec<f64> {
        let mut p = self.pad(interior);
        for j in 1..self.n {
            p[j] /= 1.0 - self.y[j] * self.y[j];
        }
        p
    }

    fn pad(&self, interior: &[f64]) -> Vec<f64> {
        assert_eq!(interior.len(), self.n - 1, "expected interior nodal values");
        let mut full = Vec::with_capacity(self.n + 1);
        full.push(0.0);
        full.extend_from_slice(interior);
        full.push(0.0);
        full
    }
}
