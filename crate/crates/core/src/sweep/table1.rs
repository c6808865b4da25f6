//! Published reference values at sixteen `(N, a^2)` points and the report
//! that compares every solver against them.

use rayon::prelude::*;

use crate::error::Error;
use crate::method::Method;
use crate::model::FlowParams;

/// One published row: two-mode, three-mode and variational thresholds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Table1Row {
    pub n_rate: f64,
    pub a_sq: f64,
    pub ra_k2: f64,
    pub ra_k3: f64,
    pub ra_variational: f64,
}

const fn row(n_rate: f64, a_sq: f64, ra_k2: f64, ra_k3: f64, ra_variational: f64) -> Table1Row {
    Table1Row { n_rate, a_sq, ra_k2, ra_k3, ra_variational }
}

pub const TABLE1: [Table1Row; 16] = [
    row(0.0, 9.711, 1715.079324, 1715.079324, 1749.97575),
    row(1.0, 9.711, 1711.742588, 1704.733019, 1746.80944),
    row(2.0, 9.711, 1701.891001, 1695.265991, 1737.45025),
    row(1.0, 10.0, 1712.257687, 1705.203119, 1747.29100),
    row(4.0, 10.0, 1664.341789, 1659.087870, 1701.62704),
    row(4.0, 12.0, 1685.422373, 1680.142966, 1723.62407),
    row(8.0, 12.0, 1547.460446, 1546.437526, 1590.19681),
    row(9.0, 12.0, 1508.147637, 1508.070640, 1551.72378),
    row(10.0, 12.0, 1468.449223, 1469.223193, 1512.69203),
    row(12.0, 12.0, 1389.837162, 1392.166660, 1434.90396),
    row(16.0, 12.0, 1243.442054, 1247.400439, 1288.50149),
    row(10.0, 9.0, 1482.527042, 1482.391699, 1525.59302),
    row(11.0, 9.0, 1446.915467, 1447.488638, 1490.55802),
    row(12.0, 9.0, 1411.401914, 1412.610226, 1455.48233),
    row(30.0, 12.0, 879.104231, 884.196861, 917.507873),
    row(50.0, 9.0, 643.4478727, 647.561188, 673.848081),
];

/// Converged truncation reported next to the two- and three-mode columns.
pub const CONVERGED_TRUNCATION: usize = 24;

impl Table1Row {
    pub fn params(&self) -> FlowParams {
        FlowParams::new(self.n_rate, self.a_sq).expect("published parameters are valid")
    }

    /// Published value comparable with `method`, if any.
    pub fn paper_value(&self, method: &Method) -> Option<f64> {
        match method {
            Method::Secular { truncation: 2 } => Some(self.ra_k2),
            Method::Secular { truncation: 3 } => Some(self.ra_k3),
            Method::Variational { .. } => Some(self.ra_variational),
            _ => None,
        }
    }
}

/// Finds the published row at exactly these parameters.
pub fn lookup(n_rate: f64, a_sq: f64) -> Option<&'static Table1Row> {
    TABLE1.iter().find(|r| r.n_rate == n_rate && r.a_sq == a_sq)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table1Cell {
    pub row: Table1Row,
    pub method: Method,
    pub rayleigh: Result<f64, Error>,
    pub paper_value: Option<f64>,
}

impl Table1Cell {
    /// `(computed - paper) / paper`.
    pub fn rel_deviation(&self) -> Option<f64> {
        match (&self.rayleigh, self.paper_value) {
            (Ok(ra), Some(p)) => Some((ra - p) / p),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table1Report {
    /// Row-major: published rows outer, method variants inner.
    pub cells: Vec<Table1Cell>,
    pub notes: Vec<String>,
}

impl Table1Report {
    pub fn failures(&self) -> usize {
        self.cells.iter().filter(|c| c.rayleigh.is_err()).count()
    }
}

/// Expands method families into the variants compared per row: `secular`
/// becomes K = 2, 3 and [`CONVERGED_TRUNCATION`]; other entries are used as given.
pub fn expand_methods(methods: &[Method]) -> Vec<Method> {
    let mut out = Vec::new();
    for m in methods {
        let variants = match m {
            Method::Secular { .. } => vec![
                Method::Secular { truncation: 2 },
                Method::Secular { truncation: 3 },
                Method::Secular { truncation: CONVERGED_TRUNCATION },
            ],
            other => vec![*other],
        };
        for v in variants {
            if !out.contains(&v) {
                out.push(v);
            }
        }
    }
    out
}

pub fn table1_report(methods: &[Method]) -> Table1Report {
    let variants = expand_methods(methods);
    let jobs: Vec<(Table1Row, Method)> =
        TABLE1.iter().flat_map(|r| variants.iter().map(move |m| (*r, *m))).collect();
    let cells = jobs
        .par_iter()
        .map(|(row, method)| Table1Cell {
            row: *row,
            method: *method,
            rayleigh: method.rayleigh(&row.params()),
            paper_value: row.paper_value(method),
        })
        .collect();

    let notes = TABLE1
        .iter()
        .filter(|r| r.ra_k2 == r.ra_k3)
        .map(|r| {
            format!(
                "published K=2 and K=3 values coincide at N={}, a2={} ({}); they equal the one-mode closed form",
                r.n_rate, r.a_sq, r.ra_k2
            )
        })
        .collect();
    Table1Report { cells, notes }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expansion_and_paper_columns() {
        let v = expand_methods(&[Method::secular(), Method::oracle(), Method::Secular { truncation: 3 }]);
        assert_eq!(v.len(), 4);
        let r = TABLE1[9];
        assert_eq!(r.paper_value(&Method::Secular { truncation: 2 }), Some(1389.837162));
        assert_eq!(r.paper_value(&Method::oracle()), None);
        assert_eq!(TABLE1[14].paper_value(&Method::Secular { truncation: 3 }), Some(884.196861));
        assert!(lookup(50.0, 9.0).is_some());
        assert!(lookup(50.0, 9.1).is_none());
    }

    #[test]
    fn report_flags_identical_columns() {
        let rep = table1_report(&[Method::FirstApprox]);
        assert_eq!(rep.cells.len(), 16);
        assert_eq!(rep.notes.len(), 1);
        assert!(rep.notes[0].contains("N=0"));
    }
}
