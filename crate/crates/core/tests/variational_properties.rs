use heatconv::sweep::table1::TABLE1;
use heatconv::{oracle_rayleigh, variational_ra, FlowParams, VariationalBasis};

// Adding a basis pair may leave the estimate unchanged up to roundoff.
const ROUNDOFF: f64 = 1e-10;

#[test]
fn estimates_improve_with_basis_size() {
    for n in [0.0, 1.0, 16.0] {
        let p = FlowParams::new(n, 9.711).unwrap();
        let ras: Vec<f64> = (2..=8).map(|k| variational_ra(&p, &VariationalBasis::new(k).unwrap()).unwrap()).collect();
        for w in ras.windows(2) {
            assert!(w[1] <= w[0] * (1.0 + ROUNDOFF), "N={n}: {ras:?}");
        }
        let exact = oracle_rayleigh(&p, 32).unwrap().rayleigh;
        assert!(ras[ras.len() - 1] >= exact * (1.0 - ROUNDOFF));
    }
}

#[test]
fn decreasing_with_heating_rate() {
    let basis = VariationalBasis::new(2).unwrap();
    let ra = |n: f64| variational_ra(&FlowParams::new(n, 12.0).unwrap(), &basis).unwrap();
    let values: Vec<f64> = [4.0, 8.0, 12.0, 16.0, 30.0].iter().map(|&n| ra(n)).collect();
    assert!(values.windows(2).all(|w| w[1] < w[0]), "{values:?}");
}

#[test]
fn two_pair_basis_below_published_column() {
    let basis = VariationalBasis::new(2).unwrap();
    for row in &TABLE1 {
        let ra = variational_ra(&row.params(), &basis).unwrap();
        let d = (ra - row.ra_variational) / row.ra_variational;
        assert!(d < 0.0 && d > -0.05, "N={} a2={}: {d}", row.n_rate, row.a_sq);
    }
}

#[test]
fn basis_functions_clamped() {
    let basis = VariationalBasis::new(6).unwrap();
    assert!(basis.boundary_residual() < 1e-8);
    let single = VariationalBasis::new(1).unwrap();
    assert!(variational_ra(&FlowParams::new(0.0, 9.0).unwrap(), &single).is_err());
}
