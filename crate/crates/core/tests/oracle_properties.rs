use heatconv::{first_approximation_ra, oracle_eigenfunction, oracle_rayleigh, FlowParams};

#[test]
fn resolution_doubling_is_stable() {
    for (n, a_sq) in [(0.0, 9.711), (10.0, 12.0), (50.0, 9.0)] {
        let r = oracle_rayleigh(&FlowParams::new(n, a_sq).unwrap(), 32).unwrap();
        assert!(r.converged);
        assert!(((r.rayleigh - r.refined_rayleigh) / r.refined_rayleigh).abs() < 1e-5, "{r:?}");
        assert!(((r.rayleigh - r.richardson_estimate) / r.richardson_estimate).abs() < 1e-4);
        assert!(r.max_bc_violation < 1e-8);
    }
}

#[test]
fn close_to_one_mode_formula_without_heating() {
    for i in 0..=6 {
        let a = 2.5 + 0.25 * i as f64;
        let oracle = oracle_rayleigh(&FlowParams::from_wavenumber(0.0, a).unwrap(), 32).unwrap().rayleigh;
        let closed = first_approximation_ra(a).unwrap();
        assert!(closed >= oracle && (closed - oracle) / oracle < 5e-3, "a={a}: {oracle} vs {closed}");
    }
}

#[test]
fn continuous_in_heating_rate() {
    let ra = |n: f64| oracle_rayleigh(&FlowParams::new(n, 10.0).unwrap(), 32).unwrap().rayleigh;
    let (a, b) = (ra(3.0), ra(3.0 + 1e-4));
    assert!(b < a && (a - b) / a < 1e-4);
}

#[test]
fn eigenfunction_satisfies_wall_conditions() {
    let prof = oracle_eigenfunction(&FlowParams::new(4.0, 12.0).unwrap(), 32).unwrap();
    let (s0, s1) = prof.wall_slopes();
    assert!(s0.abs() < 1e-8 && s1.abs() < 1e-8);
    for x in [0.0, 1.0] {
        assert!(prof.w_at(x).abs() < 1e-12 && prof.theta_at(x).abs() < 1e-12);
    }
}
