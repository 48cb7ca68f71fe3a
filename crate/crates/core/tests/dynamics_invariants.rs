use std::f64::consts::PI;

use proptest::prelude::*;
use qcarpet::dynamics::{
    autocorr_trace, autocorrelation, eigenfunction_p, evolved_amplitudes, gamma_p, gamma_p_double_sum,
    momentum_norm, parseval_extent, position_norm, rho_x, rho_x_double_sum, TimeWindow, SINGULAR_BAND,
};
use qcarpet::spectral::{coefficients_closed_form, SpectralState, GaussianPacket, WellConfig};

fn reference(k: f64) -> SpectralState {
    coefficients_closed_form(&WellConfig::default(), &GaussianPacket::reference(k * PI), None).unwrap()
}

fn x_samples(count: usize) -> impl Iterator<Item = f64> {
    (0..count).map(move |j| (j as f64 + 0.5) / count as f64)
}

#[test]
fn exact_revival_restores_trace_and_density() {
    for k in [5.0, 10.0, 30.0] {
        let state = reference(k);
        let t_rev = state.cfg().revival_time();
        assert!((autocorrelation(&state, t_rev).norm_sqr() - 1.0).abs() < 1e-9);
        let worst = x_samples(1024)
            .map(|x| (rho_x(&state, x, t_rev) - rho_x(&state, x, 0.0)).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-9, "p0 = {k}π: {worst}");
    }
}

#[test]
fn half_revival_mirrors_initial_density() {
    for k in [5.0, 10.0, 30.0] {
        let state = reference(k);
        let t_half = state.cfg().revival_time() / 2.0;
        let worst = x_samples(1024)
            .map(|x| (rho_x(&state, x, t_half) - rho_x(&state, 1.0 - x, 0.0)).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-9, "p0 = {k}π: {worst}");
    }
}

#[test]
fn single_and_double_sums_agree_on_a_grid() {
    let state = reference(30.0);
    let t_rev = state.cfg().revival_time();
    let extent = 40.0 * PI;
    let mut worst_x: f64 = 0.0;
    let mut worst_p: f64 = 0.0;
    for i in 0..50 {
        let t = t_rev * i as f64 / 49.0;
        for j in 0..50 {
            let x = (j as f64 + 0.5) / 50.0;
            let p = -extent + 2.0 * extent * j as f64 / 49.0;
            worst_x = worst_x.max((rho_x_double_sum(&state, x, t).re - rho_x(&state, x, t)).abs());
            worst_p = worst_p.max((gamma_p_double_sum(&state, p, t).re - gamma_p(&state, p, t)).abs());
        }
    }
    assert!(worst_x < 1e-10, "{worst_x}");
    assert!(worst_p < 1e-10, "{worst_p}");
}

#[test]
fn densities_conserve_probability() {
    let state = reference(30.0);
    let t_rev = state.cfg().revival_time();
    let extent = parseval_extent(&state);
    for t in [0.0, t_rev / 7.0, t_rev / 3.0] {
        let nx = position_norm(&state, t, 2048);
        assert!((nx - 1.0).abs() < 1e-6, "t = {t}: {nx}");
        let np = momentum_norm(&state, t, extent).unwrap();
        assert!((np - 1.0).abs() < 1e-4, "t = {t}: {np}");
    }
}

#[test]
fn momentum_eigenfunction_at_its_own_momentum() {
    let cfg = WellConfig::default();
    let expected = 0.5 / PI.sqrt();
    for n in [1u32, 7, 30] {
        let pn = cfg.p_n(n);
        assert!((eigenfunction_p(&cfg, n, pn).norm() - expected).abs() < 1e-8);
        assert!((eigenfunction_p(&cfg, n, -pn).norm() - expected).abs() < 1e-8);
        let band = SINGULAR_BAND * cfg.momentum_quantum();
        for side in [1.0, -1.0] {
            let inside = eigenfunction_p(&cfg, n, pn + side * band * (1.0 - 1e-9));
            let outside = eigenfunction_p(&cfg, n, pn + side * band * (1.0 + 1e-9));
            assert!((inside - outside).norm() < 1e-8);
        }
    }
}

#[test]
fn trace_is_symmetric_about_half_revival() {
    let state = reference(30.0);
    let t_rev = state.cfg().revival_time();
    let trace = autocorr_trace(&state, TimeWindow::new(0.0, t_rev, 10_000).unwrap());
    let n = trace.values.len();
    for k in 0..n {
        assert!((trace.values[k] - trace.values[n - 1 - k]).abs() < 1e-9);
    }
    assert!((trace.values[n - 1] - 1.0).abs() < 1e-9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evolution_is_unitary(k in 1.0f64..60.0, frac in 0.0f64..1.0) {
        let state = reference(k);
        let t = frac * state.cfg().revival_time();
        let total: f64 = evolved_amplitudes(&state, t).iter().map(|a| a.norm_sqr()).sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        prop_assert!(autocorrelation(&state, t).norm_sqr() <= 1.0 + 1e-12);
    }

    #[test]
    fn position_norm_is_one_at_any_time(k in 1.0f64..40.0, frac in 0.0f64..1.0) {
        let state = reference(k);
        let t = frac * state.cfg().revival_time();
        prop_assert!((position_norm(&state, t, 2048) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn densities_are_nonnegative(frac in 0.0f64..1.0, x in 0.0f64..1.0, p in -200.0f64..200.0) {
        let state = reference(10.0);
        let t = frac * state.cfg().revival_time();
        prop_assert!(rho_x(&state, x, t) >= 0.0);
        prop_assert!(gamma_p(&state, p, t) >= 0.0);
    }
}
