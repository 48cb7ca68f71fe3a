use std::f64::consts::PI;

use proptest::prelude::*;
use qcarpet::dynamics::{autocorr_trace, TimeWindow};
use qcarpet::revival::{
    detect_peaks, find_revivals, prominent_peaks, slice_profile, symmetry_check, DetectorConfig,
    EventKind, Fraction,
};
use qcarpet::spectral::{coefficients_closed_form, time_scales, GaussianPacket, SpectralState, WellConfig};
use qcarpet::Complex64;

fn reference(k: f64) -> (SpectralState, GaussianPacket) {
    let packet = GaussianPacket::reference(k * PI);
    let state = coefficients_closed_form(&WellConfig::default(), &packet, None).unwrap();
    (state, packet)
}

/// ρ(x, T_rev/4) from the parity decomposition of the box eigenstates:
/// ψ(x, T_rev/4) = (1-i)/2 ψ₀(x) - (1+i)/2 ψ₀(L-x). Uses the Gaussian
/// directly, no expansion.
fn quarter_revival_density(packet: &GaussianPacket, x: f64) -> f64 {
    let cfg = WellConfig::default();
    let a = Complex64::new(0.5, -0.5);
    let b = Complex64::new(0.5, 0.5);
    (a * packet.amplitude(&cfg, x) - b * packet.amplitude(&cfg, 1.0 - x)).norm_sqr()
}

/// Brute-force prominence count, O(N²).
fn count_prominent(values: &[f64], rel: f64) -> usize {
    let global = values.iter().copied().fold(0.0, f64::max);
    let mut count = 0;
    for i in 1..values.len() - 1 {
        let v = values[i];
        if !(v > values[i - 1] && v > values[i + 1]) {
            continue;
        }
        let left = (0..i).rev().take_while(|&k| values[k] <= v).map(|k| values[k]).fold(v, f64::min);
        let right = (i + 1..values.len()).take_while(|&k| values[k] <= v).map(|k| values[k]).fold(v, f64::min);
        if (v - left.max(right)) / global > rel {
            count += 1;
        }
    }
    count
}

#[test]
fn quarter_revival_copy_count_matches_oracle() {
    let (state, packet) = reference(30.0);
    let t = state.cfg().revival_time() / 4.0;
    let oracle: Vec<f64> = (0..4096)
        .map(|j| quarter_revival_density(&packet, (j as f64 + 0.5) / 4096.0))
        .collect();
    // Two coincident counter-propagating copies at x = L/2 interfere into
    // fringes of period π/p₀; how many clear the bar depends on it.
    for (prominence, expected) in [(DetectorConfig::default().prominence, 10), (0.1, 9)] {
        assert_eq!(count_prominent(&oracle, prominence), expected);
        for samples in [2048, 4096] {
            let profile = slice_profile(&state, t, samples, prominence).unwrap();
            assert_eq!(profile.peak_count, expected, "prominence {prominence}, {samples} samples");
        }
    }
}

#[test]
fn slice_counts_at_start_and_half_revival() {
    let (state, _) = reference(30.0);
    let t_rev = state.cfg().revival_time();
    let start = slice_profile(&state, 0.0, 2048, 0.1).unwrap();
    assert_eq!(start.peak_count, 1);
    assert!((start.peak_positions[0] - 0.5).abs() < 1e-3);
    let half = slice_profile(&state, t_rev / 2.0, 2048, 0.1).unwrap();
    assert_eq!(half.peak_count, 1);
    assert!((half.peak_positions[0] - 0.5).abs() < 1e-3);
}

#[test]
fn slice_positions_are_ordered_and_interior() {
    let (state, _) = reference(30.0);
    let p = slice_profile(&state, state.cfg().revival_time() / 10.0, 1024, 0.05).unwrap();
    assert_eq!(p.peak_count, p.peak_positions.len());
    assert!(p.peak_positions.windows(2).all(|w| w[0] < w[1]));
    assert!(p.peak_positions.iter().all(|&x| x > 0.0 && x < 1.0));
}

#[test]
fn slice_counts_converge_under_grid_doubling() {
    for k in [5.0, 10.0, 30.0] {
        let (state, _) = reference(k);
        let t_rev = state.cfg().revival_time();
        for frac in [0.0, 0.1, 0.125, 1.0 / 6.0, 0.2, 0.25, 0.5] {
            let a = slice_profile(&state, frac * t_rev, 2048, 0.1).unwrap().peak_count;
            let b = slice_profile(&state, frac * t_rev, 4096, 0.1).unwrap().peak_count;
            assert_eq!(a, b, "p0 = {k}π, t = {frac} T_rev");
        }
    }
}

#[test]
fn slice_parameter_validation() {
    let (state, _) = reference(5.0);
    assert!(slice_profile(&state, 0.0, 32, 0.1).is_err());
    assert!(slice_profile(&state, 0.0, 128, 0.0).is_err());
    assert!(slice_profile(&state, 0.0, 128, 1.0).is_err());
}

#[test]
fn mirror_symmetry_of_reference_state() {
    let (state, _) = reference(30.0);
    assert!(symmetry_check(&state, 1000).unwrap() < 1e-9);
    assert!(symmetry_check(&state, 1).is_err());
}

#[test]
fn cubic_spectrum_breaks_mirror_symmetry() {
    let (state, _) = reference(30.0);
    let perturbed = state.with_energies(|n, e| e + 0.01 * f64::from(n).powi(3)).unwrap();
    let deviation = symmetry_check(&perturbed, 1000).unwrap();
    assert!(deviation > 1e-2, "deviation {deviation}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]
    #[test]
    fn mirror_symmetry_for_arbitrary_states(
        parts in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..40),
        n_min in 1u32..50,
    ) {
        let cfg = WellConfig::default();
        let coefficients: Vec<Complex64> = parts.iter().map(|&(re, im)| Complex64::new(re, im)).collect();
        prop_assume!(coefficients.iter().map(|c| c.norm_sqr()).sum::<f64>() > 1e-6);
        let energies = (0..coefficients.len() as u32)
            .map(|k| qcarpet::spectral::energy_of(&cfg, n_min + k).unwrap())
            .collect();
        let state = SpectralState::from_parts(cfg, n_min, coefficients, energies).unwrap();
        prop_assert!((state.norm() - 1.0).abs() < 1e-12);
        prop_assert!(symmetry_check(&state, 1000).unwrap() < 1e-9);
    }
}

#[test]
fn trace_endpoints_are_full_revivals() {
    let (state, packet) = reference(30.0);
    let scales = time_scales(state.cfg(), &packet);
    let trace = autocorr_trace(&state, TimeWindow::new(0.0, scales.t_rev, 10_000).unwrap());
    let peaks = detect_peaks(&trace, 0.9).unwrap();
    assert!(peaks.len() >= 2);
    let first = peaks.first().unwrap();
    let last = peaks.last().unwrap();
    assert_eq!(first.time, 0.0);
    assert_eq!(last.time, scales.t_rev);
    assert!(first.strength >= 1.0 - 1e-9 && last.strength >= 1.0 - 1e-9);
}

#[test]
fn early_peaks_follow_classical_period() {
    let (state, packet) = reference(30.0);
    let scales = time_scales(state.cfg(), &packet);
    let t_cl = scales.t_cl.unwrap();
    let trace = autocorr_trace(&state, TimeWindow::new(0.0, scales.t_rev, 10_000).unwrap());
    let peaks = detect_peaks(&trace, 0.3).unwrap();
    for k in 1..=2 {
        let near = peaks
            .iter()
            .any(|p| (p.time / t_cl - k as f64).abs() < 0.05);
        assert!(near, "no peak near {k} T_cl: {:?}", peaks.iter().take(8).map(|p| (p.time / t_cl, p.strength)).collect::<Vec<_>>());
    }
    let events = find_revivals(&trace, &scales, &DetectorConfig::default()).unwrap();
    let classical: Vec<_> = events.iter().filter(|e| e.kind == EventKind::Classical).collect();
    assert!(classical.len() >= 2);
}

#[test]
fn peak_times_strictly_increase_within_window() {
    let (state, packet) = reference(10.0);
    let scales = time_scales(state.cfg(), &packet);
    let window = TimeWindow::new(0.0, 1.01 * scales.t_rev, 20_000).unwrap();
    let trace = autocorr_trace(&state, window);
    let peaks = detect_peaks(&trace, 0.1).unwrap();
    assert!(peaks.windows(2).all(|w| w[0].time < w[1].time));
    assert!(peaks.iter().all(|p| p.time >= window.t_start() && p.time <= window.t_end()));
    assert!(peaks.iter().all(|p| (0.0..=1.0).contains(&p.strength)));
}

#[test]
fn strongest_event_past_start_is_full_revival() {
    for k in [5.0, 10.0, 30.0] {
        let (state, packet) = reference(k);
        let scales = time_scales(state.cfg(), &packet);
        let window = TimeWindow::new(0.0, 1.01 * scales.t_rev, 20_000).unwrap();
        let trace = autocorr_trace(&state, window);
        let events = find_revivals(&trace, &scales, &DetectorConfig::default()).unwrap();
        let top = events
            .iter()
            .filter(|e| e.time > 0.0)
            .max_by(|a, b| a.strength.total_cmp(&b.strength))
            .unwrap();
        assert_eq!(top.fraction, Fraction::new(1, 1), "p0 = {k}π");
        assert_eq!(top.kind, EventKind::Full);
    }
}

#[test]
fn matched_events_are_reduced_and_within_tolerance() {
    let (state, packet) = reference(30.0);
    let scales = time_scales(state.cfg(), &packet);
    let config = DetectorConfig::default();
    let trace = autocorr_trace(&state, TimeWindow::new(0.0, scales.t_rev, 20_000).unwrap());
    let events = find_revivals(&trace, &scales, &config).unwrap();
    let tol = config.match_tol_for(&scales);
    for e in &events {
        if let Some(f) = e.fraction {
            assert_eq!(Fraction::new(f.numer(), f.denom()), Some(f));
            assert!((e.time / scales.t_rev - f.value()).abs() < tol);
            assert!(f.denom() <= config.q_max);
            assert_eq!(e.kind == EventKind::Full, f.is_integer());
        }
    }
}

#[test]
fn prominence_helper_agrees_with_brute_force() {
    let (state, _) = reference(30.0);
    let t_rev = state.cfg().revival_time();
    for frac in [0.05, 0.1, 0.2, 0.3] {
        let values: Vec<f64> = (0..1024)
            .map(|j| qcarpet::dynamics::rho_x(&state, (j as f64 + 0.5) / 1024.0, frac * t_rev))
            .collect();
        assert_eq!(prominent_peaks(&values, 0.1).len(), count_prominent(&values, 0.1));
    }
}

#[test]
fn reference_trace_reproduces_fractional_set() {
    let (state, packet) = reference(30.0);
    let scales = time_scales(state.cfg(), &packet);
    let trace = autocorr_trace(&state, TimeWindow::new(0.0, scales.t_rev, 20_000).unwrap());
    let events = find_revivals(&trace, &scales, &DetectorConfig::default()).unwrap();
    let found: Vec<Fraction> = events
        .iter()
        .filter(|e| e.time > 0.0 && e.time <= scales.t_rev / 2.0)
        .filter_map(|e| e.fraction)
        .filter(|f| f.denom() <= 10)
        .collect();
    for q in [10, 8, 6, 5, 4] {
        assert!(found.contains(&Fraction::new(1, q).unwrap()), "missing 1/{q}: {found:?}");
    }
    assert!(found.contains(&Fraction::new(1, 2).unwrap()));
}
