//! The invariant suite behind `qcarpet selfcheck`: fast structural checks
//! of the engine at the reference parameters.

use std::f64::consts::PI;

use qcarpet::dynamics::{
    autocorr_trace, autocorrelation, eigenfunction_p, momentum_norm, parseval_extent, position_norm,
    rho_x, TimeWindow, SINGULAR_BAND,
};
use qcarpet::revival::{
    find_revivals, match_fraction, prominent_peaks, slice_profile, symmetry_check, DetectorConfig, Fraction,
};
use qcarpet::spectral::{
    closed_form_coefficient, coefficients_closed_form, default_window, quadrature_coefficient, time_scales,
    GaussianPacket, SpectralState, WellConfig,
};
use qcarpet::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub passed: bool,
    pub detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Outcome {
            passed,
            detail: detail.into(),
        }
    }
}

pub struct Check {
    pub name: &'static str,
    pub run: fn() -> Outcome,
}

pub const CHECKS: &[Check] = &[
    Check { name: "exact-revival", run: exact_revival },
    Check { name: "time-scale-ratio", run: time_scale_ratio },
    Check { name: "mirror-symmetry", run: mirror_symmetry },
    Check { name: "half-revival-mirror", run: half_revival_mirror },
    Check { name: "oracle-equivalence", run: oracle_equivalence },
    Check { name: "conservation", run: conservation },
    Check { name: "momentum-eigenfunction", run: momentum_eigenfunction },
    Check { name: "fractional-revivals", run: fractional_revivals },
    Check { name: "fraction-exactness", run: fraction_exactness },
];

pub fn find(name: &str) -> Option<&'static Check> {
    CHECKS.iter().find(|c| c.name == name)
}

fn reference(k: f64) -> (WellConfig, GaussianPacket, SpectralState) {
    let cfg = WellConfig::default();
    let packet = GaussianPacket::reference(k * PI);
    let state = coefficients_closed_form(&cfg, &packet, None).expect("reference packet expands");
    (cfg, packet, state)
}

fn x_grid(samples: usize) -> impl Iterator<Item = f64> {
    (0..samples).map(move |j| (j as f64 + 0.5) / samples as f64)
}

fn exact_revival() -> Outcome {
    let mut worst_a: f64 = 0.0;
    let mut worst_rho: f64 = 0.0;
    for k in [5.0, 10.0, 30.0] {
        let (cfg, _, state) = reference(k);
        let t_rev = cfg.revival_time();
        worst_a = worst_a.max((autocorrelation(&state, t_rev).norm_sqr() - 1.0).abs());
        for x in x_grid(1024) {
            worst_rho = worst_rho.max((rho_x(&state, x, t_rev) - rho_x(&state, x, 0.0)).abs());
        }
    }
    Outcome::new(
        worst_a < 1e-9 && worst_rho < 1e-9,
        format!("max ||A|^2 - 1| = {worst_a:.2e}, max |drho| = {worst_rho:.2e}"),
    )
}

fn time_scale_ratio() -> Outcome {
    let cfg = WellConfig::default();
    let mut bad = Vec::new();
    for n0 in [5u64, 10, 30, 60, 150, 250] {
        let scales = time_scales(&cfg, &GaussianPacket::reference(n0 as f64 * PI));
        let exact = scales.n0 == n0 && scales.ratio == Some(2 * n0);
        if !exact {
            bad.push(n0);
        }
    }
    Outcome::new(bad.is_empty(), format!("T_rev/T_cl = 2 n0 for n0 in {{5,10,30,60,150,250}}; failures {bad:?}"))
}

fn mirror_symmetry() -> Outcome {
    let (_, _, state) = reference(30.0);
    let deviation = symmetry_check(&state, 1000).expect("valid sample count");
    let cubic = state
        .with_energies(|n, e| e + 0.01 * f64::from(n).powi(3))
        .expect("perturbed spectrum is increasing");
    let control = symmetry_check(&cubic, 1000).expect("valid sample count");
    Outcome::new(
        deviation < 1e-9 && control > 1e-3,
        format!("deviation {deviation:.2e}, cubic control {control:.2e}"),
    )
}

fn half_revival_mirror() -> Outcome {
    let (cfg, _, state) = reference(30.0);
    let t_half = cfg.revival_time() / 2.0;
    let worst = x_grid(1024)
        .map(|x| (rho_x(&state, x, t_half) - rho_x(&state, 1.0 - x, 0.0)).abs())
        .fold(0.0, f64::max);
    Outcome::new(worst < 1e-9, format!("max |rho(x, T_rev/2) - rho(L-x, 0)| = {worst:.2e}"))
}

fn oracle_equivalence() -> Outcome {
    let cfg = WellConfig::default();
    let packet = GaussianPacket::reference(30.0 * PI);
    let range = default_window(&cfg, &packet);
    let mut worst: f64 = 0.0;
    for n in range.iter() {
        let Ok(q) = quadrature_coefficient(&cfg, &packet, n) else {
            return Outcome::new(false, format!("quadrature failed for n = {n}"));
        };
        worst = worst.max((closed_form_coefficient(&cfg, &packet, n) - q).norm());
    }
    Outcome::new(
        worst < 1e-6,
        format!("max |c_closed - c_quad| = {worst:.2e} over n in [{}, {}]", range.min(), range.max()),
    )
}

fn conservation() -> Outcome {
    let (cfg, _, state) = reference(30.0);
    let t_rev = cfg.revival_time();
    let extent = parseval_extent(&state);
    let mut worst_x: f64 = 0.0;
    let mut worst_p: f64 = 0.0;
    for t in [0.0, t_rev / 7.0, t_rev / 3.0] {
        worst_x = worst_x.max((position_norm(&state, t, 2048) - 1.0).abs());
        match momentum_norm(&state, t, extent) {
            Ok(v) => worst_p = worst_p.max((v - 1.0).abs()),
            Err(e) => return Outcome::new(false, format!("momentum integral did not converge: {e:?}")),
        }
    }
    Outcome::new(
        worst_x < 1e-6 && worst_p < 1e-4,
        format!("position {worst_x:.2e}, momentum {worst_p:.2e} over |p| <= {extent:.1}"),
    )
}

fn momentum_eigenfunction() -> Outcome {
    let cfg = WellConfig::default();
    let expected = 0.5 / PI.sqrt();
    let band = SINGULAR_BAND * cfg.momentum_quantum();
    let mut worst_value: f64 = 0.0;
    let mut worst_jump: f64 = 0.0;
    for n in [1u32, 7, 30] {
        let pn = cfg.p_n(n);
        worst_value = worst_value.max((eigenfunction_p(&cfg, n, pn).norm() - expected).abs());
        for centre in [pn, -pn] {
            for side in [1.0, -1.0] {
                let inside = eigenfunction_p(&cfg, n, centre + side * band * (1.0 - 1e-9));
                let outside = eigenfunction_p(&cfg, n, centre + side * band * (1.0 + 1e-9));
                worst_jump = worst_jump.max((inside - outside).norm());
            }
        }
    }
    Outcome::new(
        worst_value < 1e-8 && worst_jump < 1e-8,
        format!("max ||phi_n(p_n)| - 1/(2 sqrt pi)| = {worst_value:.2e}, switch jump {worst_jump:.2e}"),
    )
}

/// Copy count at `T_rev/4` from the parity identity
/// `ψ(x, T_rev/4) = (1-i)/2 ψ₀(x) - (1+i)/2 ψ₀(L-x)`, evaluated on the
/// Gaussian itself without any expansion.
pub fn quarter_revival_oracle(packet: &GaussianPacket, samples: usize, prominence: f64) -> usize {
    let cfg = WellConfig::default();
    let a = Complex64::new(0.5, -0.5);
    let b = Complex64::new(0.5, 0.5);
    let density: Vec<f64> = x_grid(samples)
        .map(|x| (a * packet.amplitude(&cfg, x) - b * packet.amplitude(&cfg, 1.0 - x)).norm_sqr())
        .collect();
    prominent_peaks(&density, prominence).len()
}

fn fractional_revivals() -> Outcome {
    let (cfg, packet, state) = reference(30.0);
    let scales = time_scales(&cfg, &packet);
    let detector = DetectorConfig::default();
    let window = TimeWindow::new(0.0, scales.t_rev, 20_000).expect("valid window");
    let trace = autocorr_trace(&state, window);
    let events = find_revivals(&trace, &scales, &detector).expect("valid detector");
    let matched: Vec<Fraction> = events
        .iter()
        .filter(|e| e.time > 0.0 && e.time <= scales.t_rev / 2.0)
        .filter_map(|e| e.fraction)
        .filter(|f| f.denom() <= 10)
        .collect();
    let missing: Vec<u64> = [10, 8, 6, 5, 4]
        .into_iter()
        .filter(|&q| !matched.contains(&Fraction::new(1, q).expect("nonzero denominator")))
        .collect();

    let t_quarter = scales.t_rev / 4.0;
    let oracle = quarter_revival_oracle(&packet, 4096, detector.prominence);
    let counts: Vec<usize> = [detector.slice_samples, 2 * detector.slice_samples]
        .into_iter()
        .map(|n| slice_profile(&state, t_quarter, n, detector.prominence).expect("valid slice").peak_count)
        .collect();
    let mut distinct = matched.clone();
    distinct.sort_by(|a, b| a.value().total_cmp(&b.value()));
    distinct.dedup();
    let list: Vec<String> = distinct.iter().map(Fraction::to_string).collect();
    Outcome::new(
        missing.is_empty() && counts.iter().all(|&c| c == oracle),
        format!(
            "matched {{{}}}, missing {missing:?}; T_rev/4 copies {counts:?} vs oracle {oracle}",
            list.join(", ")
        ),
    )
}

fn fraction_exactness() -> Outcome {
    let t_rev = WellConfig::default().revival_time();
    let mut cases = 0;
    let mut failures = Vec::new();
    for q in 2..=12u64 {
        for p in 1..q as i64 {
            let Some(f) = Fraction::new(p, q) else { continue };
            if f.denom() != q {
                continue;
            }
            cases += 1;
            let t = f.value() * t_rev;
            if match_fraction(t, t_rev, 12, 0.01) != Ok(Some(f)) {
                failures.push(f.to_string());
            }
        }
    }
    Outcome::new(failures.is_empty(), format!("{cases} reduced fractions p/q in (0, 1), failures {failures:?}"))
}
