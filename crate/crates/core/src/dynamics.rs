//! Exact evolution of a [`SpectralState`]: autocorrelation, position and
//! momentum densities.
//!
//! Densities are evaluated amplitude-first, `|Σ c_n f_n e^{-iE_n t/ħ}|²`,
//! summing in ascending `n`. The literal double sums are kept as
//! `*_double_sum` for verification.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fmt::shortest;
use crate::quadrature::{integrate_panels, trapezoid, NotConverged, Tolerance};
use crate::spectral::{eigenfunction_x, GaussianPacket, SpectralState, TimeScales, WellConfig};

/// Uniform time grid with both endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeWindow {
    t_start: f64,
    t_end: f64,
    samples: usize,
}

impl TimeWindow {
    pub fn new(t_start: f64, t_end: f64, samples: usize) -> Result<Self> {
        if !(t_start.is_finite() && t_end.is_finite()) || t_start >= t_end {
            return Err(Error::invalid(
                "time window",
                format!("need finite t_start < t_end, got [{t_start}, {t_end}]"),
            ));
        }
        if samples < 2 {
            return Err(Error::invalid("time window", format!("need >= 2 samples, got {samples}")));
        }
        Ok(TimeWindow {
            t_start,
            t_end,
            samples,
        })
    }

    /// Degenerate one-sample window at `t`, for single-row grids.
    pub fn instant(t: f64) -> Result<Self> {
        if !t.is_finite() {
            return Err(Error::invalid("time window", format!("non-finite instant {t}")));
        }
        Ok(TimeWindow {
            t_start: t,
            t_end: t,
            samples: 1,
        })
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn step(&self) -> f64 {
        if self.samples < 2 {
            return 0.0;
        }
        (self.t_end - self.t_start) / (self.samples - 1) as f64
    }

    /// Sample `k`; the last sample is exactly `t_end`.
    pub fn time(&self, k: usize) -> f64 {
        if k + 1 == self.samples {
            self.t_end
        } else {
            self.t_start + k as f64 * self.step()
        }
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.samples).map(move |k| self.time(k))
    }
}

/// `|A(t)|²` sampled over a window.
#[derive(Debug, Clone, PartialEq)]
pub struct AutocorrTrace {
    pub window: TimeWindow,
    pub values: Vec<f64>,
}

impl AutocorrTrace {
    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.window.times()
    }

    /// Time axis in classical periods, `T = t/T_cl`.
    pub fn rescaled_times(&self, scales: &TimeScales) -> Option<Vec<f64>> {
        let t_cl = scales.t_cl?;
        Some(self.times().map(|t| t / t_cl).collect())
    }

    /// CSV with columns `t,t_over_tcl,a2`; the middle column is empty when
    /// the classical period is undefined.
    pub fn to_csv(&self, scales: &TimeScales) -> String {
        let mut out = String::from("t,t_over_tcl,a2\n");
        for (t, v) in self.times().zip(&self.values) {
            let rescaled = scales.in_classical_periods(t).map(shortest).unwrap_or_default();
            let _ = writeln!(out, "{},{},{}", shortest(t), rescaled, shortest(*v));
        }
        out
    }
}

fn evolution_phase(energy: f64, hbar: f64, t: f64) -> Complex64 {
    crate::polar(1.0, -energy * t / hbar)
}

/// `A(t) = Σ|c_n|² e^{iE_n t/ħ}`.
pub fn autocorrelation(state: &SpectralState, t: f64) -> Complex64 {
    let hbar = state.cfg().hbar();
    state
        .modes()
        .fold(Complex64::new(0.0, 0.0), |acc, (_, c, e)| {
            acc + evolution_phase(e, hbar, t).conj() * c.norm_sqr()
        })
}

pub fn autocorr_trace(state: &SpectralState, window: TimeWindow) -> AutocorrTrace {
    let values = (0..window.samples())
        .into_par_iter()
        .map(|k| autocorrelation(state, window.time(k)).norm_sqr())
        .collect();
    AutocorrTrace { window, values }
}

/// Evolved coefficients `c_n e^{-iE_n t/ħ}` in ascending `n`.
pub fn evolved_amplitudes(state: &SpectralState, t: f64) -> Vec<Complex64> {
    let hbar = state.cfg().hbar();
    state
        .modes()
        .map(|(_, c, e)| c * evolution_phase(e, hbar, t))
        .collect()
}

pub(crate) fn position_sum(state: &SpectralState, amplitudes: &[Complex64], x: f64) -> Complex64 {
    let cfg = state.cfg();
    state
        .range()
        .iter()
        .zip(amplitudes)
        .fold(Complex64::new(0.0, 0.0), |acc, (n, &a)| acc + a * eigenfunction_x(cfg, n, x))
}

/// `ψ(x, t)`.
pub fn wavefunction_x(state: &SpectralState, x: f64, t: f64) -> Complex64 {
    position_sum(state, &evolved_amplitudes(state, t), x)
}

/// `ρ(x, t) = |ψ(x, t)|²`.
pub fn rho_x(state: &SpectralState, x: f64, t: f64) -> f64 {
    wavefunction_x(state, x, t).norm_sqr()
}

/// `Σ_{n,m} c_n c_m* u_n(x) u_m(x) e^{-i(E_n - E_m)t/ħ}`, with its
/// round-off imaginary part left in.
pub fn rho_x_double_sum(state: &SpectralState, x: f64, t: f64) -> Complex64 {
    let cfg = state.cfg();
    let hbar = cfg.hbar();
    let modes: Vec<_> = state
        .modes()
        .map(|(n, c, e)| (c, eigenfunction_x(cfg, n, x), e))
        .collect();
    let mut sum = Complex64::new(0.0, 0.0);
    for &(cn, un, en) in &modes {
        for &(cm, um, em) in &modes {
            sum += cn * cm.conj() * (un * um) * evolution_phase(en - em, hbar, t);
        }
    }
    sum
}

/// Momentum eigenfunction
/// `√(ħ/πL) p_n/(p² - p_n²) [(-1)ⁿ e^{-ipL/ħ} - 1]`,
/// the Fourier transform of `u_n` with kernel `e^{-ipx/ħ}/√(2πħ)`.
///
/// Within `SINGULAR_BAND·πħ/L` of `p = ±p_n` the removable pole is replaced
/// by a second-order expansion of the bracket.
pub fn eigenfunction_p(cfg: &WellConfig, n: u32, p: f64) -> Complex64 {
    let wall_phase = crate::polar(1.0, -p * cfg.length() / cfg.hbar());
    eigenfunction_p_with_phase(cfg, n, p, wall_phase)
}

/// Half-width of the band around `±p_n`, in units of `πħ/L`, where
/// [`eigenfunction_p`] switches to the series form.
pub const SINGULAR_BAND: f64 = 1e-6;

fn eigenfunction_p_with_phase(cfg: &WellConfig, n: u32, p: f64, wall_phase: Complex64) -> Complex64 {
    let p_n = cfg.p_n(n);
    let norm = (cfg.hbar() / (PI * cfg.length())).sqrt();
    let band = SINGULAR_BAND * cfg.momentum_quantum();
    let a = cfg.length() / cfg.hbar();

    let near = if (p - p_n).abs() < band {
        Some((1.0, p - p_n))
    } else if (p + p_n).abs() < band {
        Some((-1.0, p + p_n))
    } else {
        None
    };
    match near {
        Some((side, delta)) => {
            // bracket = e^{-iaδ} - 1 ≈ -iaδ - a²δ²/2; one δ cancels the pole.
            let reduced = Complex64::new(-0.5 * a * a * delta, -a);
            reduced * (norm * p_n / (2.0 * side * p_n + delta))
        }
        None => {
            let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
            let bracket = wall_phase * sign - 1.0;
            bracket * (norm * p_n / (p * p - p_n * p_n))
        }
    }
}

pub(crate) fn momentum_sum(state: &SpectralState, amplitudes: &[Complex64], p: f64) -> Complex64 {
    let cfg = state.cfg();
    let wall_phase = crate::polar(1.0, -p * cfg.length() / cfg.hbar());
    state
        .range()
        .iter()
        .zip(amplitudes)
        .fold(Complex64::new(0.0, 0.0), |acc, (n, &a)| {
            acc + a * eigenfunction_p_with_phase(cfg, n, p, wall_phase)
        })
}

/// `φ(p, t)`.
pub fn wavefunction_p(state: &SpectralState, p: f64, t: f64) -> Complex64 {
    momentum_sum(state, &evolved_amplitudes(state, t), p)
}

/// `γ(p, t) = |φ(p, t)|²`.
pub fn gamma_p(state: &SpectralState, p: f64, t: f64) -> f64 {
    wavefunction_p(state, p, t).norm_sqr()
}

pub fn gamma_p_double_sum(state: &SpectralState, p: f64, t: f64) -> Complex64 {
    let cfg = state.cfg();
    let hbar = cfg.hbar();
    let modes: Vec<_> = state
        .modes()
        .map(|(n, c, e)| (c, eigenfunction_p(cfg, n, p), e))
        .collect();
    let mut sum = Complex64::new(0.0, 0.0);
    for &(cn, fn_, en) in &modes {
        for &(cm, fm, em) in &modes {
            sum += cn * cm.conj() * fn_ * fm.conj() * evolution_phase(en - em, hbar, t);
        }
    }
    sum
}

/// Carpet momentum extent `|p₀| + 10πħ/L`, covering both `±p₀` lobes.
pub fn default_momentum_extent(cfg: &WellConfig, packet: &GaussianPacket) -> f64 {
    packet.p0().abs() + 10.0 * cfg.momentum_quantum()
}

/// Momentum half-range used for norm checks, `16 p_{n_max}`.
///
/// Once the packet has touched the walls `γ(p, t)` falls off only as `p⁻⁴`,
/// so the carpet extent loses ~10⁻³ of the norm at generic times.
pub fn parseval_extent(state: &SpectralState) -> f64 {
    16.0 * state.cfg().p_n(state.n_max())
}

/// `∫₀ᴸ ρ(x, t) dx` by the trapezoid rule on `points` samples. The density
/// is a cosine polynomial of degree `2 n_max`, which the rule integrates
/// exactly once `points > 2 n_max`.
pub fn position_norm(state: &SpectralState, t: f64, points: usize) -> f64 {
    let amplitudes = evolved_amplitudes(state, t);
    trapezoid(
        |x| position_sum(state, &amplitudes, x).norm_sqr(),
        0.0,
        state.cfg().length(),
        points,
    )
}

/// `∫ γ(p, t) dp` over `[-extent, extent]`, adaptively in panels of one
/// `2πħ/L` oscillation of the wall phase.
pub fn momentum_norm(state: &SpectralState, t: f64, extent: f64) -> Result<f64, NotConverged> {
    let amplitudes = evolved_amplitudes(state, t);
    let period = 2.0 * state.cfg().momentum_quantum();
    let panels = ((2.0 * extent / period).ceil() as usize).max(1);
    integrate_panels(
        |p| momentum_sum(state, &amplitudes, p).norm_sqr(),
        -extent,
        extent,
        panels,
        Tolerance::absolute(1e-9),
    )
    .map(|e| e.value)
}
