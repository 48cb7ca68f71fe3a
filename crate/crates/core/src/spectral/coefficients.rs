use std::f64::consts::PI;

use num_complex::Complex64;

use super::{eigenfunction_x, GaussianPacket, NRange, SpectralState, WellConfig};
use crate::error::{Error, Result};
use crate::quadrature::{integrate, Tolerance};

/// Below this captured weight the truncation window is considered broken.
pub const MIN_CAPTURED_NORM: f64 = 0.999;
/// The default window is widened until it captures this much weight.
pub const WIDEN_TARGET: f64 = 1.0 - 1e-9;
/// Absolute tolerance of the coefficient quadrature.
pub const QUADRATURE_TOLERANCE: f64 = 1e-10;

const MAX_WIDENINGS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionOptions {
    /// Fixed window; `None` uses [`default_window`] and widens it as needed.
    pub n_range: Option<NRange>,
    pub min_captured_norm: f64,
}

impl Default for ExpansionOptions {
    fn default() -> Self {
        ExpansionOptions {
            n_range: None,
            min_captured_norm: MIN_CAPTURED_NORM,
        }
    }
}

impl ExpansionOptions {
    pub fn with_range(n_range: NRange) -> Self {
        ExpansionOptions {
            n_range: Some(n_range),
            ..Default::default()
        }
    }
}

fn half_width(cfg: &WellConfig, packet: &GaussianPacket, factor: u32) -> u32 {
    let w = (8.0 * cfg.length() / (PI * packet.sigma())).ceil() * f64::from(factor);
    w.min(f64::from(u32::MAX / 4)) as u32
}

fn window(n0: u32, half: u32) -> NRange {
    let min = n0.saturating_sub(half).max(1);
    let max = n0.saturating_add(half).max(min);
    NRange::new(min, max).expect("window bounds are ordered")
}

/// `[max(1, n₀ - w), n₀ + w]` with `w = ⌈8L/(πσ)⌉`, about eight envelope
/// half-widths of `|c_n|` on either side of the central quantum number.
pub fn default_window(cfg: &WellConfig, packet: &GaussianPacket) -> NRange {
    window(central_n(cfg, packet), half_width(cfg, packet, 1))
}

fn central_n(cfg: &WellConfig, packet: &GaussianPacket) -> u32 {
    let n0 = (packet.p0().abs() / cfg.momentum_quantum()).round();
    n0.min(f64::from(u32::MAX / 2)) as u32
}

/// Whole-line approximation of `c_n` for the Gaussian packet.
///
/// The integral of `u_n ψ₀` is extended from `[0, L]` to the real axis,
/// which leaves two Gaussian factors in `p₀ ± nπħ/L`. The overall phase is
/// `e^{+i p₀ x₀/ħ}`, which is what the `[0, L]` integral of the packet
/// produces.
pub fn closed_form_coefficient(cfg: &WellConfig, packet: &GaussianPacket, n: u32) -> Complex64 {
    let hbar = cfg.hbar();
    let sigma = packet.sigma();
    let k = f64::from(n) * PI / cfg.length();
    let q = packet.p0() / hbar;
    let prefactor = (4.0 * sigma * PI / (cfg.length() * PI.sqrt())).sqrt();
    let plus = crate::polar(
        (-0.5 * sigma * sigma * (q + k) * (q + k)).exp(),
        k * packet.x0(),
    );
    let minus = crate::polar(
        (-0.5 * sigma * sigma * (q - k) * (q - k)).exp(),
        -k * packet.x0(),
    );
    let phase = crate::polar(prefactor, q * packet.x0()) / Complex64::new(0.0, 2.0);
    phase * (plus - minus)
}

/// `c_n = ∫₀ᴸ u_n(x) ψ₀(x) dx` by adaptive quadrature.
pub fn quadrature_coefficient(cfg: &WellConfig, packet: &GaussianPacket, n: u32) -> Result<Complex64> {
    let cfg = *cfg;
    let packet = *packet;
    integrate(
        move |x| packet.amplitude(&cfg, x) * eigenfunction_x(&cfg, n, x),
        0.0,
        cfg.length(),
        Tolerance::absolute(QUADRATURE_TOLERANCE),
    )
    .map(|est| est.value)
    .map_err(|e| Error::Quadrature { n, error: e.error })
}

fn expand(
    cfg: &WellConfig,
    packet: &GaussianPacket,
    options: &ExpansionOptions,
    mut coefficient: impl FnMut(u32) -> Result<Complex64>,
) -> Result<SpectralState> {
    let collect = |range: NRange, coefficient: &mut dyn FnMut(u32) -> Result<Complex64>| {
        range.iter().map(coefficient).collect::<Result<Vec<_>>>()
    };
    let captured = |raw: &[Complex64]| raw.iter().map(|c| c.norm_sqr()).sum::<f64>();

    let (range, raw) = match options.n_range {
        Some(range) => (range, collect(range, &mut coefficient)?),
        None => {
            let n0 = central_n(cfg, packet);
            let mut factor = 1;
            let mut range = window(n0, half_width(cfg, packet, factor));
            let mut raw = collect(range, &mut coefficient)?;
            let mut norm = captured(&raw);
            for _ in 0..MAX_WIDENINGS {
                if norm >= WIDEN_TARGET {
                    break;
                }
                factor *= 2;
                let wider = window(n0, half_width(cfg, packet, factor));
                let wider_raw = collect(wider, &mut coefficient)?;
                let wider_norm = captured(&wider_raw);
                let gained = wider_norm - norm;
                range = wider;
                raw = wider_raw;
                norm = wider_norm;
                // The window already holds everything the basis can give;
                // the shortfall is weight outside the well.
                if gained <= 1e-15 {
                    break;
                }
            }
            (range, raw)
        }
    };

    let norm = captured(&raw);
    if !(norm >= options.min_captured_norm) {
        return Err(Error::Truncation {
            n_min: range.min(),
            n_max: range.max(),
            captured_norm: norm,
        });
    }
    SpectralState::from_raw(*cfg, range, raw)
}

/// Expansion using [`closed_form_coefficient`] over the default window.
pub fn coefficients_closed_form(
    cfg: &WellConfig,
    packet: &GaussianPacket,
    n_range: Option<NRange>,
) -> Result<SpectralState> {
    let options = ExpansionOptions {
        n_range,
        ..Default::default()
    };
    coefficients_closed_form_with(cfg, packet, &options)
}

pub fn coefficients_closed_form_with(
    cfg: &WellConfig,
    packet: &GaussianPacket,
    options: &ExpansionOptions,
) -> Result<SpectralState> {
    expand(cfg, packet, options, |n| Ok(closed_form_coefficient(cfg, packet, n)))
}

/// Expansion using [`quadrature_coefficient`]; the independent check on the
/// closed form.
pub fn coefficients_quadrature(
    cfg: &WellConfig,
    packet: &GaussianPacket,
    n_range: Option<NRange>,
) -> Result<SpectralState> {
    let options = ExpansionOptions {
        n_range,
        ..Default::default()
    };
    coefficients_quadrature_with(cfg, packet, &options)
}

pub fn coefficients_quadrature_with(
    cfg: &WellConfig,
    packet: &GaussianPacket,
    options: &ExpansionOptions,
) -> Result<SpectralState> {
    expand(cfg, packet, options, |n| quadrature_coefficient(cfg, packet, n))
}
