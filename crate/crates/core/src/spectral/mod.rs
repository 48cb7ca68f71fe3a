//! Box eigenstates, Gaussian expansion coefficients and time scales.
//!
//! Sums over stationary states start at `n = 1`; the `n = 0` sine mode is
//! identically zero.

mod coefficients;
mod state;
mod timescales;

pub use coefficients::{
    closed_form_coefficient, coefficients_closed_form, coefficients_closed_form_with,
    coefficients_quadrature, coefficients_quadrature_with, default_window, quadrature_coefficient,
    ExpansionOptions, MIN_CAPTURED_NORM, QUADRATURE_TOLERANCE, WIDEN_TARGET,
};
pub use state::{NRange, SpectralState};
pub use timescales::{time_scales, TimeScales};

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Physical constants of the well: particle mass, well width and ħ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WellConfig {
    mass: f64,
    length: f64,
    hbar: f64,
}

impl Default for WellConfig {
    /// Natural units, `m = L = ħ = 1`.
    fn default() -> Self {
        WellConfig {
            mass: 1.0,
            length: 1.0,
            hbar: 1.0,
        }
    }
}

fn positive(what: &'static str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::invalid(what, format!("must be finite and > 0, got {v}")))
    }
}

impl WellConfig {
    pub fn new(mass: f64, length: f64, hbar: f64) -> Result<Self> {
        Ok(WellConfig {
            mass: positive("mass", mass)?,
            length: positive("well length", length)?,
            hbar: positive("hbar", hbar)?,
        })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Momentum spacing `πħ/L` between neighbouring eigenstates.
    pub fn momentum_quantum(&self) -> f64 {
        PI * self.hbar / self.length
    }

    /// `p_n = nπħ/L`.
    pub fn p_n(&self, n: u32) -> f64 {
        f64::from(n) * self.momentum_quantum()
    }

    /// Revival time `4mL²/(πħ)`; independent of the packet.
    pub fn revival_time(&self) -> f64 {
        4.0 * self.mass * self.length * self.length / (PI * self.hbar)
    }
}

/// Narrowest packet accepted, as a fraction of `L`; the basis size grows
/// as `L/σ`.
pub const MIN_WIDTH_FRACTION: f64 = 1e-3;

/// Largest `|p₀|` accepted, in units of `πħ/L`.
pub const MAX_MOMENTUM_QUANTA: f64 = 1e6;

/// Initial Gaussian wave packet: center, width and mean momentum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPacket {
    x0: f64,
    sigma: f64,
    p0: f64,
}

impl GaussianPacket {
    pub fn new(cfg: &WellConfig, x0: f64, sigma: f64, p0: f64) -> Result<Self> {
        let sigma = positive("packet width", sigma)?;
        if !(x0.is_finite() && x0 > 0.0 && x0 < cfg.length) {
            return Err(Error::invalid(
                "packet center",
                format!("must lie strictly inside (0, {}), got {x0}", cfg.length),
            ));
        }
        if sigma < MIN_WIDTH_FRACTION * cfg.length {
            return Err(Error::invalid(
                "packet width",
                format!("must be at least {} L, got {sigma}", MIN_WIDTH_FRACTION),
            ));
        }
        let max_p0 = MAX_MOMENTUM_QUANTA * cfg.momentum_quantum();
        if !(p0.is_finite() && p0.abs() <= max_p0) {
            return Err(Error::invalid("mean momentum", format!("must be finite with |p0| <= {max_p0}, got {p0}")));
        }
        Ok(GaussianPacket { x0, sigma, p0 })
    }

    /// The `σ = 0.1`, `x₀ = 0.5` packet in the default well.
    pub fn reference(p0: f64) -> Self {
        GaussianPacket {
            x0: 0.5,
            sigma: 0.1,
            p0,
        }
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }

    /// Normalized initial wave function
    /// `(πσ²)^{-1/4} exp(-(x-x₀)²/2σ²) exp(i p₀ x/ħ)` on the whole real line.
    pub fn amplitude(&self, cfg: &WellConfig, x: f64) -> Complex64 {
        let d = (x - self.x0) / self.sigma;
        let envelope = (PI * self.sigma * self.sigma).powf(-0.25) * (-0.5 * d * d).exp();
        crate::polar(envelope, self.p0 * x / cfg.hbar)
    }
}

/// Eigenenergy `E_n = n²π²ħ²/(2mL²)`.
pub fn energy_of(cfg: &WellConfig, n: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("quantum number", "n must be >= 1"));
    }
    Ok(energy_unchecked(cfg, n))
}

pub(crate) fn energy_unchecked(cfg: &WellConfig, n: u32) -> f64 {
    let p = cfg.p_n(n);
    p * p / (2.0 * cfg.mass)
}

/// Position eigenfunction `√(2/L) sin(nπx/L)` inside the well, zero outside.
pub fn eigenfunction_x(cfg: &WellConfig, n: u32, x: f64) -> f64 {
    if x <= 0.0 || x >= cfg.length {
        return 0.0;
    }
    (2.0 / cfg.length).sqrt() * (f64::from(n) * PI * x / cfg.length).sin()
}
