use std::fmt::Write as _;

use num_complex::Complex64;

use super::{energy_unchecked, WellConfig};
use crate::error::{Error, Result};
use crate::fmt::shortest;

/// Inclusive range of quantum numbers `[min, max]`, `min >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NRange {
    min: u32,
    max: u32,
}

impl NRange {
    pub fn new(min: u32, max: u32) -> Result<Self> {
        if min == 0 || min > max {
            return Err(Error::invalid(
                "n range",
                format!("need 1 <= n_min <= n_max, got [{min}, {max}]"),
            ));
        }
        Ok(NRange { min, max })
    }

    pub fn min(&self) -> u32 {
        self.min
    }

    pub fn max(&self) -> u32 {
        self.max
    }

    pub fn len(&self) -> usize {
        (self.max - self.min) as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> {
        self.min..=self.max
    }
}

/// Truncated eigenbasis decomposition of a state.
///
/// Coefficients are stored renormalized to unit norm; `captured_norm` keeps
/// the weight the truncation window held before rescaling.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralState {
    cfg: WellConfig,
    range: NRange,
    coefficients: Vec<Complex64>,
    energies: Vec<f64>,
    captured_norm: f64,
}

impl SpectralState {
    /// Builds a state from raw box-spectrum coefficients over `range`.
    pub(crate) fn from_raw(cfg: WellConfig, range: NRange, raw: Vec<Complex64>) -> Result<Self> {
        let energies = range.iter().map(|n| energy_unchecked(&cfg, n)).collect();
        Self::from_parts(cfg, range.min, raw, energies)
    }

    /// Builds a state with an arbitrary (strictly increasing) spectrum. The
    /// coefficients are rescaled to unit norm.
    pub fn from_parts(
        cfg: WellConfig,
        n_min: u32,
        coefficients: Vec<Complex64>,
        energies: Vec<f64>,
    ) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::invalid("spectral state", "no coefficients"));
        }
        if coefficients.len() != energies.len() {
            return Err(Error::invalid(
                "spectral state",
                format!(
                    "{} coefficients but {} energies",
                    coefficients.len(),
                    energies.len()
                ),
            ));
        }
        let n_max = u32::try_from(coefficients.len() - 1)
            .ok()
            .and_then(|extra| n_min.checked_add(extra))
            .ok_or_else(|| Error::invalid("spectral state", "index range overflows"))?;
        let range = NRange::new(n_min, n_max)?;
        if energies.iter().any(|e| !e.is_finite()) || energies.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid(
                "spectral state",
                "energies must be finite and strictly increasing",
            ));
        }
        if coefficients.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::invalid("spectral state", "non-finite coefficient"));
        }
        let captured_norm: f64 = coefficients.iter().map(|c| c.norm_sqr()).sum();
        if captured_norm <= 0.0 {
            return Err(Error::invalid("spectral state", "zero norm"));
        }
        let scale = captured_norm.sqrt().recip();
        let coefficients = coefficients.into_iter().map(|c| c * scale).collect();
        Ok(SpectralState {
            cfg,
            range,
            coefficients,
            energies,
            captured_norm,
        })
    }

    /// Same coefficients, spectrum replaced by `f(n, E_n)`.
    pub fn with_energies(&self, f: impl Fn(u32, f64) -> f64) -> Result<Self> {
        let energies = self
            .range
            .iter()
            .zip(&self.energies)
            .map(|(n, &e)| f(n, e))
            .collect();
        let mut state = Self::from_parts(self.cfg, self.range.min, self.coefficients.clone(), energies)?;
        state.captured_norm = self.captured_norm;
        Ok(state)
    }

    pub fn cfg(&self) -> &WellConfig {
        &self.cfg
    }

    pub fn range(&self) -> NRange {
        self.range
    }

    pub fn n_min(&self) -> u32 {
        self.range.min
    }

    pub fn n_max(&self) -> u32 {
        self.range.max
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// `Σ|c_n|²` over the window before renormalization.
    pub fn captured_norm(&self) -> f64 {
        self.captured_norm
    }

    /// `(n, c_n, E_n)` in ascending `n`.
    pub fn modes(&self) -> impl Iterator<Item = (u32, Complex64, f64)> + '_ {
        self.range
            .iter()
            .zip(self.coefficients.iter().zip(&self.energies))
            .map(|(n, (&c, &e))| (n, c, e))
    }

    pub fn coefficient(&self, n: u32) -> Option<Complex64> {
        if n < self.range.min || n > self.range.max {
            return None;
        }
        Some(self.coefficients[(n - self.range.min) as usize])
    }

    /// Spectral centroid `Σ n |c_n|²`.
    pub fn centroid(&self) -> f64 {
        self.modes().map(|(n, c, _)| f64::from(n) * c.norm_sqr()).sum()
    }

    /// `Σ|c_n|²` of the stored (renormalized) coefficients.
    pub fn norm(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm_sqr()).sum()
    }

    /// CSV dump with columns `n,re,im,energy`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,re,im,energy\n");
        for (n, c, e) in self.modes() {
            let _ = writeln!(out, "{n},{},{},{}", shortest(c.re), shortest(c.im), shortest(e));
        }
        out
    }
}
