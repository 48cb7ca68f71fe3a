use crate::dynamics::{evolved_amplitudes, position_sum};
use crate::error::{Error, Result};
use crate::spectral::SpectralState;

/// Prominent maxima of `ρ(x, t)` at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct SliceProfile {
    pub time: f64,
    pub peak_positions: Vec<f64>,
    pub peak_count: usize,
}

/// Indices of local maxima whose prominence, relative to the global
/// maximum, exceeds `relative_prominence`.
///
/// Prominence is the height above the higher of the two lowest points
/// reached before climbing to a higher sample (or the array edge) on each
/// side. Flat tops are reported at their middle sample. Maxima touching the
/// array edge are not counted.
pub fn prominent_peaks(values: &[f64], relative_prominence: f64) -> Vec<usize> {
    let n = values.len();
    let global = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if n < 3 || !(global > 0.0) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut i = 1;
    while i < n - 1 {
        let v = values[i];
        if !(v > values[i - 1]) {
            i += 1;
            continue;
        }
        let mut j = i;
        while j + 1 < n && values[j + 1] == v {
            j += 1;
        }
        if j + 1 >= n || !(values[j + 1] < v) {
            i = j + 1;
            continue;
        }
        let mut left_min = v;
        for &w in values[..i].iter().rev() {
            if w > v {
                break;
            }
            left_min = left_min.min(w);
        }
        let mut right_min = v;
        for &w in &values[j + 1..] {
            if w > v {
                break;
            }
            right_min = right_min.min(w);
        }
        let prominence = v - left_min.max(right_min);
        if prominence / global > relative_prominence {
            out.push((i + j) / 2);
        }
        i = j + 1;
    }
    out
}

/// Samples `ρ(x, t)` at `x_samples` cell centres of `(0, L)` and reports its
/// prominent maxima.
pub fn slice_profile(
    state: &SpectralState,
    t: f64,
    x_samples: usize,
    prominence: f64,
) -> Result<SliceProfile> {
    if x_samples < 64 {
        return Err(Error::invalid("slice samples", format!("need >= 64, got {x_samples}")));
    }
    if !(prominence > 0.0 && prominence < 1.0) {
        return Err(Error::invalid("prominence", format!("must lie in (0, 1), got {prominence}")));
    }
    let length = state.cfg().length();
    let amplitudes = evolved_amplitudes(state, t);
    let xs: Vec<f64> = (0..x_samples)
        .map(|j| length * (j as f64 + 0.5) / x_samples as f64)
        .collect();
    let density: Vec<f64> = xs
        .iter()
        .map(|&x| position_sum(state, &amplitudes, x).norm_sqr())
        .collect();
    let peak_positions: Vec<f64> = prominent_peaks(&density, prominence)
        .into_iter()
        .map(|j| xs[j])
        .collect();
    Ok(SliceProfile {
        time: t,
        peak_count: peak_positions.len(),
        peak_positions,
    })
}
