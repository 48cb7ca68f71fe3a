use crate::dynamics::autocorrelation;
use crate::error::{Error, Result};
use crate::spectral::SpectralState;

/// `max_k | |A(T_rev/2 + τ_k)| - |A(T_rev/2 - τ_k)| |` over `samples`
/// uniform `τ_k` in `[0, T_rev/2]`, with `T_rev` taken from the well.
///
/// Zero up to round-off for the exact quadratic spectrum, since
/// `A(T_rev - t) = A(t)*`.
pub fn symmetry_check(state: &SpectralState, samples: usize) -> Result<f64> {
    if samples < 2 {
        return Err(Error::invalid("symmetry samples", format!("need >= 2, got {samples}")));
    }
    let half = 0.5 * state.cfg().revival_time();
    let step = half / (samples - 1) as f64;
    let deviation = (0..samples)
        .map(|k| {
            let tau = k as f64 * step;
            let after = autocorrelation(state, half + tau).norm();
            let before = autocorrelation(state, half - tau).norm();
            (after - before).abs()
        })
        .fold(0.0, f64::max);
    Ok(deviation)
}
