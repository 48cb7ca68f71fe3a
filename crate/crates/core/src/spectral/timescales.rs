use super::{GaussianPacket, WellConfig};

/// Classical period and revival time of a packet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeScales {
    /// Central quantum number `round(|p₀| L/(πħ))`.
    pub n0: u64,
    /// `2mL²/(n₀ħπ)`; undefined when `n₀ = 0`.
    pub t_cl: Option<f64>,
    /// `4mL²/(ħπ)`.
    pub t_rev: f64,
    /// `T_rev/T_cl = 2n₀`, kept as an integer.
    pub ratio: Option<u64>,
}

impl TimeScales {
    /// `t / T_cl`, if the classical period is defined.
    pub fn in_classical_periods(&self, t: f64) -> Option<f64> {
        self.t_cl.map(|t_cl| t / t_cl)
    }
}

/// Time scales from the quadratic spectrum. Ties in the rounding of `n₀` go
/// away from zero.
pub fn time_scales(cfg: &WellConfig, packet: &GaussianPacket) -> TimeScales {
    let n0 = (packet.p0().abs() / cfg.momentum_quantum()).round() as u64;
    let t_rev = cfg.revival_time();
    let (t_cl, ratio) = if n0 == 0 {
        (None, None)
    } else {
        let ratio = n0.saturating_mul(2);
        (Some(t_rev / ratio as f64), Some(ratio))
    };
    TimeScales {
        n0,
        t_cl,
        t_rev,
        ratio,
    }
}
