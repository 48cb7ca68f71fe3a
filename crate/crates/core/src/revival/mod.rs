//! Recurrence detection: autocorrelation peaks, rational revival times,
//! sub-packet counting and the `T_rev/2` mirror check.

mod fraction;
mod peaks;
mod slice;
mod symmetry;

pub use fraction::{best_rational, match_fraction, Fraction};
pub use peaks::{detect_peaks, Peak};
pub use slice::{prominent_peaks, slice_profile, SliceProfile};
pub use symmetry::symmetry_check;

use std::fmt::{self, Write as _};

use crate::dynamics::AutocorrTrace;
use crate::error::{Error, Result};
use crate::fmt::shortest;
use crate::spectral::TimeScales;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EventKind {
    /// Short-time recurrence at a multiple of `T_cl` with no small-`q` match.
    Classical,
    /// Matched to `T_rev·p/q` with `q > 1`.
    Fractional,
    /// Matched to an integer multiple of `T_rev`.
    Full,
    /// Neither matched to a fraction nor near a classical period.
    Unclassified,
}

impl EventKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            EventKind::Classical => "classical",
            EventKind::Fractional => "fractional",
            EventKind::Full => "full",
            EventKind::Unclassified => "unclassified",
        }
    }
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RevivalEvent {
    pub time: f64,
    pub strength: f64,
    pub fraction: Option<Fraction>,
    pub kind: EventKind,
}

/// Thresholds for turning a trace into classified events.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorConfig {
    /// Minimum `|A|²` for a peak to be reported.
    pub threshold: f64,
    /// Minimum `|A|²` for [`full_revivals`].
    pub full_threshold: f64,
    pub q_max: u64,
    /// Maximum `|t/T_rev - p/q|`; `None` means [`default_match_tol`].
    pub match_tol: Option<f64>,
    /// Classical-period match tolerance as a fraction of `T_cl`.
    pub classical_tol: f64,
    /// Relative prominence for [`slice_profile`].
    pub prominence: f64,
    pub slice_samples: usize,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        DetectorConfig {
            threshold: 0.1,
            full_threshold: 0.9,
            q_max: 12,
            match_tol: None,
            classical_tol: 1.0 / 20.0,
            prominence: 0.05,
            slice_samples: 2048,
        }
    }
}

/// `min(0.01, 0.6 T_cl/T_rev)`.
///
/// Autocorrelation peaks of a fractional revival sit up to half a classical
/// period away from `T_rev·p/q` (the copy nearest the initial position may
/// be mid-bounce), so the window must be a bit over `T_cl/2` wide.
pub fn default_match_tol(scales: &TimeScales) -> f64 {
    match scales.ratio {
        Some(ratio) => (0.6 / ratio as f64).min(0.01),
        None => 0.01,
    }
}

impl DetectorConfig {
    pub fn validate(&self) -> Result<()> {
        let unit = |what: &'static str, v: f64| {
            if v > 0.0 && v < 1.0 {
                Ok(())
            } else {
                Err(Error::invalid(what, format!("must lie in (0, 1), got {v}")))
            }
        };
        unit("threshold", self.threshold)?;
        unit("full-revival threshold", self.full_threshold)?;
        unit("prominence", self.prominence)?;
        unit("classical tolerance", self.classical_tol)?;
        if self.q_max < 1 {
            return Err(Error::invalid("q_max", "must be >= 1"));
        }
        if let Some(tol) = self.match_tol {
            if !(tol.is_finite() && tol > 0.0) {
                return Err(Error::invalid("fraction tolerance", format!("must be > 0, got {tol}")));
            }
        }
        if self.slice_samples < 64 {
            return Err(Error::invalid("slice samples", "need >= 64"));
        }
        Ok(())
    }

    pub fn match_tol_for(&self, scales: &TimeScales) -> f64 {
        self.match_tol.unwrap_or_else(|| default_match_tol(scales))
    }
}

/// Attaches a fraction of `T_rev` and a kind to each peak.
pub fn classify_peaks(
    peaks: &[Peak],
    scales: &TimeScales,
    config: &DetectorConfig,
) -> Result<Vec<RevivalEvent>> {
    config.validate()?;
    let tol = config.match_tol_for(scales);
    peaks
        .iter()
        .map(|peak| {
            let fraction = match_fraction(peak.time, scales.t_rev, config.q_max, tol)?;
            let kind = match fraction {
                Some(f) if f.is_integer() => EventKind::Full,
                Some(_) => EventKind::Fractional,
                None => match scales.in_classical_periods(peak.time) {
                    Some(periods)
                        if periods.round() >= 1.0
                            && (periods - periods.round()).abs() <= config.classical_tol =>
                    {
                        EventKind::Classical
                    }
                    _ => EventKind::Unclassified,
                },
            };
            Ok(RevivalEvent {
                time: peak.time,
                strength: peak.strength,
                fraction,
                kind,
            })
        })
        .collect()
}

/// Peak detection followed by classification.
pub fn find_revivals(
    trace: &AutocorrTrace,
    scales: &TimeScales,
    config: &DetectorConfig,
) -> Result<Vec<RevivalEvent>> {
    config.validate()?;
    let peaks = detect_peaks(trace, config.threshold)?;
    classify_peaks(&peaks, scales, config)
}

/// Full revivals strong enough to pass `full_threshold`.
pub fn full_revivals<'a>(
    events: &'a [RevivalEvent],
    config: &'a DetectorConfig,
) -> impl Iterator<Item = &'a RevivalEvent> + 'a {
    events
        .iter()
        .filter(move |e| e.kind == EventKind::Full && e.strength >= config.full_threshold)
}

/// CSV with columns `t,t_over_trev,p,q,strength,kind`; `p` and `q` are
/// empty for unmatched events.
pub fn events_to_csv(events: &[RevivalEvent], scales: &TimeScales) -> String {
    let mut out = String::from("t,t_over_trev,p,q,strength,kind\n");
    for e in events {
        let (p, q) = match e.fraction {
            Some(f) => (f.numer().to_string(), f.denom().to_string()),
            None => (String::new(), String::new()),
        };
        let _ = writeln!(
            out,
            "{},{},{p},{q},{},{}",
            shortest(e.time),
            shortest(e.time / scales.t_rev),
            shortest(e.strength),
            e.kind
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::TimeWindow;

    fn scales() -> TimeScales {
        let t_rev = 4.0 / std::f64::consts::PI;
        TimeScales {
            n0: 30,
            t_cl: Some(t_rev / 60.0),
            t_rev,
            ratio: Some(60),
        }
    }

    #[test]
    fn classification_rules() {
        let s = scales();
        let t_cl = s.t_cl.unwrap();
        let peaks = [
            Peak { time: s.t_rev * 0.25, strength: 0.5 },
            Peak { time: s.t_rev, strength: 1.0 },
            Peak { time: 1.01 * t_cl, strength: 0.7 },
            Peak { time: 1.3 * t_cl, strength: 0.4 },
        ];
        let events = classify_peaks(&peaks, &s, &DetectorConfig::default()).unwrap();
        assert_eq!(events[0].kind, EventKind::Fractional);
        assert_eq!(events[0].fraction, Fraction::new(1, 4));
        assert_eq!(events[1].kind, EventKind::Full);
        assert_eq!(events[2].kind, EventKind::Classical);
        assert_eq!(events[2].fraction, None);
        assert_eq!(events[3].kind, EventKind::Unclassified);
    }

    #[test]
    fn default_tolerance_scales_with_classical_period() {
        assert!((default_match_tol(&scales()) - 0.01).abs() < 1e-15);
        let mut s = scales();
        s.ratio = Some(500);
        assert!((default_match_tol(&s) - 0.0012).abs() < 1e-15);
        s.ratio = None;
        assert_eq!(default_match_tol(&s), 0.01);
    }

    #[test]
    fn csv_layout() {
        let s = scales();
        let events = [
            RevivalEvent {
                time: s.t_rev / 4.0,
                strength: 0.5,
                fraction: Fraction::new(1, 4),
                kind: EventKind::Fractional,
            },
            RevivalEvent {
                time: 0.3,
                strength: 0.2,
                fraction: None,
                kind: EventKind::Unclassified,
            },
        ];
        let csv = events_to_csv(&events, &s);
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "t,t_over_trev,p,q,strength,kind");
        assert!(lines[1].ends_with(",0.25,1,4,0.5,fractional"));
        assert!(lines[2].contains(",,,0.2,unclassified"));
    }

    #[test]
    fn invalid_config_rejected() {
        let trace = AutocorrTrace {
            window: TimeWindow::new(0.0, 1.0, 3).unwrap(),
            values: vec![1.0, 0.0, 1.0],
        };
        let bad = DetectorConfig {
            q_max: 0,
            ..Default::default()
        };
        assert!(find_revivals(&trace, &scales(), &bad).is_err());
        let bad = DetectorConfig {
            prominence: 1.5,
            ..Default::default()
        };
        assert!(find_revivals(&trace, &scales(), &bad).is_err());
    }
}
