use crate::dynamics::AutocorrTrace;
use crate::error::{Error, Result};

/// A local maximum of `|A(t)|²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub time: f64,
    pub strength: f64,
}

/// Strict local maxima of the trace above `threshold`, refined by a
/// three-point parabola.
///
/// A window endpoint counts when it exceeds its single neighbour; `|A|²` is
/// even about `t = 0` and `t = T_rev`, so the exact revival at the ends of a
/// `[0, T_rev]` window is reported. Endpoint peaks are not refined.
pub fn detect_peaks(trace: &AutocorrTrace, threshold: f64) -> Result<Vec<Peak>> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::invalid("peak threshold", format!("must lie in (0, 1), got {threshold}")));
    }
    let v = &trace.values;
    let n = v.len();
    if n < 2 {
        return Ok(Vec::new());
    }
    let dt = trace.window.step();
    let mut peaks = Vec::new();
    if v[0] > v[1] && v[0] > threshold {
        peaks.push(Peak {
            time: trace.window.time(0),
            strength: v[0].clamp(0.0, 1.0),
        });
    }
    for i in 1..n - 1 {
        let (l, c, r) = (v[i - 1], v[i], v[i + 1]);
        if !(c > l && c > r && c > threshold) {
            continue;
        }
        let curvature = l - 2.0 * c + r;
        let offset = 0.5 * (l - r) / curvature;
        let strength = c - 0.25 * (l - r) * offset;
        peaks.push(Peak {
            time: trace.window.time(i) + offset * dt,
            strength: strength.clamp(0.0, 1.0),
        });
    }
    if v[n - 1] > v[n - 2] && v[n - 1] > threshold {
        peaks.push(Peak {
            time: trace.window.time(n - 1),
            strength: v[n - 1].clamp(0.0, 1.0),
        });
    }
    Ok(peaks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::TimeWindow;

    fn trace(values: Vec<f64>) -> AutocorrTrace {
        let window = TimeWindow::new(0.0, (values.len() - 1) as f64, values.len()).unwrap();
        AutocorrTrace { window, values }
    }

    #[test]
    fn constant_trace_has_no_peaks() {
        assert!(detect_peaks(&trace(vec![0.5; 100]), 0.3).unwrap().is_empty());
    }

    #[test]
    fn empty_trace_has_no_peaks() {
        let mut t = trace(vec![0.5, 0.5]);
        t.values.clear();
        assert!(detect_peaks(&t, 0.3).unwrap().is_empty());
    }

    #[test]
    fn parabola_vertex_recovered() {
        // samples of 0.8 - (t - 3.3)²/10 on integers
        let values: Vec<f64> = (0..8).map(|k| 0.8 - (k as f64 - 3.3).powi(2) / 10.0).collect();
        let peaks = detect_peaks(&trace(values), 0.1).unwrap();
        assert_eq!(peaks.len(), 1);
        assert!((peaks[0].time - 3.3).abs() < 1e-12);
        assert!((peaks[0].strength - 0.8).abs() < 1e-12);
    }

    #[test]
    fn threshold_and_endpoints() {
        let peaks = detect_peaks(&trace(vec![1.0, 0.2, 0.4, 0.2, 0.05, 0.95]), 0.3).unwrap();
        let times: Vec<f64> = peaks.iter().map(|p| p.time).collect();
        assert_eq!(times.len(), 3);
        assert_eq!(times[0], 0.0);
        assert!((times[1] - 2.0).abs() < 1e-12);
        assert_eq!(times[2], 5.0);
        assert!(detect_peaks(&trace(vec![1.0, 0.2, 0.4, 0.2, 0.05, 0.95]), 0.5).unwrap().len() == 2);
    }

    #[test]
    fn plateaus_are_not_strict_maxima() {
        assert!(detect_peaks(&trace(vec![0.1, 0.6, 0.6, 0.1]), 0.3).unwrap().is_empty());
    }

    #[test]
    fn threshold_bounds() {
        let t = trace(vec![0.1, 0.5, 0.1]);
        assert!(detect_peaks(&t, 0.0).is_err());
        assert!(detect_peaks(&t, 1.0).is_err());
        assert!(detect_peaks(&t, f64::NAN).is_err());
    }
}
