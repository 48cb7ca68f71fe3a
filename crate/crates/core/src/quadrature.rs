//! Globally adaptive 21-point Gauss-Kronrod quadrature.
//!
//! Intervals are bisected in order of largest error estimate until the summed
//! estimate drops below the requested tolerance. The error estimate is the
//! plain `|K21 - G10|` difference, without the QUADPACK rescaling heuristics,
//! which is conservative for the smooth integrands used in this crate.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_060,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_115,
    0.562_757_134_668_604_683_339_000_099_273,
    0.433_395_394_129_247_190_799_265_943_166,
    0.294_392_862_701_460_198_131_126_603_104,
    0.148_874_338_981_631_210_884_826_001_130,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_459,
    0.054_755_896_574_351_996_031_381_300_245,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_326,
    0.123_491_976_262_065_851_077_208_814_231,
    0.134_709_217_311_473_325_928_054_001_772,
    0.142_775_938_577_060_080_797_094_273_139,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_390,
];

// Gauss 10-point weights, paired with XGK[1], XGK[3], ..., XGK[9].
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_658,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

/// Default cap on the number of subintervals.
pub const MAX_INTERVALS: usize = 4096;

/// Values that can be integrated: reals and complex numbers.
pub trait Integrand:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn zero() -> Self;
    fn magnitude(self) -> f64;
}

impl Integrand for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl Integrand for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub error: f64,
    pub intervals: usize,
}

/// Quadrature stopped at the interval cap with the estimate still too large.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NotConverged {
    pub error: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Tolerance {
    pub fn absolute(abs: f64) -> Self {
        Tolerance {
            abs,
            rel: 0.0,
            max_intervals: MAX_INTERVALS,
        }
    }
}

struct Segment<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
}

impl<T> PartialEq for Segment<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl<T> Eq for Segment<T> {}
impl<T> PartialOrd for Segment<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Segment<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod21<T: Integrand, F: FnMut(f64) -> T>(f: &mut F, a: f64, b: f64) -> (T, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = T::zero();
    for j in 0..10 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod = kronrod + pair * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + pair * WG[j / 2];
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).magnitude();
    (value, error)
}

/// Integrates `f` over `[a, b]`.
pub fn integrate<T, F>(mut f: F, a: f64, b: f64, tol: Tolerance) -> Result<Estimate<T>, NotConverged>
where
    T: Integrand,
    F: FnMut(f64) -> T,
{
    if a == b {
        return Ok(Estimate {
            value: T::zero(),
            error: 0.0,
            intervals: 0,
        });
    }
    let (value, error) = kronrod21(&mut f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value, error });
    let mut total = value;
    let mut total_error = error;

    loop {
        let target = tol.abs.max(tol.rel * total.magnitude());
        if total_error <= target {
            break;
        }
        if heap.len() >= tol.max_intervals {
            return Err(NotConverged {
                error: total_error,
                intervals: heap.len(),
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval can no longer be split in floating point.
            heap.push(worst);
            return Err(NotConverged {
                error: total_error,
                intervals: heap.len(),
            });
        }
        let (lv, le) = kronrod21(&mut f, worst.a, mid);
        let (rv, re) = kronrod21(&mut f, mid, worst.b);
        total = total - worst.value + lv + rv;
        total_error += le + re - worst.error;
        heap.push(Segment { a: worst.a, b: mid, value: lv, error: le });
        heap.push(Segment { a: mid, b: worst.b, value: rv, error: re });
    }

    // Re-sum in interval order so the result does not carry the running
    // cancellation error of the incremental updates.
    let mut segments = heap.into_vec();
    segments.sort_by(|l, r| l.a.total_cmp(&r.a));
    let intervals = segments.len();
    let value = segments.iter().fold(T::zero(), |acc, s| acc + s.value);
    let error = segments.iter().map(|s| s.error).sum();
    Ok(Estimate {
        value,
        error,
        intervals,
    })
}

/// Integrates over `[a, b]` split into `panels` equal pieces, each handled
/// adaptively with an equal share of the tolerance. Suited to long, highly
/// oscillatory ranges where a single adaptive pass wastes subdivisions.
pub fn integrate_panels<T, F>(
    mut f: F,
    a: f64,
    b: f64,
    panels: usize,
    tol: Tolerance,
) -> Result<Estimate<T>, NotConverged>
where
    T: Integrand,
    F: FnMut(f64) -> T,
{
    let panels = panels.max(1);
    let share = Tolerance {
        abs: tol.abs / panels as f64,
        ..tol
    };
    let width = (b - a) / panels as f64;
    let mut value = T::zero();
    let mut error = 0.0;
    let mut intervals = 0;
    for k in 0..panels {
        let lo = a + k as f64 * width;
        let hi = if k + 1 == panels { b } else { a + (k + 1) as f64 * width };
        let part = integrate(&mut f, lo, hi, share)?;
        value = value + part.value;
        error += part.error;
        intervals += part.intervals;
    }
    Ok(Estimate {
        value,
        error,
        intervals,
    })
}

/// Composite trapezoid rule on `points` equally spaced samples (endpoints
/// included). Exact for trigonometric polynomials whose period divides the
/// interval, which covers `rho(x, t)` over the well.
pub fn trapezoid<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, points: usize) -> f64 {
    assert!(points >= 2, "trapezoid rule needs at least two points");
    let h = (b - a) / (points - 1) as f64;
    let mut sum = 0.5 * (f(a) + f(b));
    for k in 1..points - 1 {
        sum += f(a + k as f64 * h);
    }
    sum * h
}
