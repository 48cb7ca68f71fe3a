use std::fmt;

use crate::error::{Error, Result};

/// Reduced rational `p/q`, `q >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fraction {
    p: i64,
    q: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Fraction {
    /// Reduces `p/q`; `None` when `q = 0`.
    pub fn new(p: i64, q: u64) -> Option<Self> {
        if q == 0 {
            return None;
        }
        let g = gcd(p.unsigned_abs(), q).max(1);
        Some(Fraction {
            p: p / g as i64,
            q: q / g,
        })
    }

    pub fn numer(&self) -> i64 {
        self.p
    }

    pub fn denom(&self) -> u64 {
        self.q
    }

    pub fn is_integer(&self) -> bool {
        self.q == 1
    }

    pub fn value(&self) -> f64 {
        self.p as f64 / self.q as f64
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

/// Closest reduced rational to `x` with denominator at most `q_max`.
///
/// Walks the continued-fraction convergents of `x` and finishes with the
/// best semiconvergent, which yields the best approximation of the first
/// kind. Equal distances go to the smaller denominator.
pub fn best_rational(x: f64, q_max: u64) -> Fraction {
    assert!(q_max >= 1 && x.is_finite());
    let negative = x < 0.0;
    let target = x.abs();

    // (p0/q0, p1/q1) are the previous and current convergents.
    let (mut p0, mut q0, mut p1, mut q1) = (0u64, 1u64, 1u64, 0u64);
    let mut rem = target;
    loop {
        let a = rem.floor();
        // q0 + a*q1 > q_max, done; checked in floating point since `a` can
        // be huge once the expansion has converged.
        if q1 > 0 && a * q1 as f64 > (q_max - q0) as f64 {
            break;
        }
        if a > u32::MAX as f64 {
            break;
        }
        let a = a as u64;
        let (p2, q2) = (p0 + a * p1, q0 + a * q1);
        if q2 > q_max {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = rem - a as f64;
        if frac <= 0.0 {
            break;
        }
        rem = frac.recip();
    }

    if q1 == 0 {
        // Only reachable for |x| beyond u32 range.
        let p = target.round() as i64;
        return Fraction::new(if negative { -p } else { p }, 1).expect("q = 1");
    }
    let convergent = (p1, q1);
    let k = (q_max - q0) / q1;
    let semi = (p0 + k * p1, q0 + k * q1);
    let dist = |(p, q): (u64, u64)| (target - p as f64 / q as f64).abs();
    let (dc, ds) = (dist(convergent), dist(semi));
    let (p, q) = if ds < dc || (ds == dc && semi.1 < convergent.1) {
        semi
    } else {
        convergent
    };
    let p = p as i64;
    Fraction::new(if negative { -p } else { p }, q).expect("denominator is positive")
}

/// Matches `t` to `T_rev·p/q` with `q <= q_max`; `None` when the closest
/// such fraction is `tol` or more away from `t/T_rev`.
pub fn match_fraction(t: f64, t_rev: f64, q_max: u64, tol: f64) -> Result<Option<Fraction>> {
    if !(t_rev.is_finite() && t_rev > 0.0) {
        return Err(Error::invalid("revival time", format!("must be > 0, got {t_rev}")));
    }
    if q_max < 1 {
        return Err(Error::invalid("q_max", "must be >= 1"));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::invalid("fraction tolerance", format!("must be > 0, got {tol}")));
    }
    if !t.is_finite() {
        return Err(Error::invalid("event time", format!("must be finite, got {t}")));
    }
    let x = t / t_rev;
    let best = best_rational(x, q_max);
    Ok(((x - best.value()).abs() < tol).then_some(best))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Exhaustive search over all denominators.
    fn brute_force(x: f64, q_max: u64) -> (f64, u64) {
        let mut best = (f64::INFINITY, 0);
        for q in 1..=q_max {
            let p = (x * q as f64).round();
            let d = (x - p / q as f64).abs();
            if d < best.0 {
                best = (d, q);
            }
        }
        best
    }

    #[test]
    fn reduces() {
        let f = Fraction::new(6, 8).unwrap();
        assert_eq!((f.numer(), f.denom()), (3, 4));
        assert_eq!(Fraction::new(0, 5).unwrap(), Fraction::new(0, 1).unwrap());
        assert!(Fraction::new(1, 0).is_none());
        assert_eq!(Fraction::new(-4, 6).unwrap().to_string(), "-2/3");
    }

    #[test]
    fn known_matches() {
        let t_rev = 4.0 / std::f64::consts::PI;
        assert_eq!(
            match_fraction(t_rev / 4.0, t_rev, 10, 1e-3).unwrap(),
            Fraction::new(1, 4)
        );
        assert_eq!(
            match_fraction(0.1 * t_rev, t_rev, 10, 1e-3).unwrap(),
            Fraction::new(1, 10)
        );
        assert_eq!(match_fraction(0.123456 * t_rev, t_rev, 8, 1e-4).unwrap(), None);
    }

    #[test]
    fn unmatched_residual_matches_exhaustive_search() {
        let (d, q) = brute_force(0.123456, 8);
        assert_eq!(q, 8);
        assert!((d - (0.125 - 0.123456)).abs() < 1e-15);
        assert!(d > 1e-4);
    }

    #[test]
    fn pi_convergents() {
        let pi = std::f64::consts::PI;
        assert_eq!(best_rational(pi, 7), Fraction::new(22, 7).unwrap());
        assert_eq!(best_rational(pi, 106), Fraction::new(333, 106).unwrap());
        assert_eq!(best_rational(pi, 113), Fraction::new(355, 113).unwrap());
        // semiconvergent between 22/7 and 333/106
        assert_eq!(best_rational(pi, 57), Fraction::new(179, 57).unwrap());
    }

    #[test]
    fn exact_on_all_small_fractions() {
        let t_rev = 4.0 / std::f64::consts::PI;
        for q in 1..=12u64 {
            for p in 0..=q {
                let f = Fraction::new(p as i64, q).unwrap();
                if f.denom() != q {
                    continue;
                }
                let t = p as f64 / q as f64 * t_rev;
                assert_eq!(match_fraction(t, t_rev, 12, 1e-9).unwrap(), Some(f));
            }
        }
    }

    #[test]
    fn ties_prefer_smaller_denominator() {
        // 0.25 is equidistant from 0/1 and 1/2 with q_max = 2.
        assert_eq!(best_rational(0.25, 2), Fraction::new(0, 1).unwrap());
        assert_eq!(best_rational(0.75, 2), Fraction::new(1, 1).unwrap());
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(match_fraction(0.1, 0.0, 10, 1e-3).is_err());
        assert!(match_fraction(0.1, -1.0, 10, 1e-3).is_err());
        assert!(match_fraction(0.1, 1.0, 0, 1e-3).is_err());
        assert!(match_fraction(0.1, 1.0, 10, 0.0).is_err());
    }

    #[test]
    fn handles_values_beyond_one_and_negative() {
        assert_eq!(best_rational(1.0049, 12), Fraction::new(1, 1).unwrap());
        assert_eq!(best_rational(2.5, 12), Fraction::new(5, 2).unwrap());
        assert_eq!(best_rational(-0.2, 12), Fraction::new(-1, 5).unwrap());
    }

    proptest! {
        #[test]
        fn agrees_with_exhaustive_search(x in 0.0f64..3.0, q_max in 1u64..40) {
            let f = best_rational(x, q_max);
            let (d, q) = brute_force(x, q_max);
            prop_assert!(f.denom() <= q_max);
            let got = (x - f.value()).abs();
            prop_assert!((got - d).abs() <= 1e-15, "x={x} got {f} ({got}) best q={q} ({d})");
        }
    }
}
