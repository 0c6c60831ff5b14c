//! Closed-form upper bounds on positive zero counts.

use serde::Serialize;

use crate::{Error, Result};

/// Above this Khovanskii's bound is only reported through its log2.
pub const KHOVANSKII_REPORT_LIMIT: f64 = 1e300;

fn choose2(m: i64) -> f64 {
    if m < 2 {
        0.0
    } else {
        (m * (m - 1) / 2) as f64
    }
}

/// `C(t, k)` as a float, 0 when `k > t`.
pub fn binomial(t: u64, k: u64) -> f64 {
    if k > t {
        return 0.0;
    }
    let k = k.min(t - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (t - i) as f64 / (i + 1) as f64;
    }
    acc.round()
}

/// `log2(2^{C(t-1,2)} (n+1)^{t-1})`.
pub fn khovanskii_log2(n: u64, t: u64) -> f64 {
    let m = t as i64 - 1;
    choose2(m) + m.max(0) as f64 * ((n + 1) as f64).log2()
}

/// Khovanskii's fewnomial bound `2^{C(t-1,2)} (n+1)^{t-1}`; infinite once it
/// overflows.
pub fn khovanskii(n: u64, t: u64) -> f64 {
    let m = t as i64 - 1;
    let pow2 = choose2(m);
    if pow2 > 1100.0 {
        return f64::INFINITY;
    }
    2f64.powf(pow2) * ((n + 1) as f64).powi(m.max(0) as i32)
}

/// Bihan and Sottile: `(e^2 + 3)/4 * 2^{C(t-n-1,2)} * n^{t-n-1}`.
pub fn bihan_sottile(n: u64, t: u64) -> Result<f64> {
    if t < n + 1 {
        return Err(Error::InvalidArgument(format!(
            "bihan_sottile needs t >= n + 1, got n = {n}, t = {t}"
        )));
    }
    let k = (t - n - 1) as i64;
    let e2 = std::f64::consts::E * std::f64::consts::E;
    Ok((e2 + 3.0) / 4.0 * 2f64.powf(choose2(k)) * (n as f64).powi(k as i32))
}

/// `C(t, n) / 2^{n-1}`; 0 when `t < n`.
pub fn main_bound(n: u64, t: u64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    binomial(t, n) / 2f64.powi(n as i32 - 1)
}

/// `(2/pi) sqrt(t) ln t`.
pub fn univariate_bound(t: u64) -> f64 {
    let t = t as f64;
    2.0 / std::f64::consts::PI * t.sqrt() * t.ln()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub n: u64,
    pub t: u64,
    /// `t - 1`; only stated for `n = 1`.
    pub descartes: Option<f64>,
    /// `None` once the value passes [`KHOVANSKII_REPORT_LIMIT`].
    pub khovanskii: Option<f64>,
    pub khovanskii_log2: f64,
    pub bihan_sottile: Option<f64>,
    pub main: f64,
    pub univariate_expected: Option<f64>,
}

impl BoundReport {
    pub fn new(n: u64, t: u64) -> Self {
        let k = khovanskii(n, t);
        Self {
            n,
            t,
            descartes: (n == 1).then(|| t.saturating_sub(1) as f64),
            khovanskii: (k <= KHOVANSKII_REPORT_LIMIT).then_some(k),
            khovanskii_log2: khovanskii_log2(n, t),
            bihan_sottile: bihan_sottile(n, t).ok(),
            main: main_bound(n, t),
            univariate_expected: (n == 1).then(|| univariate_bound(t)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn khovanskii_examples() {
        assert_eq!(khovanskii(1, 2), 2.0);
        assert_eq!(khovanskii(2, 3), 18.0);
        assert_eq!(khovanskii(1, 3), 8.0);
        assert!(close(khovanskii_log2(2, 3), 18f64.log2(), 1e-12));
        assert!(khovanskii(3, 60).is_infinite());
        let r = BoundReport::new(3, 60);
        assert!(r.khovanskii.is_none());
        assert!(r.khovanskii_log2 > 1700.0);
    }

    #[test]
    fn bihan_sottile_examples() {
        assert!(close(bihan_sottile(2, 4).unwrap(), 5.1945, 1e-4));
        assert!(close(bihan_sottile(1, 2).unwrap(), 2.5973, 1e-4));
        assert!(close(bihan_sottile(3, 5).unwrap(), 7.7918, 1e-4));
        assert!(bihan_sottile(3, 3).is_err());
    }

    #[test]
    fn main_bound_examples() {
        assert_eq!(main_bound(2, 4), 3.0);
        assert_eq!(main_bound(1, 3), 3.0);
        assert_eq!(main_bound(3, 6), 5.0);
        assert_eq!(main_bound(3, 2), 0.0);
        for t in 1..50 {
            assert_eq!(main_bound(1, t), t as f64);
        }
    }

    #[test]
    fn univariate_bound_examples() {
        assert_eq!(univariate_bound(1), 0.0);
        assert!(close(univariate_bound(4), 1.7651, 1e-4));
        assert!(close(univariate_bound(100), 29.317, 1e-3));
    }

    #[test]
    fn main_bound_below_khovanskii() {
        for t in 2..=12u64 {
            for n in 1..t {
                let (m, k) = (main_bound(n, t), khovanskii(n, t));
                // (n, t) = (1, 2) is the one tie: both equal 2
                if (n, t) == (1, 2) {
                    assert_eq!(m, k);
                } else {
                    assert!(m < k, "n = {n}, t = {t}");
                }
            }
        }
    }

    #[test]
    fn main_bound_decays_along_diagonals() {
        for k in 1..=5u64 {
            for n in k..=30 {
                assert!(main_bound(n + 1, n + 1 + k) / main_bound(n, n + k) < 1.0);
            }
        }
    }

    #[test]
    fn report_shape() {
        let r = BoundReport::new(1, 5);
        assert_eq!(r.descartes, Some(4.0));
        assert_eq!(r.main, 5.0);
        assert!(r.univariate_expected.is_some());
        let r = BoundReport::new(2, 2);
        assert_eq!(r.bihan_sottile, None);
        assert_eq!(r.descartes, None);
    }
}
