//! Certified positive-root counting for sparse univariate polynomials.
//!
//! Coefficients are taken as the exact dyadic rationals the doubles
//! represent, so "number of positive roots" has a definite answer.
//!
//! Roots in `(0, 1)` are isolated by bisection of `[0, 1]`. On `[0, 1]`
//! every monomial is nonnegative and increasing, so splitting the
//! polynomial into its positive and negative parts gives cheap rigorous
//! enclosures of `p` and `p'` over a cell from endpoint values alone. A cell
//! is discarded when the enclosure of `p` excludes zero, and accepted as
//! holding exactly one simple root when the enclosure of `p'` excludes zero
//! and `p` changes sign across it. Roots in `(1, inf)` are roots in `(0, 1)`
//! of the reversed polynomial `x^D p(1/x)`; `x = 1` is checked exactly.
//!
//! Endpoint signs come from a floating-point evaluation with a running
//! error bound, falling back to exact big-integer arithmetic when the bound
//! does not decide.

mod dyadic;

use serde::{Deserialize, Serialize};

use crate::systems::FewnomialSystem;
use crate::{Error, Result};

pub use dyadic::{exact_enclosure, exact_sign};

const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;
/// Cells narrower than this (relative to their right end) are not split.
const RESOLUTION: f64 = 1.0 / (1u64 << 48) as f64;
const CELL_BUDGET: usize = 1 << 20;
/// Cells narrower than this (relative) get exact endpoint values when the
/// floating-point tests fail.
const EXACT_WIDTH: f64 = 1.0 / (1u64 << 24) as f64;

/// Number of sign alternations in the nonzero subsequence.
pub fn sign_changes(coefficients: &[f64]) -> Result<usize> {
    let mut signs = coefficients
        .iter()
        .filter(|c| **c != 0.0)
        .map(|c| c.is_sign_positive());
    let Some(mut last) = signs.next() else {
        return Err(Error::ZeroPolynomial);
    };
    let mut changes = 0;
    for s in signs {
        if s != last {
            changes += 1;
            last = s;
        }
    }
    Ok(changes)
}

/// Sparse Laurent polynomial with strictly increasing exponents and nonzero
/// coefficients.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparsePoly {
    exponents: Vec<i64>,
    coefficients: Vec<f64>,
}

impl SparsePoly {
    pub fn new(exponents: Vec<i64>, coefficients: Vec<f64>) -> Result<Self> {
        if exponents.len() != coefficients.len() {
            return Err(Error::InvalidArgument(format!(
                "{} exponents but {} coefficients",
                exponents.len(),
                coefficients.len()
            )));
        }
        if exponents.is_empty() {
            return Err(Error::ZeroPolynomial);
        }
        if exponents.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(
                "exponents must be strictly increasing".into(),
            ));
        }
        if coefficients.iter().any(|c| *c == 0.0 || !c.is_finite()) {
            return Err(Error::InvalidArgument(
                "coefficients must be finite and nonzero".into(),
            ));
        }
        Ok(Self {
            exponents,
            coefficients,
        })
    }

    /// Collects terms in any order, summing repeated exponents and dropping
    /// zero coefficients.
    pub fn from_terms<I: IntoIterator<Item = (i64, f64)>>(terms: I) -> Result<Self> {
        let mut terms: Vec<(i64, f64)> = terms.into_iter().collect();
        terms.sort_by_key(|t| t.0);
        let mut exps: Vec<i64> = Vec::with_capacity(terms.len());
        let mut coeffs: Vec<f64> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            if exps.last() == Some(&e) {
                *coeffs.last_mut().unwrap() += c;
            } else {
                exps.push(e);
                coeffs.push(c);
            }
        }
        let (exps, coeffs): (Vec<_>, Vec<_>) = exps
            .into_iter()
            .zip(coeffs)
            .filter(|(_, c)| *c != 0.0)
            .unzip();
        Self::new(exps, coeffs)
    }

    /// The single equation of a univariate system, with coefficients
    /// `sigma(a) * xi[a]`.
    pub fn from_system(system: &FewnomialSystem) -> Result<Self> {
        if system.n() != 1 {
            return Err(Error::Unsupported(format!(
                "univariate counting needs n = 1, got {}",
                system.n()
            )));
        }
        let row = system.weighted_row(0);
        Self::from_terms(system.support().exponents().iter().map(|e| e[0]).zip(row))
    }

    pub fn exponents(&self) -> &[i64] {
        &self.exponents
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn t(&self) -> usize {
        self.exponents.len()
    }

    /// Multiplies by `x^k`.
    pub fn translated(&self, k: i64) -> Self {
        Self {
            exponents: self.exponents.iter().map(|e| e + k).collect(),
            coefficients: self.coefficients.clone(),
        }
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(
            self.exponents.clone(),
            self.coefficients.iter().map(|v| v * c).collect(),
        )
    }

    /// Translate so the smallest exponent is 0.
    pub fn normalized(&self) -> Self {
        self.translated(-self.exponents[0])
    }

    /// `p(1/x)`, support `-A`.
    pub fn reflected(&self) -> Self {
        Self {
            exponents: self.exponents.iter().rev().map(|e| -e).collect(),
            coefficients: self.coefficients.iter().rev().copied().collect(),
        }
    }

    /// Floating-point value at `x > 0`.
    pub fn eval(&self, x: f64) -> f64 {
        let lx = x.ln();
        crate::systems::compensated_sum(
            self.exponents
                .iter()
                .zip(&self.coefficients)
                .map(|(&e, &c)| c * (e as f64 * lx).exp()),
        )
    }
}

/// Open interval `(lo, hi)` with dyadic endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootInterval {
    pub lo: f64,
    pub hi: f64,
}

impl RootInterval {
    pub fn contains(&self, x: f64) -> bool {
        self.lo < x && x < self.hi
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RootCount {
    /// Certified simple roots; a lower bound when `degenerate` is set.
    pub count: usize,
    pub intervals: Vec<RootInterval>,
    /// Set when some region could not be resolved at working precision.
    pub degenerate: bool,
}

/// Counts the distinct simple roots of `p` in `(0, inf)`.
pub fn count_positive_roots(p: &SparsePoly) -> RootCount {
    let q = p.normalized();
    if sign_changes(&q.coefficients).unwrap_or(0) == 0 {
        return RootCount::default();
    }
    let inner = UnitPoly::new(&q);
    let outer = UnitPoly::new(&q.reflected().normalized());

    let left = inner.isolate();
    let right = outer.isolate();
    let mut intervals = left.intervals.clone();
    for iv in &right.intervals {
        intervals.push(RootInterval {
            lo: (1.0 / iv.hi).next_down().max(1.0),
            hi: (1.0 / iv.lo).next_up(),
        });
    }
    let mut degenerate = left.unresolved || right.unresolved;

    if inner.sign_at_one() == 0 {
        let slope = exact_sign(
            &inner.coeffs,
            Some(&inner.exps),
            &derivative_exps(&inner.exps),
            1.0,
        );
        if slope == 0 {
            degenerate = true;
        } else {
            match isolate_at_one(&inner, &outer, &intervals) {
                Some(iv) => intervals.push(iv),
                None => degenerate = true,
            }
        }
    }
    intervals.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    debug_assert!(intervals.len() < q.t());
    RootCount {
        count: intervals.len(),
        intervals,
        degenerate,
    }
}

/// Counts the distinct simple roots of `p` in `(0, 1)`; a root at 1 is not
/// included.
pub fn count_in_unit_interval(p: &SparsePoly) -> RootCount {
    let q = p.normalized();
    if sign_changes(&q.coefficients).unwrap_or(0) == 0 {
        return RootCount::default();
    }
    let iso = UnitPoly::new(&q).isolate();
    RootCount {
        count: iso.intervals.len(),
        intervals: iso.intervals,
        degenerate: iso.unresolved,
    }
}

// Exponents of the terms c_i e_i x^{e_i - 1}. The constant term gets
// multiplier 0 and is skipped.
fn derivative_exps(exps: &[u64]) -> Vec<u64> {
    exps.iter().map(|&e| e.saturating_sub(1)).collect()
}

fn isolate_at_one(
    inner: &UnitPoly,
    outer: &UnitPoly,
    others: &[RootInterval],
) -> Option<RootInterval> {
    let below = others
        .iter()
        .map(|iv| iv.hi)
        .filter(|&h| h <= 1.0)
        .fold(0.0, f64::max);
    let above = others
        .iter()
        .map(|iv| iv.lo)
        .filter(|&l| l >= 1.0)
        .fold(f64::INFINITY, f64::min);
    let one = inner.eval(1.0);
    let one_outer = outer.eval(1.0);
    let mut delta = 1.0 / 1024.0;
    while delta > RESOLUTION {
        let a = 1.0 - delta;
        let monotone = |poly: &UnitPoly, at_one: &PointEval| {
            let (lo, hi) = poly.derivative_enclosure(&poly.eval(a), at_one);
            lo > 0.0 || hi < 0.0
        };
        if monotone(inner, &one)
            && monotone(outer, &one_outer)
            && a >= below
            && 1.0 + delta <= above
        {
            return Some(RootInterval {
                lo: a,
                hi: 1.0 + delta,
            });
        }
        delta /= 2.0;
    }
    None
}

/// Normalized polynomial (exponents >= 0, constant term present) prepared
/// for evaluation on `[0, 1]`.
struct UnitPoly {
    exps: Vec<u64>,
    coeffs: Vec<f64>,
    dcoeffs: Vec<f64>,
    /// Relative error bound of each evaluated (nonnegative) partial sum.
    gamma: f64,
    /// Absolute error bound from underflow.
    slack: f64,
}

#[derive(Clone, Copy, Debug)]
struct PointEval {
    x: f64,
    pos: f64,
    neg: f64,
    dpos: f64,
    dneg: f64,
}

struct Isolation {
    intervals: Vec<RootInterval>,
    unresolved: bool,
}

struct Cell {
    a: PointEval,
    b: PointEval,
    sign_a: i8,
    sign_b: i8,
}

fn pow_ops(k: u64) -> u64 {
    if k <= 1 {
        0
    } else {
        2 * u64::from(64 - k.leading_zeros())
    }
}

fn pow_u64(mut base: f64, mut k: u64) -> f64 {
    let mut acc = 1.0;
    while k > 0 {
        if k & 1 == 1 {
            acc *= base;
        }
        k >>= 1;
        if k > 0 {
            base *= base;
        }
    }
    acc
}

impl UnitPoly {
    fn new(p: &SparsePoly) -> Self {
        debug_assert_eq!(p.exponents[0], 0);
        let exps: Vec<u64> = p.exponents.iter().map(|&e| e as u64).collect();
        let coeffs = p.coefficients.clone();
        let dcoeffs: Vec<f64> = coeffs
            .iter()
            .zip(&exps)
            .map(|(&c, &e)| c * e as f64)
            .collect();
        let mut chain = 0u64;
        let mut prev = 0u64;
        for &e in exps.iter().filter(|&&e| e > 0) {
            chain += pow_ops(e - 1 - prev) + 1;
            prev = e - 1;
        }
        let t = exps.len() as u64;
        let gamma = 1.05 * (chain + t + 8) as f64 * UNIT_ROUNDOFF;
        let magnitude: f64 = coeffs.iter().chain(&dcoeffs).map(|c| c.abs()).sum();
        let slack = 4.0 * (chain + 8) as f64 * magnitude * f64::from_bits(1);
        Self {
            exps,
            coeffs,
            dcoeffs,
            gamma,
            slack,
        }
    }

    fn eval(&self, x: f64) -> PointEval {
        let mut out = PointEval {
            x,
            pos: 0.0,
            neg: 0.0,
            dpos: 0.0,
            dneg: 0.0,
        };
        let mut pwd = 1.0;
        let mut prev = 0u64;
        for ((&e, &c), &dc) in self.exps.iter().zip(&self.coeffs).zip(&self.dcoeffs) {
            if e == 0 {
                if c > 0.0 {
                    out.pos += c;
                } else {
                    out.neg -= c;
                }
                continue;
            }
            let gap = e - 1 - prev;
            if gap > 0 {
                pwd *= pow_u64(x, gap);
            }
            prev = e - 1;
            let term = c * (pwd * x);
            let dterm = dc * pwd;
            if c > 0.0 {
                out.pos += term;
                out.dpos += dterm;
            } else {
                out.neg -= term;
                out.dneg -= dterm;
            }
        }
        out
    }

    fn value_enclosure(&self, ev: &PointEval) -> (f64, f64) {
        let v = ev.pos - ev.neg;
        let err = self.gamma * (ev.pos + ev.neg) + self.slack;
        ((v - err).next_down(), (v + err).next_up())
    }

    fn sign(&self, ev: &PointEval) -> i8 {
        let (lo, hi) = self.value_enclosure(ev);
        if lo > 0.0 {
            1
        } else if hi < 0.0 {
            -1
        } else {
            exact_sign(&self.coeffs, None, &self.exps, ev.x)
        }
    }

    fn sign_at_one(&self) -> i8 {
        self.sign(&self.eval(1.0))
    }

    fn derivative_enclosure(&self, a: &PointEval, b: &PointEval) -> (f64, f64) {
        let lo_f = 1.0 - self.gamma;
        let hi_f = 1.0 + self.gamma;
        let lo = a.dpos * lo_f - b.dneg * hi_f - self.slack;
        let hi = b.dpos * hi_f - a.dneg * lo_f + self.slack;
        (lo.next_down(), hi.next_up())
    }

    /// Returns `(excluded, monotone)` for the cell `[a, b]`. With `exact`
    /// the endpoint values are computed in big-integer arithmetic.
    fn classify(&self, a: &PointEval, b: &PointEval, exact: bool) -> (bool, bool) {
        let lo_f = 1.0 - self.gamma;
        let hi_f = 1.0 + self.gamma;
        let width = (b.x - a.x).next_up();
        let (dlo, dhi) = self.derivative_enclosure(a, b);

        let mut lo = (a.pos * lo_f - b.neg * hi_f - self.slack).next_down();
        let mut hi = (b.pos * hi_f - a.neg * lo_f + self.slack).next_up();
        let ((alo, ahi), (blo, bhi)) = if exact {
            (
                exact_enclosure(&self.coeffs, &self.exps, a.x),
                exact_enclosure(&self.coeffs, &self.exps, b.x),
            )
        } else {
            (self.value_enclosure(a), self.value_enclosure(b))
        };
        // p(x) = p(a) + int_a^x p'  and  p(x) = p(b) - int_x^b p'
        lo = lo.max((alo + (dlo * width).min(0.0)).next_down());
        hi = hi.min((ahi + (dhi * width).max(0.0)).next_up());
        lo = lo.max((blo - (dhi * width).max(0.0)).next_down());
        hi = hi.min((bhi - (dlo * width).min(0.0)).next_up());
        (lo > 0.0 || hi < 0.0, dlo > 0.0 || dhi < 0.0)
    }

    /// Roots in the open interval `(0, 1)`.
    fn isolate(&self) -> Isolation {
        let start = self.eval(0.0);
        let end = self.eval(1.0);
        let mut stack = vec![Cell {
            sign_a: self.sign(&start),
            sign_b: self.sign(&end),
            a: start,
            b: end,
        }];
        let mut intervals = Vec::new();
        let mut unresolved = false;
        let mut processed = 0usize;
        while let Some(cell) = stack.pop() {
            processed += 1;
            if processed > CELL_BUDGET {
                unresolved = true;
                break;
            }
            let (mut excluded, monotone) = self.classify(&cell.a, &cell.b, false);
            if !excluded
                && !monotone
                && cell.sign_a == cell.sign_b
                && cell.b.x - cell.a.x <= EXACT_WIDTH * cell.b.x
            {
                excluded = self.classify(&cell.a, &cell.b, true).0;
            }
            if excluded {
                continue;
            }
            if monotone {
                let change = i16::from(cell.sign_a) * i16::from(cell.sign_b) < 0;
                // an interval touching 0 would map to an unbounded one on the
                // reflected side, so split it once more
                if !change || cell.a.x > 0.0 {
                    if change {
                        intervals.push(RootInterval {
                            lo: cell.a.x,
                            hi: cell.b.x,
                        });
                    }
                    continue;
                }
            }
            let (a, b) = (cell.a.x, cell.b.x);
            if b - a <= RESOLUTION * b.max(f64::MIN_POSITIVE) {
                unresolved = true;
                continue;
            }
            let Some((mid, sign_mid)) = self.split_point(a, b) else {
                unresolved = true;
                continue;
            };
            stack.push(Cell {
                a: mid,
                b: cell.b,
                sign_a: sign_mid,
                sign_b: cell.sign_b,
            });
            stack.push(Cell {
                a: cell.a,
                b: mid,
                sign_a: cell.sign_a,
                sign_b: sign_mid,
            });
        }
        intervals.sort_by(|x, y| x.lo.total_cmp(&y.lo));
        Isolation {
            intervals,
            unresolved,
        }
    }

    // A point strictly inside (a, b) where p is nonzero.
    fn split_point(&self, a: f64, b: f64) -> Option<(PointEval, i8)> {
        let w = b - a;
        for frac in [0.5, 0.5 + 1.0 / 64.0, 0.5 - 1.0 / 64.0, 0.5 + 3.0 / 64.0] {
            let m = a + w * frac;
            if !(a < m && m < b) {
                continue;
            }
            let ev = self.eval(m);
            let s = self.sign(&ev);
            if s != 0 {
                return Some((ev, s));
            }
        }
        None
    }
}
