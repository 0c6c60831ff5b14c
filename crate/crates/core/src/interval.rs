//! Closed intervals with outward rounding.
//!
//! Basic operations round each endpoint one ulp outward; `exp` and `ln`
//! widen by a few ulps to cover the libm error.

use std::ops::{Add, Mul, Neg, Sub};

const TRANSCENDENTAL_ULPS: u32 = 3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

fn down(x: f64) -> f64 {
    x.next_down()
}

fn up(x: f64) -> f64 {
    x.next_up()
}

fn down_by(mut x: f64, ulps: u32) -> f64 {
    for _ in 0..ulps {
        x = x.next_down();
    }
    x
}

fn up_by(mut x: f64, ulps: u32) -> f64 {
    for _ in 0..ulps {
        x = x.next_up();
    }
    x
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };

    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "interval [{lo}, {hi}]");
        Self { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    /// `[center - radius, center + radius]`, rounded outward.
    pub fn centered(center: f64, radius: f64) -> Self {
        Self {
            lo: down(center - radius),
            hi: up(center + radius),
        }
    }

    pub fn mid(&self) -> f64 {
        let m = 0.5 * self.lo + 0.5 * self.hi;
        m.clamp(self.lo, self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn radius(&self) -> f64 {
        up(0.5 * (self.hi - self.lo))
    }

    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    /// True when `self` lies in the open interior of `other`.
    pub fn interior_of(&self, other: &Interval) -> bool {
        other.lo < self.lo && self.hi < other.hi
    }

    pub fn subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    /// Scales by an exact real.
    pub fn scale(&self, c: f64) -> Interval {
        let a = self.lo * c;
        let b = self.hi * c;
        Interval {
            lo: down(a.min(b)),
            hi: up(a.max(b)),
        }
    }

    pub fn exp(&self) -> Interval {
        Interval {
            lo: down_by(self.lo.exp(), TRANSCENDENTAL_ULPS).max(0.0),
            hi: up_by(self.hi.exp(), TRANSCENDENTAL_ULPS),
        }
    }

    /// Natural log of a positive interval.
    pub fn ln(&self) -> Interval {
        Interval {
            lo: down_by(self.lo.ln(), TRANSCENDENTAL_ULPS),
            hi: up_by(self.hi.ln(), TRANSCENDENTAL_ULPS),
        }
    }

    /// Splits at the midpoint.
    pub fn bisect(&self) -> (Interval, Interval) {
        let m = self.mid();
        (Interval::new(self.lo, m), Interval::new(m, self.hi))
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        Interval {
            lo: down(self.lo + rhs.lo),
            hi: up(self.hi + rhs.hi),
        }
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        Interval {
            lo: down(self.lo - rhs.hi),
            hi: up(self.hi - rhs.lo),
        }
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        let products = [
            self.lo * rhs.lo,
            self.lo * rhs.hi,
            self.hi * rhs.lo,
            self.hi * rhs.hi,
        ];
        // 0 * inf only arises from unbounded inputs; treat it as 0.
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for p in products {
            let p = if p.is_nan() { 0.0 } else { p };
            lo = lo.min(p);
            hi = hi.max(p);
        }
        Interval {
            lo: down(lo),
            hi: up(hi),
        }
    }
}

impl Add<f64> for Interval {
    type Output = Interval;
    fn add(self, rhs: f64) -> Interval {
        self + Interval::point(rhs)
    }
}

impl Mul<f64> for Interval {
    type Output = Interval;
    fn mul(self, rhs: f64) -> Interval {
        self.scale(rhs)
    }
}

/// Outward-rounded dot product of exact reals with intervals.
pub fn dot(coeffs: &[f64], xs: &[Interval]) -> Interval {
    coeffs
        .iter()
        .zip(xs)
        .fold(Interval::ZERO, |acc, (&c, x)| acc + x.scale(c))
}
