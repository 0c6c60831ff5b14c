//! Exact sign evaluation of polynomials whose coefficients and argument are
//! doubles, i.e. dyadic rationals.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{Pow, ToPrimitive, Zero};

/// `(mantissa, exponent)` with `x = mantissa * 2^exponent`, mantissa odd
/// (or zero).
fn decompose(x: f64) -> (BigInt, i64) {
    if x == 0.0 {
        return (BigInt::zero(), 0);
    }
    let bits = x.to_bits();
    let negative = bits >> 63 == 1;
    let biased = ((bits >> 52) & 0x7ff) as i64;
    let fraction = bits & ((1u64 << 52) - 1);
    let (mut mantissa, mut exponent) = if biased == 0 {
        (fraction, -1074)
    } else {
        (fraction | (1u64 << 52), biased - 1075)
    };
    let tz = mantissa.trailing_zeros();
    mantissa >>= tz;
    exponent += i64::from(tz);
    let m = BigInt::from(mantissa);
    (if negative { -m } else { m }, exponent)
}

fn exact_sum(
    coeffs: &[f64],
    multipliers: Option<&[u64]>,
    exps: &[u64],
    x: f64,
) -> Option<(BigInt, i64)> {
    debug_assert!(x >= 0.0 && x.is_finite());
    let (mx, ex) = decompose(x);
    let mx = mx.magnitude().clone();
    let mut terms: Vec<(BigInt, i64)> = Vec::with_capacity(coeffs.len());
    let mut power = BigUint::from(1u32);
    let mut power_exp = 0u64;
    for (i, (&c, &e)) in coeffs.iter().zip(exps).enumerate() {
        let mult = multipliers.map_or(1, |m| m[i]);
        if c == 0.0 || mult == 0 {
            continue;
        }
        let (mc, ec) = decompose(c);
        if e > 0 && x == 0.0 {
            continue;
        }
        if e != power_exp {
            debug_assert!(e > power_exp, "exponents must increase");
            power *= Pow::pow(&mx, e - power_exp);
            power_exp = e;
        }
        let value = mc * BigInt::from(mult) * BigInt::from_biguint(Sign::Plus, power.clone());
        terms.push((value, ec + ex * e as i64));
    }
    let min_exp = terms.iter().map(|t| t.1).min()?;
    let total: BigInt = terms
        .into_iter()
        .map(|(v, e)| v << ((e - min_exp) as usize))
        .sum();
    Some((total, min_exp))
}

/// Exact sign of `sum_i c_i * m_i * x^{e_i}` for doubles `c_i`, integer
/// multipliers `m_i` and `x >= 0`.
pub fn exact_sign(coeffs: &[f64], multipliers: Option<&[u64]>, exps: &[u64], x: f64) -> i8 {
    match exact_sum(coeffs, multipliers, exps, x).map(|t| t.0.sign()) {
        Some(Sign::Plus) => 1,
        Some(Sign::Minus) => -1,
        _ => 0,
    }
}

/// An enclosure `[lo, hi]` of `sum_i c_i x^{e_i}` a couple of ulps wide.
pub fn exact_enclosure(coeffs: &[f64], exps: &[u64], x: f64) -> (f64, f64) {
    let Some((total, exp)) = exact_sum(coeffs, None, exps, x) else {
        return (0.0, 0.0);
    };
    if total.is_zero() {
        return (0.0, 0.0);
    }
    // keep the leading 64 bits so the scaling below is exact or underflows
    let bits = total.bits() as i64;
    let shift = (bits - 64).max(0);
    let top = &total >> (shift as usize);
    let mant = top.to_f64().unwrap_or(0.0);
    let e = exp + shift;
    let v = libm::ldexp(mant, e.clamp(-3000, 3000) as i32);
    let tiny = f64::from_bits(1);
    let lo = v.next_down().next_down() - tiny;
    let hi = v.next_up().next_up() + tiny;
    // truncation toward -inf by the shift only lowers the value
    (lo, if shift > 0 { hi.next_up() } else { hi })
}
