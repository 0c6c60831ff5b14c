use fewlab_core::rng::StreamKey;
use fewlab_core::univariate::{
    count_in_unit_interval, count_positive_roots, exact_sign, sign_changes, SparsePoly,
};
use proptest::prelude::*;

/// Real roots of `a x^3 + b x^2 + c x + d` from the trigonometric and
/// Cardano formulas.
fn cubic_real_roots(a: f64, b: f64, c: f64, d: f64) -> Vec<f64> {
    let (b, c, d) = (b / a, c / a, d / a);
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    let shift = -b / 3.0;
    let disc = -(4.0 * p * p * p + 27.0 * q * q);
    if disc > 0.0 {
        let r = 2.0 * (-p / 3.0).sqrt();
        let phi = (3.0 * q / (p * r)).clamp(-1.0, 1.0).acos() / 3.0;
        (0..3)
            .map(|k| r * (phi - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos() + shift)
            .collect()
    } else {
        let s = (q * q / 4.0 + p * p * p / 27.0).sqrt();
        vec![(-q / 2.0 + s).cbrt() + (-q / 2.0 - s).cbrt() + shift]
    }
}

#[test]
fn dense_cubics_match_closed_form() {
    let key = StreamKey::new(20_231_015, 0);
    let mut checked = 0;
    for trial in 0..10_000u64 {
        let c = key.normal_row(trial, 4);
        let roots = cubic_real_roots(c[3], c[2], c[1], c[0]);
        // skip draws where the closed form itself is ill-conditioned
        let close = roots.iter().any(|r| r.abs() < 1e-9)
            || roots
                .iter()
                .enumerate()
                .any(|(i, x)| roots[i + 1..].iter().any(|y| (x - y).abs() < 1e-6));
        if close {
            continue;
        }
        let expected = roots.iter().filter(|r| **r > 0.0).count();
        let p = SparsePoly::from_terms((0..4).map(|k| (k as i64, c[k]))).unwrap();
        let rc = count_positive_roots(&p);
        assert!(!rc.degenerate, "trial {trial}");
        assert_eq!(rc.count, expected, "trial {trial}: {c:?}");
        checked += 1;
    }
    assert!(checked > 9_900);
}

#[test]
fn reflection_identity_on_random_ten_term_polynomials() {
    let key = StreamKey::new(77, 1);
    for trial in 0..300u64 {
        let c = key.normal_row(trial, 10);
        let u = key.uniform_row(trial + 1_000_000, 10);
        let mut exps: Vec<i64> = u.iter().map(|v| (v * 60.0) as i64).collect();
        exps.sort();
        exps.dedup();
        let p = SparsePoly::from_terms(exps.iter().zip(&c).map(|(&e, &v)| (e, v))).unwrap();
        let whole = count_positive_roots(&p);
        let inner = count_in_unit_interval(&p);
        let outer = count_in_unit_interval(&p.reflected());
        let q = p.normalized();
        let q_exps: Vec<u64> = q.exponents().iter().map(|&e| e as u64).collect();
        let at_one = usize::from(exact_sign(q.coefficients(), None, &q_exps, 1.0) == 0);
        assert!(!whole.degenerate);
        assert_eq!(
            whole.count,
            inner.count + outer.count + at_one,
            "trial {trial}"
        );
    }
}

#[test]
fn kac_polynomial_degree_thousand() {
    let key = StreamKey::new(5, 9);
    for trial in 0..5u64 {
        let c = key.normal_row(trial, 1001);
        let p = SparsePoly::from_terms(c.iter().enumerate().map(|(k, &v)| (k as i64, v))).unwrap();
        let rc = count_positive_roots(&p);
        assert!(!rc.degenerate);
        assert!(rc.count <= sign_changes(&c).unwrap());
        for w in rc.intervals.windows(2) {
            assert!(w[0].hi <= w[1].lo);
        }
    }
}

fn arb_poly() -> impl Strategy<Value = SparsePoly> {
    prop::collection::btree_map(-40i64..40, -1e3f64..1e3, 1..9).prop_filter_map("nonzero", |m| {
        SparsePoly::from_terms(m.into_iter().filter(|(_, c)| c.abs() > 1e-6)).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn count_respects_descartes(p in arb_poly()) {
        let rc = count_positive_roots(&p);
        prop_assert!(rc.count <= sign_changes(p.coefficients()).unwrap());
        prop_assert!(rc.count < p.t());
        if !rc.degenerate {
            prop_assert_eq!(rc.count, rc.intervals.len());
        }
        for iv in &rc.intervals {
            prop_assert!(0.0 < iv.lo && iv.lo < iv.hi);
        }
        for w in rc.intervals.windows(2) {
            prop_assert!(w[0].hi <= w[1].lo);
        }
    }

    #[test]
    fn count_invariant_under_scaling_and_translation(
        p in arb_poly(),
        k in -20i64..20,
        e in -30i32..30,
    ) {
        let base = count_positive_roots(&p);
        let scaled = count_positive_roots(&p.scaled(2f64.powi(e)).unwrap());
        let moved = count_positive_roots(&p.translated(k));
        prop_assert_eq!(base.count, scaled.count);
        prop_assert_eq!(base.count, moved.count);
    }

    #[test]
    fn endpoints_carry_opposite_exact_signs(p in arb_poly()) {
        let rc = count_positive_roots(&p);
        let q = p.normalized();
        let exps: Vec<u64> = q.exponents().iter().map(|&e| e as u64).collect();
        for iv in rc.intervals.iter().filter(|iv| iv.hi < 1.0 || iv.lo > 1.0) {
            let sa = exact_sign(q.coefficients(), None, &exps, iv.lo);
            let sb = exact_sign(q.coefficients(), None, &exps, iv.hi);
            prop_assert_eq!(sa * sb, -1);
        }
    }
}
