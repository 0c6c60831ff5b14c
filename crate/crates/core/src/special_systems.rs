//! Systems `sum_j lambda_ij x^{alpha_j} = f(x)` with
//! `f(x) = (sum_j c_j^2 x^{2 beta_j})^{1/2}`, the cone probability, and the
//! random special system.
//!
//! Writing `u_j = x^{alpha_j}`, the system reads `Lambda u = f(x) 1`, so
//! `u = s eta` with `eta = Lambda^{-1} 1` and `s = f(x)`. Taking logs turns
//! `u = s eta` into a linear system in `(log x, log s)`, and what remains
//! is one equation `sum_j K_j e^{e_j r} = 1` in a single real unknown. Its
//! left side is a convex function of `r`, so it has at most two roots.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::linalg::{condition_number, invert, numerical_rank, solve};
use crate::rng::StreamKey;
use crate::stats::{MeanEstimate, Welford};
use crate::{Error, Result};

/// Rank tolerance for the exponent vectors, relative to the largest
/// singular value.
pub const RANK_TOL: f64 = 1e-10;
/// Zeros whose Jacobian condition number reaches this are degenerate.
pub const MAX_CONDITION: f64 = 1e10;
/// Relative size below which the squared equation counts as vanishing.
pub const VANISH_TOL: f64 = 1e-12;

/// `f(x) = (sum_j c_j^2 x^{2 beta_j})^{1/2}` with real exponents.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SqrtTermFunction {
    coefficients: Vec<f64>,
    exponents: Vec<Vec<f64>>,
}

impl SqrtTermFunction {
    pub fn new(coefficients: Vec<f64>, exponents: Vec<Vec<f64>>) -> Result<Self> {
        if coefficients.is_empty() || coefficients.len() != exponents.len() {
            return Err(Error::InvalidSystem(
                "need m >= 1 terms with one exponent per coefficient".into(),
            ));
        }
        if coefficients.iter().any(|c| *c == 0.0 || !c.is_finite()) {
            return Err(Error::InvalidSystem("coefficients must be nonzero".into()));
        }
        let n = exponents[0].len();
        if exponents
            .iter()
            .any(|b| b.len() != n || b.iter().any(|v| !v.is_finite()))
        {
            return Err(Error::InvalidSystem(
                "exponents must be finite and of equal length".into(),
            ));
        }
        Ok(Self {
            coefficients,
            exponents,
        })
    }

    /// `f = 1` in `n` variables.
    pub fn one(n: usize) -> Self {
        Self {
            coefficients: vec![1.0],
            exponents: vec![vec![0.0; n]],
        }
    }

    pub fn n(&self) -> usize {
        self.exponents[0].len()
    }

    pub fn m(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn exponents(&self) -> &[Vec<f64>] {
        &self.exponents
    }

    /// `log c_j^2 + 2 beta_j . y` for each term.
    fn log_squares(&self, y: &[f64]) -> Vec<f64> {
        self.coefficients
            .iter()
            .zip(&self.exponents)
            .map(|(c, b)| 2.0 * c.abs().ln() + 2.0 * dot(b, y))
            .collect()
    }

    /// `f(exp(y))`.
    pub fn evaluate_log(&self, y: &[f64]) -> f64 {
        (0.5 * log_sum_exp(&self.log_squares(y))).exp()
    }

    /// `f(x)` for positive `x`.
    pub fn evaluate(&self, x: &[f64]) -> f64 {
        let y: Vec<f64> = x.iter().map(|v| v.ln()).collect();
        self.evaluate_log(&y)
    }

    /// `(f, grad_y f)` at `x = exp(y)`.
    fn value_and_log_gradient(&self, y: &[f64]) -> (f64, Vec<f64>) {
        let logs = self.log_squares(y);
        let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let weights: Vec<f64> = logs.iter().map(|l| (l - top).exp()).collect();
        let total: f64 = weights.iter().sum();
        let f = (0.5 * (top + total.ln())).exp();
        let mut grad = vec![0.0; y.len()];
        for (w, b) in weights.iter().zip(&self.exponents) {
            for (g, bk) in grad.iter_mut().zip(b) {
                *g += w / total * bk;
            }
        }
        grad.iter_mut().for_each(|g| *g *= f);
        (f, grad)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn log_sum_exp(v: &[f64]) -> f64 {
    let top = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY || top == f64::INFINITY {
        return top;
    }
    top + v.iter().map(|x| (x - top).exp()).sum::<f64>().ln()
}

/// `sum_j lambda_ij x^{alpha_j} = f(x)`, `i = 1..n`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpecialSystem {
    /// Row-major `n x n`.
    lambda: Vec<f64>,
    alphas: Vec<Vec<f64>>,
    f: SqrtTermFunction,
}

impl SpecialSystem {
    pub fn new(lambda: Vec<f64>, alphas: Vec<Vec<f64>>, f: SqrtTermFunction) -> Result<Self> {
        let n = alphas.len();
        if n == 0 || lambda.len() != n * n || alphas.iter().any(|a| a.len() != n) {
            return Err(Error::InvalidSystem(
                "need an n x n lambda and n exponent vectors in R^n".into(),
            ));
        }
        if f.n() != n {
            return Err(Error::InvalidSystem(format!(
                "f has {} variables, expected {n}",
                f.n()
            )));
        }
        if lambda.iter().any(|v| !v.is_finite()) || solve(&lambda, n, &vec![1.0; n]).is_none() {
            return Err(Error::InvalidSystem("lambda must be invertible".into()));
        }
        Ok(Self { lambda, alphas, f })
    }

    pub fn n(&self) -> usize {
        self.alphas.len()
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub fn alphas(&self) -> &[Vec<f64>] {
        &self.alphas
    }

    pub fn f(&self) -> &SqrtTermFunction {
        &self.f
    }

    /// The same system with its equations reordered by `perm`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let n = self.n();
        let lambda = perm
            .iter()
            .flat_map(|&i| self.lambda[i * n..(i + 1) * n].iter().copied())
            .collect();
        Self {
            lambda,
            alphas: self.alphas.clone(),
            f: self.f.clone(),
        }
    }

    /// `Lambda u(x) - f(x) 1` at `x = exp(y)`.
    pub fn residual_log(&self, y: &[f64]) -> Vec<f64> {
        let n = self.n();
        let u: Vec<f64> = self.alphas.iter().map(|a| dot(a, y).exp()).collect();
        let f = self.f.evaluate_log(y);
        (0..n)
            .map(|i| dot(&self.lambda[i * n..(i + 1) * n], &u) - f)
            .collect()
    }

    /// Jacobian of [`Self::residual_log`] with respect to `y`, row-major.
    pub fn jacobian_log(&self, y: &[f64]) -> Vec<f64> {
        let n = self.n();
        let u: Vec<f64> = self.alphas.iter().map(|a| dot(a, y).exp()).collect();
        let (_, grad) = self.f.value_and_log_gradient(y);
        let mut jac = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let mut v = -grad[k];
                for j in 0..n {
                    v += self.lambda[i * n + j] * u[j] * self.alphas[j][k];
                }
                jac[i * n + k] = v;
            }
        }
        jac
    }
}

/// Invertible `T` with `alpha'_j = T alpha_j`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChangeOfBasis {
    pub rank: usize,
    /// Row-major `n x n`.
    pub transform: Vec<f64>,
    pub exponents: Vec<Vec<f64>>,
}

/// For full rank, `T = P^{-T}` with `P` holding the `alpha_j` as rows, so
/// `alpha'` is the standard basis. Otherwise `T` is orthogonal and the
/// last `n - k` coordinates of every `alpha'_j` vanish. In log coordinates
/// the substitution is `z = T^{-T} y`.
pub fn exponent_change_of_basis(alphas: &[Vec<f64>]) -> ChangeOfBasis {
    let n = alphas.len();
    let p: Vec<f64> = alphas.iter().flatten().copied().collect();
    let rank = numerical_rank(&p, n, n, RANK_TOL);
    let transform = if rank == n {
        let inv = invert(&p, n).expect("full rank");
        transpose(&inv, n)
    } else {
        let q = right_singular_basis(&p, n);
        transpose(&q, n)
    };
    let mut exponents: Vec<Vec<f64>> = alphas.iter().map(|a| mat_vec(&transform, n, a)).collect();
    if rank < n {
        for e in &mut exponents {
            e[rank..].iter_mut().for_each(|v| *v = 0.0);
        }
    }
    ChangeOfBasis {
        rank,
        transform,
        exponents,
    }
}

fn transpose(m: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            out[j * n + i] = m[i * n + j];
        }
    }
    out
}

fn mat_vec(m: &[f64], n: usize, v: &[f64]) -> Vec<f64> {
    (0..n).map(|i| dot(&m[i * n..(i + 1) * n], v)).collect()
}

/// Orthogonal `Q` (row-major) whose columns are the right singular vectors
/// of `p`, ordered by decreasing singular value.
fn right_singular_basis(p: &[f64], n: usize) -> Vec<f64> {
    let svd = DMatrix::from_row_slice(n, n, p).svd(false, true);
    let v_t = svd.v_t.expect("requested");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let mut q = vec![0.0; n * n];
    for (col, &k) in order.iter().enumerate() {
        for row in 0..n {
            q[row * n + col] = v_t[(k, row)];
        }
    }
    q
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SpecialSolution {
    /// Nondegenerate positive zeros, at most two, sorted.
    pub zeros: Vec<Vec<f64>>,
    /// The squared equation vanished or the exponents had rank below
    /// `n - 1`: every zero is degenerate.
    pub degenerate_family: bool,
    /// Rank of the exponent vectors.
    pub rank: usize,
}

/// Roots in `r` of `sum_j exp(log_k_j + e_j r) = 1`.
#[derive(Debug, PartialEq)]
enum ExpSumRoots {
    Roots(Vec<f64>),
    /// Every `r` solves it.
    Vanishes,
}

fn solve_exp_sum(terms: &[(f64, f64)]) -> ExpSumRoots {
    let scale = terms.iter().map(|t| t.1.abs()).fold(0.0, f64::max);
    let flat = |e: f64| e.abs() <= VANISH_TOL * scale.max(1.0);
    // constant part, compared with 1
    let c0: f64 = terms.iter().filter(|t| flat(t.1)).map(|t| t.0.exp()).sum();
    let moving: Vec<(f64, f64)> = terms.iter().copied().filter(|t| !flat(t.1)).collect();
    if moving.is_empty() {
        return if (1.0 - c0).abs() <= VANISH_TOL * (1.0 + c0) {
            ExpSumRoots::Vanishes
        } else {
            ExpSumRoots::Roots(Vec::new())
        };
    }
    if c0 >= 1.0 {
        return ExpSumRoots::Roots(Vec::new());
    }
    let target = (-c0).ln_1p();
    let h = |r: f64| {
        let v: Vec<f64> = moving.iter().map(|(k, e)| k + e * r).collect();
        log_sum_exp(&v) - target
    };
    // h' is the softmax mean of the exponents and increases with r
    let slope = |r: f64| {
        let v: Vec<f64> = moving.iter().map(|(k, e)| k + e * r).collect();
        let top = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let w: Vec<f64> = v.iter().map(|x| (x - top).exp()).collect();
        let total: f64 = w.iter().sum();
        moving.iter().zip(&w).map(|((_, e), w)| e * w).sum::<f64>() / total
    };
    let any_pos = moving.iter().any(|t| t.1 > 0.0);
    let any_neg = moving.iter().any(|t| t.1 < 0.0);
    let mut roots = Vec::new();
    match (any_neg, any_pos) {
        (false, true) => roots.extend(root_increasing(&h, 0.0)),
        (true, false) => roots.extend(root_increasing(&|r: f64| h(-r), 0.0).map(|r| -r)),
        _ => {
            let Some(r_min) = root_increasing(&slope, 0.0) else {
                return ExpSumRoots::Roots(roots);
            };
            if h(r_min) < 0.0 {
                if let Some(r) = root_increasing(&|r: f64| h(-r), -r_min) {
                    roots.push(-r);
                }
                roots.extend(root_increasing(&h, r_min));
            } else if h(r_min) == 0.0 {
                // tangency: a double root, kept so the Jacobian test can
                // reject it
                roots.push(r_min);
            }
        }
    }
    ExpSumRoots::Roots(roots)
}

/// Root of `g` on `[start, inf)`, where `g` is increasing there and
/// `g(start) <= 0`; `None` when no sign change is found.
fn root_increasing<G: Fn(f64) -> f64>(g: &G, start: f64) -> Option<f64> {
    let mut lo = start;
    let g_lo = g(lo);
    if g_lo > 0.0 {
        // the root lies to the left of start
        let mut step = 1.0;
        let mut hi = lo;
        loop {
            let cand = hi - step;
            if g(cand) <= 0.0 {
                lo = cand;
                break;
            }
            hi = cand;
            step *= 2.0;
            if step > 1e6 {
                return None;
            }
        }
        return Some(bisect(g, lo, hi));
    }
    if g_lo == 0.0 {
        return Some(lo);
    }
    let mut step = 1.0;
    loop {
        let hi = lo + step;
        let v = g(hi);
        if v >= 0.0 {
            return Some(bisect(g, lo, hi));
        }
        lo = hi;
        step *= 2.0;
        if step > 1e6 {
            return None;
        }
    }
}

fn bisect<G: Fn(f64) -> f64>(g: &G, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if !(lo < mid && mid < hi) {
            break;
        }
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Nondegenerate positive zeros of a special system. `tol` bounds the
/// accepted residual `|Lambda u - f 1|_inf <= tol (1 + f)`.
pub fn solve_special(system: &SpecialSystem, tol: f64) -> Result<SpecialSolution> {
    let n = system.n();
    let eta = solve(&system.lambda, n, &vec![1.0; n])
        .ok_or_else(|| Error::InvalidSystem("lambda must be invertible".into()))?;
    let basis = exponent_change_of_basis(&system.alphas);
    let mut out = SpecialSolution {
        rank: basis.rank,
        ..Default::default()
    };
    if eta.iter().any(|e| !(*e > 0.0)) {
        return Ok(out);
    }
    let log_eta: Vec<f64> = eta.iter().map(|e| e.ln()).collect();
    let f = &system.f;
    let log_c2: Vec<f64> = f.coefficients.iter().map(|c| 2.0 * c.abs().ln()).collect();

    let candidates: Vec<Vec<f64>> = if basis.rank == n {
        // y = P^{-1} (r 1 + log eta) with r = log s
        let p: Vec<f64> = system.alphas.iter().flatten().copied().collect();
        let p_inv = invert(&p, n).expect("full rank");
        let dir = mat_vec(&p_inv, n, &vec![1.0; n]);
        let base = mat_vec(&p_inv, n, &log_eta);
        // s^2 = sum_j c_j^2 exp(2 beta_j . y)
        let terms: Vec<(f64, f64)> = f
            .exponents
            .iter()
            .zip(&log_c2)
            .map(|(b, lc)| (lc + 2.0 * dot(b, &base), 2.0 * (dot(b, &dir) - 1.0)))
            .collect();
        match solve_exp_sum(&terms) {
            ExpSumRoots::Vanishes => {
                out.degenerate_family = true;
                return Ok(out);
            }
            ExpSumRoots::Roots(rs) => rs
                .into_iter()
                .map(|r| base.iter().zip(&dir).map(|(b, d)| b + r * d).collect())
                .collect(),
        }
    } else if basis.rank + 1 == n {
        // y = Q z with alpha_j . y = alpha'_j . w for w = z[..n-1]; the n
        // equations alpha'_j . w - log s = log eta_j fix (w, log s)
        let q = transpose(&basis.transform, n);
        let mut m = vec![0.0; n * n];
        for (j, a) in basis.exponents.iter().enumerate() {
            m[j * n..j * n + n - 1].copy_from_slice(&a[..n - 1]);
            m[j * n + n - 1] = -1.0;
        }
        if condition_number(&m, n) > MAX_CONDITION {
            out.degenerate_family = true;
            return Ok(out);
        }
        let sol = solve(&m, n, &log_eta).expect("well conditioned");
        let (w, log_s) = (&sol[..n - 1], sol[n - 1]);
        // s^2 = sum_j c_j^2 exp(2 beta'_j . (w, z_n))
        let terms: Vec<(f64, f64)> = f
            .exponents
            .iter()
            .zip(&log_c2)
            .map(|(b, lc)| {
                let bp = mat_vec(&basis.transform, n, b);
                (
                    lc + 2.0 * dot(&bp[..n - 1], w) - 2.0 * log_s,
                    2.0 * bp[n - 1],
                )
            })
            .collect();
        match solve_exp_sum(&terms) {
            ExpSumRoots::Vanishes => {
                out.degenerate_family = true;
                return Ok(out);
            }
            ExpSumRoots::Roots(rs) => rs
                .into_iter()
                .map(|zn| {
                    let mut z = w.to_vec();
                    z.push(zn);
                    mat_vec(&q, n, &z)
                })
                .collect(),
        }
    } else {
        out.degenerate_family = true;
        return Ok(out);
    };

    for y in candidates {
        let y = polish(system, y);
        let fy = f.evaluate_log(&y);
        let res = system
            .residual_log(&y)
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()));
        if !(res <= tol * (1.0 + fy)) {
            continue;
        }
        if condition_number(&system.jacobian_log(&y), n) >= MAX_CONDITION {
            continue;
        }
        let x: Vec<f64> = y.iter().map(|v| v.exp()).collect();
        if x.iter().all(|v| v.is_finite() && *v > 0.0) {
            out.zeros.push(x);
        }
    }
    out.zeros.sort_by(|a, b| a[0].total_cmp(&b[0]));
    assert!(out.zeros.len() <= 2, "more than two zeros: {out:?}");
    Ok(out)
}

fn residual_norm(system: &SpecialSystem, y: &[f64]) -> f64 {
    system
        .residual_log(y)
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()))
}

/// A few Newton steps in log coordinates, kept only while they help.
fn polish(system: &SpecialSystem, mut y: Vec<f64>) -> Vec<f64> {
    let n = system.n();
    let mut best = residual_norm(system, &y);
    for _ in 0..4 {
        if best == 0.0 {
            break;
        }
        let Some(step) = solve(&system.jacobian_log(&y), n, &system.residual_log(&y)) else {
            break;
        };
        let next: Vec<f64> = y.iter().zip(&step).map(|(a, d)| a - d).collect();
        let r = residual_norm(system, &next);
        if !(r < best) {
            break;
        }
        y = next;
        best = r;
    }
    y
}

/// Whether `w` is a nonnegative combination of the `vs`.
pub fn cone_membership(w: &[f64], vs: &[Vec<f64>]) -> bool {
    let n = w.len();
    let k = vs.len();
    let scale = w.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if scale == 0.0 {
        return true;
    }
    if k == n {
        // columns v_i
        let mut m = vec![0.0; n * n];
        for (i, v) in vs.iter().enumerate() {
            for r in 0..n {
                m[r * n + i] = v[r];
            }
        }
        if condition_number(&m, n) < 1e12 {
            let a = solve(&m, n, w).expect("well conditioned");
            let size = a.iter().map(|v| v.abs()).fold(0.0, f64::max);
            return a.iter().all(|v| *v >= -1e-12 * size);
        }
    }
    nonnegative_least_squares_fits(w, vs)
}

/// Active-set enumeration: `w` lies in the cone iff for some support set
/// the least-squares solution is nonnegative with residual below 1e-10.
fn nonnegative_least_squares_fits(w: &[f64], vs: &[Vec<f64>]) -> bool {
    let n = w.len();
    let k = vs.len();
    let scale = w.iter().map(|v| v * v).sum::<f64>().sqrt();
    for mask in 1u32..(1u32 << k) {
        let cols: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).collect();
        let a = DMatrix::from_fn(n, cols.len(), |r, c| vs[cols[c]][r]);
        let b = nalgebra::DVector::from_column_slice(w);
        let Ok(x) = a.clone().svd(true, true).solve(&b, 1e-14) else {
            continue;
        };
        if x.iter().any(|v| *v < 0.0) {
            continue;
        }
        let residual = (&a * &x - &b).norm();
        if residual < 1e-10 * (1.0 + scale) {
            return true;
        }
    }
    false
}

/// Fraction of trials with `w` in `cone(v_1..v_n)` for i.i.d. standard
/// Gaussian vectors.
pub fn cone_probability(n: usize, trials: u64, seed: u64) -> MeanEstimate {
    let key = StreamKey::new(seed, 0);
    let mut acc = Welford::default();
    for trial in 0..trials {
        let draw = key.normal_row(trial, n * (n + 1));
        let w = &draw[..n];
        let vs: Vec<Vec<f64>> = draw[n..].chunks(n).map(<[f64]>::to_vec).collect();
        acc.push(if cone_membership(w, &vs) { 1.0 } else { 0.0 });
    }
    acc.finish()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpecialEstimate {
    pub estimate: MeanEstimate,
    /// Trials with a zero coefficient of `f`.
    pub discarded: u64,
    /// Trials flagged as degenerate families (counted as zero zeros).
    pub degenerate: u64,
    pub max_zeros: usize,
}

/// Monte Carlo mean of the number of nondegenerate positive zeros of
/// `xi_i0 f(x) + sum_j xi_ij sigma_j x^{alpha_j} = 0` with standard
/// Gaussian `xi`.
pub fn random_special_expected_count(
    alphas: &[Vec<f64>],
    sigmas: &[f64],
    f: &SqrtTermFunction,
    trials: u64,
    seed: u64,
) -> Result<SpecialEstimate> {
    let n = alphas.len();
    if sigmas.len() != n || sigmas.iter().any(|s| !(*s > 0.0 && s.is_finite())) {
        return Err(Error::InvalidVariance(
            "need n positive finite sigmas".into(),
        ));
    }
    let mut acc = Welford::default();
    let mut discarded = 0;
    let mut degenerate = 0;
    let mut max_zeros = 0;
    for trial in 0..trials {
        let key = StreamKey::new(seed, trial);
        let mut lambda = vec![0.0; n * n];
        let mut skip = false;
        for i in 0..n {
            let row = key.normal_row(i as u64, n + 1);
            if row[0] == 0.0 {
                skip = true;
                break;
            }
            for j in 0..n {
                lambda[i * n + j] = -row[j + 1] * sigmas[j] / row[0];
            }
        }
        if skip {
            discarded += 1;
            log::debug!("trial {trial}: zero coefficient of f, discarded");
            continue;
        }
        let system = match SpecialSystem::new(lambda, alphas.to_vec(), f.clone()) {
            Ok(s) => s,
            Err(_) => {
                discarded += 1;
                log::debug!("trial {trial}: singular lambda, discarded");
                continue;
            }
        };
        let sol = solve_special(&system, 1e-9)?;
        if sol.degenerate_family {
            degenerate += 1;
        }
        max_zeros = max_zeros.max(sol.zeros.len());
        acc.push(sol.zeros.len() as f64);
    }
    Ok(SpecialEstimate {
        estimate: acc.finish(),
        discarded,
        degenerate,
        max_zeros,
    })
}
