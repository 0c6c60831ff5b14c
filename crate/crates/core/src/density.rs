//! The weighted Veronese map, its normalization onto the sphere, and the
//! Edelman-Kostlan density whose integral is the expected number of
//! positive zeros.
//!
//! Integration runs in log coordinates `y = log x`, where
//! `D_y psi = diag(psi) (A - 1 abar^T)` with `abar = sum_a psi_a^2 a`, and
//! `sqrt det(D_y psi^T D_y psi) dy` equals the density times `dx`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::linalg::{determinant, gram_sqrt_det};
use crate::quadrature::{integrate, integrate_2d, Tolerance};
use crate::rng::StreamKey;
use crate::systems::{check_positive, Support, VarianceSystem};
use crate::{Error, Result};

/// `vol_n(S^n) = 2 pi^{(n+1)/2} / Gamma((n+1)/2)`.
pub fn vol_sphere(n: usize) -> f64 {
    let h = (n as f64 + 1.0) / 2.0;
    2.0 * std::f64::consts::PI.powf(h) / libm::tgamma(h)
}

/// `x -> (sigma(a) x^a)_a` for a support and variance system.
#[derive(Clone, Debug, PartialEq)]
pub struct VeroneseMap {
    support: Support,
    sigma: VarianceSystem,
    exponents: Vec<f64>,
    log_sigma: Vec<f64>,
}

impl VeroneseMap {
    pub fn new(support: Support, sigma: VarianceSystem) -> Result<Self> {
        if support.t() != sigma.len() {
            return Err(Error::InvalidVariance(format!(
                "support has {} monomials but sigma has {} weights",
                support.t(),
                sigma.len()
            )));
        }
        let exponents = support.exponent_matrix();
        let log_sigma = sigma.weights().iter().map(|s| s.ln()).collect();
        Ok(Self {
            support,
            sigma,
            exponents,
            log_sigma,
        })
    }

    pub fn support(&self) -> &Support {
        &self.support
    }

    pub fn sigma(&self) -> &VarianceSystem {
        &self.sigma
    }

    pub fn n(&self) -> usize {
        self.support.n()
    }

    pub fn t(&self) -> usize {
        self.support.t()
    }

    fn exponent(&self, a: usize) -> &[f64] {
        let n = self.n();
        &self.exponents[a * n..(a + 1) * n]
    }

    /// `log(sigma(a) x^a)` at `x = exp(y)`.
    pub fn log_terms(&self, y: &[f64]) -> Vec<f64> {
        (0..self.t())
            .map(|a| {
                self.log_sigma[a]
                    + self
                        .exponent(a)
                        .iter()
                        .zip(y)
                        .map(|(e, v)| e * v)
                        .sum::<f64>()
            })
            .collect()
    }

    /// `psi` at `x = exp(y)` plus the index of the largest term.
    fn psi_and_dominant(&self, y: &[f64]) -> (Vec<f64>, usize) {
        let logs = self.log_terms(y);
        let (dom, &top) = logs
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .expect("support is nonempty");
        let mut v: Vec<f64> = logs.iter().map(|l| (l - top).exp()).collect();
        let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        v.iter_mut().for_each(|c| *c /= norm);
        (v, dom)
    }

    /// `psi(exp(y))`.
    pub fn psi_log(&self, y: &[f64]) -> Vec<f64> {
        self.psi_and_dominant(y).0
    }

    /// `v(x) / |v(x)|`.
    pub fn psi(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_point(x)?;
        Ok(self.psi_log(&log_point(x)))
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.n() {
            return Err(Error::InvalidArgument(format!(
                "point has {} coordinates, expected {}",
                x.len(),
                self.n()
            )));
        }
        check_positive(x)
    }

    /// `D_y psi` at `x = exp(y)`, row-major `t x n`. Exponents are taken
    /// relative to the dominant one, which leaves the matrix unchanged but
    /// avoids cancellation far from the origin.
    pub fn log_jacobian_rows(&self, y: &[f64]) -> Vec<f64> {
        let (n, t) = (self.n(), self.t());
        let (psi, dom) = self.psi_and_dominant(y);
        let base = self.exponent(dom).to_vec();
        let mut abar = vec![0.0; n];
        for (a, p) in psi.iter().enumerate() {
            for (j, m) in abar.iter_mut().enumerate() {
                *m += p * p * (self.exponent(a)[j] - base[j]);
            }
        }
        let mut out = vec![0.0; t * n];
        for (a, p) in psi.iter().enumerate() {
            for j in 0..n {
                out[a * n + j] = p * ((self.exponent(a)[j] - base[j]) - abar[j]);
            }
        }
        out
    }

    /// `D_x psi = |v|^{-1} (I - psi psi^T) D_x v`, a `t x n` matrix.
    pub fn psi_jacobian(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        self.check_point(x)?;
        let n = self.n();
        let mut rows = self.log_jacobian_rows(&log_point(x));
        for row in rows.chunks_mut(n) {
            for (v, xj) in row.iter_mut().zip(x) {
                *v /= xj;
            }
        }
        Ok(DMatrix::from_row_slice(self.t(), n, &rows))
    }

    /// `sqrt det(D_y psi^T D_y psi)`, the density per unit log-volume.
    pub fn log_density(&self, y: &[f64]) -> f64 {
        gram_sqrt_det(&self.log_jacobian_rows(y), self.t(), self.n())
    }

    /// `sqrt det(D_x psi^T D_x psi)`.
    pub fn ek_density(&self, x: &[f64]) -> Result<f64> {
        let jac = self.psi_jacobian(x)?;
        let rows: Vec<f64> = jac.transpose().as_slice().to_vec();
        Ok(gram_sqrt_det(&rows, self.t(), self.n()))
    }

    /// `|det|` of the `n x n` submatrix of `D_y psi` on the rows `subset`.
    pub fn log_minor(&self, y: &[f64], subset: &[usize]) -> f64 {
        minor(&self.log_jacobian_rows(y), self.n(), subset).abs()
    }
}

fn log_point(x: &[f64]) -> Vec<f64> {
    x.iter().map(|v| v.ln()).collect()
}

fn minor(rows: &[f64], n: usize, subset: &[usize]) -> f64 {
    let sub: Vec<f64> = subset
        .iter()
        .flat_map(|&a| rows[a * n..(a + 1) * n].iter().copied())
        .collect();
    determinant(&sub, n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntegrationMethod {
    AdaptiveQuadrature,
    /// Stratified uniform sampling of the log box.
    MonteCarlo,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IntegrationConfig {
    /// `None` picks quadrature for `n <= 2` and Monte Carlo above.
    pub method: Option<IntegrationMethod>,
    /// Initial half-width of the log box.
    pub radius: f64,
    pub max_radius: f64,
    /// Stop extending once a shell adds less than this fraction.
    pub tail_tol: f64,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_evaluations: usize,
    /// Monte Carlo samples per box or shell.
    pub samples: usize,
    pub seed: u64,
}

impl Default for IntegrationConfig {
    fn default() -> Self {
        Self {
            method: None,
            radius: 8.0,
            max_radius: 60.0,
            tail_tol: 1e-3,
            abs_tol: 1e-10,
            rel_tol: 1e-9,
            max_evaluations: 2_000_000,
            samples: 1 << 18,
            seed: 0,
        }
    }
}

impl IntegrationConfig {
    pub fn method_for(&self, n: usize) -> IntegrationMethod {
        self.method.unwrap_or(if n <= 2 {
            IntegrationMethod::AdaptiveQuadrature
        } else {
            IntegrationMethod::MonteCarlo
        })
    }

    fn tolerance(&self) -> Tolerance {
        Tolerance {
            abs: self.abs_tol,
            rel: self.rel_tol,
            max_evaluations: self.max_evaluations,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegralEstimate {
    pub estimate: f64,
    /// Set for quadrature.
    pub abs_error_bound: Option<f64>,
    /// Set for Monte Carlo.
    pub std_error: Option<f64>,
    pub method: IntegrationMethod,
    pub evaluations: usize,
    /// Half-width of the last log box integrated.
    pub radius: f64,
    /// The tail or evaluation budget ran out before the tolerances were met.
    pub truncated: bool,
}

impl IntegralEstimate {
    /// Whichever error measure the method provides.
    pub fn error(&self) -> f64 {
        self.abs_error_bound.or(self.std_error).unwrap_or(0.0)
    }
}

#[derive(Clone, Copy, Debug)]
struct Partial {
    value: f64,
    /// Error bound for quadrature, variance for Monte Carlo.
    error: f64,
    evaluations: usize,
    converged: bool,
}

/// Integral of `f` over `outer` minus the interior of `inner`.
fn integrate_region<F: Fn(&[f64]) -> f64>(
    f: &F,
    outer: &[(f64, f64)],
    inner: Option<&[(f64, f64)]>,
    method: IntegrationMethod,
    cfg: &IntegrationConfig,
    stream: u64,
) -> Result<Partial> {
    match method {
        IntegrationMethod::AdaptiveQuadrature => {
            let mut total = Partial {
                value: 0.0,
                error: 0.0,
                evaluations: 0,
                converged: true,
            };
            for rect in split_region(outer, inner) {
                let q = match rect.len() {
                    1 => integrate(|y| f(&[y]), rect[0].0, rect[0].1, cfg.tolerance()),
                    2 => integrate_2d(|a, b| f(&[a, b]), rect[0], rect[1], cfg.tolerance()),
                    n => {
                        return Err(Error::Unsupported(format!(
                            "quadrature is available for n <= 2, got n = {n}"
                        )))
                    }
                };
                total.value += q.value;
                total.error += q.error;
                total.evaluations += q.evaluations;
                total.converged &= q.converged;
            }
            Ok(total)
        }
        IntegrationMethod::MonteCarlo => Ok(stratified(f, outer, inner, cfg, stream)),
    }
}

/// Cover `outer \ inner` by disjoint boxes (inner must sit inside outer).
fn split_region(outer: &[(f64, f64)], inner: Option<&[(f64, f64)]>) -> Vec<Vec<(f64, f64)>> {
    let Some(inner) = inner else {
        return vec![outer.to_vec()];
    };
    let mut pieces = Vec::new();
    // Peel one axis at a time: slabs below and above the inner box on axis
    // k, restricted to the inner range on axes before k.
    for k in 0..outer.len() {
        for side in [(outer[k].0, inner[k].0), (inner[k].1, outer[k].1)] {
            if side.1 <= side.0 {
                continue;
            }
            let mut rect = Vec::with_capacity(outer.len());
            for j in 0..outer.len() {
                rect.push(match j.cmp(&k) {
                    std::cmp::Ordering::Less => inner[j],
                    std::cmp::Ordering::Equal => side,
                    std::cmp::Ordering::Greater => outer[j],
                });
            }
            pieces.push(rect);
        }
    }
    pieces
}

fn stratified<F: Fn(&[f64]) -> f64>(
    f: &F,
    outer: &[(f64, f64)],
    inner: Option<&[(f64, f64)]>,
    cfg: &IntegrationConfig,
    stream: u64,
) -> Partial {
    const PER_STRATUM: usize = 16;
    let n = outer.len();
    let target = (cfg.samples / PER_STRATUM).max(1) as f64;
    let per_axis = ((target.powf(1.0 / n as f64) / 4.0).round() as usize).max(1) * 4;
    let strata = per_axis.pow(n as u32);
    let widths: Vec<f64> = outer
        .iter()
        .map(|(lo, hi)| (hi - lo) / per_axis as f64)
        .collect();
    let cell_volume: f64 = widths.iter().product();
    let key = StreamKey::new(cfg.seed, stream);
    let inside =
        |p: &[f64]| inner.is_some_and(|b| p.iter().zip(b).all(|(v, (lo, hi))| lo < v && v < hi));
    let mut value = 0.0;
    let mut variance = 0.0;
    let mut evaluations = 0;
    let mut corner = vec![0.0; n];
    let mut far = vec![0.0; n];
    let mut point = vec![0.0; n];
    for s in 0..strata {
        let mut rest = s;
        for j in 0..n {
            let i = rest % per_axis;
            rest /= per_axis;
            corner[j] = outer[j].0 + widths[j] * i as f64;
            far[j] = corner[j] + widths[j];
        }
        // strata inside the excluded box contribute nothing
        if let Some(b) = inner {
            if corner
                .iter()
                .zip(&far)
                .zip(b)
                .all(|((c, d), (lo, hi))| *lo <= *c && *d <= *hi)
            {
                continue;
            }
        }
        let u = key.uniform_row(s as u64, PER_STRATUM * n);
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for draw in u.chunks(n) {
            for j in 0..n {
                point[j] = corner[j] + widths[j] * draw[j];
            }
            let v = if inside(&point) { 0.0 } else { f(&point) };
            sum += v;
            sum_sq += v * v;
        }
        evaluations += PER_STRATUM;
        let k = PER_STRATUM as f64;
        let mean = sum / k;
        let var = ((sum_sq - k * mean * mean) / (k - 1.0)).max(0.0);
        value += cell_volume * mean;
        variance += cell_volume * cell_volume * var / k;
    }
    Partial {
        value,
        error: variance,
        evaluations,
        converged: true,
    }
}

fn finish(
    method: IntegrationMethod,
    value: f64,
    error: f64,
    evaluations: usize,
    radius: f64,
    truncated: bool,
) -> IntegralEstimate {
    let (abs_error_bound, std_error) = match method {
        IntegrationMethod::AdaptiveQuadrature => (Some(error), None),
        IntegrationMethod::MonteCarlo => (None, Some(error.sqrt())),
    };
    IntegralEstimate {
        estimate: value.max(0.0),
        abs_error_bound,
        std_error,
        method,
        evaluations,
        radius,
        truncated,
    }
}

/// Integral of `f` over all of `R^n` (log coordinates) by doubling the box
/// until a shell adds less than `tail_tol` of the running total.
fn integrate_unbounded<F: Fn(&[f64]) -> f64>(
    f: &F,
    n: usize,
    cfg: &IntegrationConfig,
) -> Result<IntegralEstimate> {
    if !(cfg.radius > 0.0 && cfg.max_radius >= cfg.radius) {
        return Err(Error::InvalidArgument(format!(
            "need 0 < radius <= max_radius, got {} and {}",
            cfg.radius, cfg.max_radius
        )));
    }
    let method = cfg.method_for(n);
    let cube = |r: f64| vec![(-r, r); n];
    let first = integrate_region(f, &cube(cfg.radius), None, method, cfg, 0)?;
    let mut value = first.value;
    let mut error = first.error;
    let mut evaluations = first.evaluations;
    let mut converged = first.converged;
    let mut radius = cfg.radius;
    let mut previous_shell = f64::INFINITY;
    let mut stream = 1;
    let mut tail_met = false;
    while radius < cfg.max_radius {
        let next = (2.0 * radius).min(cfg.max_radius);
        let shell = integrate_region(f, &cube(next), Some(&cube(radius)), method, cfg, stream)?;
        stream += 1;
        value += shell.value;
        error += shell.error;
        evaluations += shell.evaluations;
        converged &= shell.converged;
        radius = next;
        let small = shell.value.abs() < cfg.tail_tol * value.abs();
        if small {
            // remaining tail, extrapolated from the decay between shells
            let ratio = if previous_shell > shell.value.abs() {
                shell.value.abs() / previous_shell
            } else {
                1.0
            };
            let tail = shell.value.abs() * ratio;
            error += match method {
                IntegrationMethod::AdaptiveQuadrature => tail,
                IntegrationMethod::MonteCarlo => tail * tail,
            };
            tail_met = true;
            break;
        }
        previous_shell = shell.value.abs();
    }
    Ok(finish(
        method,
        value,
        error,
        evaluations,
        radius,
        !(tail_met && converged),
    ))
}

/// Expected number of positive zeros,
/// `2 / vol_n(S^n) * int_{R_+^n} sqrt det(D psi^T D psi) dx`.
pub fn expected_zeros(map: &VeroneseMap, cfg: &IntegrationConfig) -> Result<IntegralEstimate> {
    let scale = 2.0 / vol_sphere(map.n());
    let f = |y: &[f64]| scale * map.log_density(y);
    integrate_unbounded(&f, map.n(), cfg)
}

/// The same integral restricted to `exp(box)` for a log box given by
/// per-axis bounds.
pub fn expected_zeros_in_box(
    map: &VeroneseMap,
    bounds: &[(f64, f64)],
    cfg: &IntegrationConfig,
) -> Result<IntegralEstimate> {
    if bounds.len() != map.n() || bounds.iter().any(|(lo, hi)| !(lo <= hi)) {
        return Err(Error::InvalidArgument(
            "box must have one finite interval per variable".into(),
        ));
    }
    let scale = 2.0 / vol_sphere(map.n());
    let f = |y: &[f64]| scale * map.log_density(y);
    let method = cfg.method_for(map.n());
    let p = integrate_region(&f, bounds, None, method, cfg, 0)?;
    let radius = bounds
        .iter()
        .map(|(lo, hi)| lo.abs().max(hi.abs()))
        .fold(0.0, f64::max);
    Ok(finish(
        method,
        p.value,
        p.error,
        p.evaluations,
        radius,
        !p.converged,
    ))
}

/// `1/vol_n(S^n) * int |det M_I(x)| dx` where `M_I` holds the rows of
/// `D_x psi` indexed by `subset`.
pub fn subset_integral(
    map: &VeroneseMap,
    subset: &[usize],
    cfg: &IntegrationConfig,
) -> Result<IntegralEstimate> {
    let n = map.n();
    let mut sorted = subset.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != n || sorted.iter().any(|&a| a >= map.t()) {
        return Err(Error::InvalidArgument(format!(
            "subset must hold {n} distinct monomial indices below {}",
            map.t()
        )));
    }
    let scale = 1.0 / vol_sphere(n);
    let f = |y: &[f64]| scale * map.log_minor(y, &sorted);
    integrate_unbounded(&f, n, cfg)
}

/// Both sides of the Cauchy-Binet comparison at one point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CauchyBinet {
    pub density: f64,
    /// `sum_I |det M_I(x)|`.
    pub sum_abs_minors: f64,
    /// `sum_I det(M_I(x))^2`, which equals `density^2`.
    pub sum_sq_minors: f64,
}

pub fn cauchy_binet_check(map: &VeroneseMap, x: &[f64]) -> Result<CauchyBinet> {
    let n = map.n();
    if map.t() < n {
        return Err(Error::InvalidArgument(format!(
            "need t >= n, got t = {}, n = {n}",
            map.t()
        )));
    }
    let jac = map.psi_jacobian(x)?;
    let rows: Vec<f64> = jac.transpose().as_slice().to_vec();
    let density = gram_sqrt_det(&rows, map.t(), n);
    let mut sum_abs = 0.0;
    let mut sum_sq = 0.0;
    for subset in combinations(map.t(), n) {
        let d = minor(&rows, n, &subset);
        sum_abs += d.abs();
        sum_sq += d * d;
    }
    Ok(CauchyBinet {
        density,
        sum_abs_minors: sum_abs,
        sum_sq_minors: sum_sq,
    })
}

/// All `k`-subsets of `0..t` in lexicographic order.
pub fn combinations(t: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..k).collect();
    if k > t {
        return out;
    }
    loop {
        out.push(current.clone());
        let Some(i) = (0..k).rev().find(|&i| current[i] < t - k + i) else {
            return out;
        };
        current[i] += 1;
        for j in i + 1..k {
            current[j] = current[j - 1] + 1;
        }
    }
}

/// `(|psi'(x)|, sqrt(t) d/dx ln |v(x)|_1)` for a univariate map with unit
/// weights, `0` in the support and `0 < x < 1`; the first never exceeds the
/// second.
pub fn univariate_density_bound_check(map: &VeroneseMap, x: f64) -> Result<(f64, f64)> {
    if map.n() != 1 {
        return Err(Error::Unsupported("univariate maps only".into()));
    }
    if !map.sigma().is_unit() {
        return Err(Error::InvalidVariance("unit weights required".into()));
    }
    let exps: Vec<i64> = map.support().exponents().iter().map(|e| e[0]).collect();
    if exps[0] != 0 {
        return Err(Error::InvalidSupport(
            "support must contain 0 and no negative exponents".into(),
        ));
    }
    if !(0.0 < x && x < 1.0) {
        return Err(Error::Domain { index: 0, value: x });
    }
    let lhs = map.ek_density(&[x])?;
    let l1: f64 = exps.iter().map(|&a| x.powi(a as i32)).sum();
    let dl1: f64 = exps
        .iter()
        .filter(|&&a| a > 0)
        .map(|&a| a as f64 * x.powi(a as i32 - 1))
        .sum();
    Ok((lhs, (map.t() as f64).sqrt() * dl1 / l1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(exps: &[i64], sigma: Option<Vec<f64>>) -> VeroneseMap {
        let s = Support::univariate(exps).unwrap();
        let sigma = match sigma {
            Some(w) => VarianceSystem::new(w).unwrap(),
            None => VarianceSystem::unit(s.t()),
        };
        VeroneseMap::new(s, sigma).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn sphere_volumes() {
        assert!(close(vol_sphere(1), 2.0 * std::f64::consts::PI, 1e-12));
        assert!(close(vol_sphere(2), 4.0 * std::f64::consts::PI, 1e-12));
        let pi = std::f64::consts::PI;
        assert!(close(vol_sphere(3), 2.0 * pi * pi, 1e-12));
    }

    #[test]
    fn psi_examples() {
        let p = map(&[0, 1, 2], None).psi(&[2.0]).unwrap();
        let r = 21f64.sqrt();
        for (a, b) in p.iter().zip([1.0 / r, 2.0 / r, 4.0 / r]) {
            assert!(close(*a, b, 1e-15));
        }
        let p = map(&[0, 100], None).psi(&[10.0]).unwrap();
        assert!(close(p[1], 1.0, 1e-12));
        assert!(p[0] > 0.0);
        let p = map(&[0, 1], Some(vec![2.0, 1.0])).psi(&[1.0]).unwrap();
        assert!(close(p[0], 2.0 / 5f64.sqrt(), 1e-15));
        assert!(close(p[1], 1.0 / 5f64.sqrt(), 1e-15));
        assert!(map(&[0, 1], None).psi(&[0.0]).is_err());
    }

    #[test]
    fn jacobian_of_line() {
        // |psi'(x)| = 1/(1+x^2) for (1, x)/sqrt(1+x^2)
        let m = map(&[0, 1], None);
        for x in [1e-6, 0.3, 1.0, 7.0] {
            let j = m.psi_jacobian(&[x]).unwrap();
            assert!(close(j.norm(), 1.0 / (1.0 + x * x), 1e-12));
            let psi = m.psi(&[x]).unwrap();
            assert!(close(psi[0] * j[(0, 0)] + psi[1] * j[(1, 0)], 0.0, 1e-15));
        }
    }

    #[test]
    fn density_examples() {
        let s = Support::dense_univariate(4);
        let kostlan = VeroneseMap::new(s.clone(), VarianceSystem::kostlan(&s).unwrap()).unwrap();
        assert!(close(kostlan.ek_density(&[1.0]).unwrap(), 1.0, 1e-12));
        // sqrt(d)/(1+x^2) for Kostlan weights
        for x in [0.2, 3.0] {
            assert!(close(
                kostlan.ek_density(&[x]).unwrap(),
                2.0 / (1.0 + x * x),
                1e-12
            ));
        }
        assert!(close(
            map(&[0, 1], None).ek_density(&[1.0]).unwrap(),
            0.5,
            1e-15
        ));
        let collinear = Support::new(vec![vec![1, 0], vec![2, 0]]).unwrap();
        let m = VeroneseMap::new(collinear, VarianceSystem::unit(2)).unwrap();
        assert_eq!(m.ek_density(&[0.7, 1.3]).unwrap(), 0.0);
        let square = Support::new(vec![vec![0, 1], vec![1, 0]]).unwrap();
        let m = VeroneseMap::new(square, VarianceSystem::unit(2)).unwrap();
        // a 2 x 2 Jacobian whose columns are orthogonal to psi has rank <= 1
        assert!(m.ek_density(&[0.7, 1.3]).unwrap() < 1e-12);
    }

    #[test]
    fn density_ignores_common_sigma_scale() {
        let s = Support::new(vec![vec![0, 0], vec![2, 1], vec![1, 3], vec![4, 0]]).unwrap();
        let w = vec![1.0, 0.5, 2.0, 0.75];
        let a = VeroneseMap::new(s.clone(), VarianceSystem::new(w.clone()).unwrap()).unwrap();
        let scaled: Vec<f64> = w.iter().map(|v| v * 37.0).collect();
        let b = VeroneseMap::new(s, VarianceSystem::new(scaled).unwrap()).unwrap();
        let x = [0.4, 1.9];
        let (da, db) = (a.ek_density(&x).unwrap(), b.ek_density(&x).unwrap());
        assert!(close(da, db, 1e-12 * da));
    }

    #[test]
    fn line_integral_is_half() {
        let est = expected_zeros(&map(&[0, 1], None), &IntegrationConfig::default()).unwrap();
        assert!(close(est.estimate, 0.5, 1e-7), "{est:?}");
        assert!(!est.truncated);
    }

    #[test]
    fn subset_integrals_of_line() {
        let m = map(&[0, 1], None);
        let cfg = IntegrationConfig::default();
        let target = 1.0 / (2.0 * std::f64::consts::PI);
        for i in 0..2 {
            let est = subset_integral(&m, &[i], &cfg).unwrap();
            assert!(close(est.estimate, target, 1e-6), "{est:?}");
        }
        assert!(subset_integral(&m, &[0, 1], &cfg).is_err());
    }

    #[test]
    fn region_split_covers_shell() {
        let outer = [(-2.0, 2.0), (-2.0, 2.0), (-2.0, 2.0)];
        let inner = [(-1.0, 1.0), (-1.0, 1.0), (-1.0, 1.0)];
        let pieces = split_region(&outer, Some(&inner));
        let vol: f64 = pieces
            .iter()
            .map(|r| r.iter().map(|(a, b)| b - a).product::<f64>())
            .sum();
        assert!(close(vol, 64.0 - 8.0, 1e-12));
    }

    #[test]
    fn stratified_volume() {
        let cfg = IntegrationConfig {
            samples: 4096,
            ..Default::default()
        };
        let outer = [(-2.0, 2.0), (-2.0, 2.0)];
        let inner = [(-1.0, 1.0), (-1.0, 1.0)];
        let p = stratified(&|_: &[f64]| 1.0, &outer, Some(&inner), &cfg, 0);
        assert!(close(p.value, 12.0, 1e-9));
    }

    #[test]
    fn combinations_enumerate() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
        assert!(combinations(2, 3).is_empty());
    }

    #[test]
    fn univariate_bound_check_examples() {
        let (l, r) = univariate_density_bound_check(&map(&[0, 1], None), 0.5).unwrap();
        assert!(close(l, 0.8, 1e-12));
        assert!(close(r, 2f64.sqrt() / 1.5, 1e-12));
        let (l, r) = univariate_density_bound_check(&map(&[0], None), 0.3).unwrap();
        assert_eq!((l, r), (0.0, 0.0));
        assert!(univariate_density_bound_check(&map(&[1, 2], None), 0.3).is_err());
    }

    #[test]
    fn cauchy_binet_single_subset() {
        let s = Support::new(vec![vec![0, 0], vec![1, 2], vec![3, 1]]).unwrap();
        let m = VeroneseMap::new(s, VarianceSystem::unit(3)).unwrap();
        let cb = cauchy_binet_check(&m, &[0.8, 1.7]).unwrap();
        assert!(close(
            cb.density * cb.density,
            cb.sum_sq_minors,
            1e-12 * cb.sum_sq_minors
        ));
        assert!(cb.density <= cb.sum_abs_minors * (1.0 + 1e-12));
    }
}
