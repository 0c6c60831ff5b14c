//! Supports, variance systems and sampled fewnomial systems.
//!
//! A [`Support`] is a finite set of integer exponent vectors kept in
//! lexicographic order, so column `j` of a coefficient matrix always refers
//! to the `j`-th smallest exponent. A [`FewnomialSystem`] holds one row of
//! standard-normal draws per equation; the coefficient actually multiplying
//! `x^a` in equation `i` is `sigma(a) * xi[i][a]`.

use serde::{Deserialize, Serialize};

use crate::rng::StreamKey;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SupportDocument", into = "SupportDocument")]
pub struct Support {
    n: usize,
    exponents: Vec<Vec<i64>>,
}

#[derive(Serialize, Deserialize)]
struct SupportDocument {
    n: usize,
    exponents: Vec<Vec<i64>>,
}

impl TryFrom<SupportDocument> for Support {
    type Error = Error;
    fn try_from(doc: SupportDocument) -> Result<Self> {
        let s = Support::new(doc.exponents)?;
        if s.n != doc.n {
            return Err(Error::InvalidSupport(format!(
                "declared n = {} but exponents have length {}",
                doc.n, s.n
            )));
        }
        Ok(s)
    }
}

impl From<Support> for SupportDocument {
    fn from(s: Support) -> Self {
        SupportDocument {
            n: s.n,
            exponents: s.exponents,
        }
    }
}

impl Support {
    /// Builds a support from exponent vectors in any order.
    pub fn new(mut exponents: Vec<Vec<i64>>) -> Result<Self> {
        let n = match exponents.first() {
            Some(e) => e.len(),
            None => return Err(Error::InvalidSupport("empty support".into())),
        };
        if n == 0 {
            return Err(Error::InvalidSupport("zero variables".into()));
        }
        if let Some(bad) = exponents.iter().find(|e| e.len() != n) {
            return Err(Error::InvalidSupport(format!(
                "exponent {bad:?} does not have length {n}"
            )));
        }
        exponents.sort();
        if let Some(w) = exponents.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidSupport(format!(
                "duplicate exponent {:?}",
                w[0]
            )));
        }
        Ok(Self { n, exponents })
    }

    pub fn univariate(exponents: &[i64]) -> Result<Self> {
        Self::new(exponents.iter().map(|&e| vec![e]).collect())
    }

    /// Dense univariate support `{0, 1, ..., d}`.
    pub fn dense_univariate(d: u32) -> Self {
        Self {
            n: 1,
            exponents: (0..=i64::from(d)).map(|e| vec![e]).collect(),
        }
    }

    /// Sorts `(exponent, weight)` pairs together so the weights stay aligned
    /// with the canonical order.
    pub fn sorted_with_weights(pairs: Vec<(Vec<i64>, f64)>) -> Result<(Self, Vec<f64>)> {
        let mut pairs = pairs;
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        let (exps, weights): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
        Ok((Self::new(exps)?, weights))
    }

    /// `t` distinct exponent vectors drawn uniformly from `[0, max_exponent]^n`.
    pub fn random(n: usize, t: usize, max_exponent: i64, seed: u64) -> Result<Self> {
        if n == 0 || t == 0 || max_exponent < 0 {
            return Err(Error::InvalidArgument(format!(
                "random support needs n, t >= 1 and max_exponent >= 0 (got n={n}, t={t}, max={max_exponent})"
            )));
        }
        let side = (max_exponent + 1) as f64;
        if (t as f64) > side.powi(n as i32) {
            return Err(Error::InvalidArgument(format!(
                "cannot draw {t} distinct exponents from [0, {max_exponent}]^{n}"
            )));
        }
        let key = StreamKey::new(seed, 0x5350_5254);
        let mut chosen: Vec<Vec<i64>> = Vec::with_capacity(t);
        let mut row = 0u64;
        while chosen.len() < t {
            let u = key.uniform_row(row, n);
            row += 1;
            let e: Vec<i64> = u
                .iter()
                .map(|&v| ((v * side) as i64).min(max_exponent))
                .collect();
            if !chosen.contains(&e) {
                chosen.push(e);
            }
        }
        Self::new(chosen)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> usize {
        self.exponents.len()
    }

    pub fn exponents(&self) -> &[Vec<i64>] {
        &self.exponents
    }

    pub fn exponent(&self, j: usize) -> &[i64] {
        &self.exponents[j]
    }

    /// Exponents as reals, row-major `t x n`.
    pub fn exponent_matrix(&self) -> Vec<f64> {
        self.exponents
            .iter()
            .flat_map(|e| e.iter().map(|&v| v as f64))
            .collect()
    }

    fn require_univariate(&self, what: &str) -> Result<()> {
        if self.n != 1 {
            return Err(Error::Unsupported(format!(
                "{what} is defined for univariate supports only (n = {})",
                self.n
            )));
        }
        Ok(())
    }
}

/// Translates a univariate support so its smallest exponent is 0.
pub fn normalize_laurent(support: &Support) -> Result<Support> {
    support.require_univariate("normalize_laurent")?;
    let min = support.exponents[0][0];
    Support::new(support.exponents.iter().map(|e| vec![e[0] - min]).collect())
}

/// The support `-A` of `f(1/x)`.
pub fn reflect_support(support: &Support) -> Result<Support> {
    support.require_univariate("reflect_support")?;
    Support::new(support.exponents.iter().map(|e| vec![-e[0]]).collect())
}

/// Per-monomial standard deviations aligned with the support order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct VarianceSystem {
    weights: Vec<f64>,
}

impl TryFrom<Vec<f64>> for VarianceSystem {
    type Error = Error;
    fn try_from(weights: Vec<f64>) -> Result<Self> {
        Self::new(weights)
    }
}

impl From<VarianceSystem> for Vec<f64> {
    fn from(v: VarianceSystem) -> Self {
        v.weights
    }
}

impl VarianceSystem {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidVariance("no weights".into()));
        }
        if let Some((j, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(w.is_finite() && **w > 0.0))
        {
            return Err(Error::InvalidVariance(format!(
                "weight {j} is {w}, must be finite and positive"
            )));
        }
        Ok(Self { weights })
    }

    pub fn unit(t: usize) -> Self {
        Self {
            weights: vec![1.0; t],
        }
    }

    /// Kostlan weights `sigma(a) = sqrt(d! / (a_1! ... a_n! (d - |a|)!))`
    /// with `d` the largest total degree in the support. For `n = 1` this is
    /// `sqrt(binomial(d, a))`.
    pub fn kostlan(support: &Support) -> Result<Self> {
        if support.exponents().iter().any(|e| e.iter().any(|&v| v < 0)) {
            return Err(Error::InvalidVariance(
                "Kostlan weights need nonnegative exponents".into(),
            ));
        }
        let d = support
            .exponents()
            .iter()
            .map(|e| e.iter().sum::<i64>())
            .max()
            .unwrap_or(0);
        let weights = support
            .exponents()
            .iter()
            .map(|e| {
                let rest = d - e.iter().sum::<i64>();
                let log_multinomial = ln_factorial(d)
                    - e.iter().map(|&v| ln_factorial(v)).sum::<f64>()
                    - ln_factorial(rest);
                (0.5 * log_multinomial).exp()
            })
            .collect();
        Self::new(weights)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.weights.iter().all(|&w| w == 1.0)
    }

    fn check_against(&self, support: &Support) -> Result<()> {
        if self.weights.len() != support.t() {
            return Err(Error::InvalidVariance(format!(
                "{} weights for a support of size {}",
                self.weights.len(),
                support.t()
            )));
        }
        Ok(())
    }
}

fn ln_factorial(k: i64) -> f64 {
    (2..=k).map(|v| (v as f64).ln()).sum()
}

/// Point of the positive orthant in log coordinates, `x = exp(y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LogPoint(Vec<f64>);

impl LogPoint {
    pub fn new(y: Vec<f64>) -> Result<Self> {
        if let Some((index, &value)) = y.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::Domain { index, value });
        }
        Ok(Self(y))
    }

    pub fn from_point(x: &[f64]) -> Result<Self> {
        check_positive(x)?;
        Ok(Self(x.iter().map(|v| v.ln()).collect()))
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn to_point(&self) -> Vec<f64> {
        self.0.iter().map(|v| v.exp()).collect()
    }
}

pub(crate) fn check_positive(x: &[f64]) -> Result<()> {
    match x
        .iter()
        .enumerate()
        .find(|(_, v)| !(v.is_finite() && **v > 0.0))
    {
        Some((index, &value)) => Err(Error::Domain { index, value }),
        None => Ok(()),
    }
}

/// A sampled system: `n` equations over a shared support.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SystemDocument", into = "SystemDocument")]
pub struct FewnomialSystem {
    support: Support,
    sigma: VarianceSystem,
    coefficients: Vec<Vec<f64>>,
}

/// On-disk form: `{"n", "exponents", "sigma", "coefficients"}`.
#[derive(Serialize, Deserialize)]
struct SystemDocument {
    n: usize,
    exponents: Vec<Vec<i64>>,
    sigma: Vec<f64>,
    coefficients: Vec<Vec<f64>>,
}

impl TryFrom<SystemDocument> for FewnomialSystem {
    type Error = Error;
    fn try_from(doc: SystemDocument) -> Result<Self> {
        let support = Support::try_from(SupportDocument {
            n: doc.n,
            exponents: doc.exponents.clone(),
        })?;
        if support.exponents() != doc.exponents.as_slice() {
            return Err(Error::InvalidSupport(
                "exponents must be listed in lexicographic order".into(),
            ));
        }
        FewnomialSystem::new(support, VarianceSystem::new(doc.sigma)?, doc.coefficients)
    }
}

impl From<FewnomialSystem> for SystemDocument {
    fn from(s: FewnomialSystem) -> Self {
        SystemDocument {
            n: s.support.n,
            exponents: s.support.exponents,
            sigma: s.sigma.weights,
            coefficients: s.coefficients,
        }
    }
}

impl FewnomialSystem {
    pub fn new(
        support: Support,
        sigma: VarianceSystem,
        coefficients: Vec<Vec<f64>>,
    ) -> Result<Self> {
        sigma.check_against(&support)?;
        if coefficients.len() != support.n() {
            return Err(Error::InvalidSystem(format!(
                "{} coefficient rows for n = {}",
                coefficients.len(),
                support.n()
            )));
        }
        for (i, row) in coefficients.iter().enumerate() {
            if row.len() != support.t() {
                return Err(Error::InvalidSystem(format!(
                    "row {i} has {} entries, expected {}",
                    row.len(),
                    support.t()
                )));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidSystem(format!(
                    "row {i} has a non-finite entry"
                )));
            }
        }
        Ok(Self {
            support,
            sigma,
            coefficients,
        })
    }

    pub fn support(&self) -> &Support {
        &self.support
    }

    pub fn sigma(&self) -> &VarianceSystem {
        &self.sigma
    }

    /// The raw draws `xi[i][a]`.
    pub fn coefficients(&self) -> &[Vec<f64>] {
        &self.coefficients
    }

    pub fn n(&self) -> usize {
        self.support.n()
    }

    pub fn t(&self) -> usize {
        self.support.t()
    }

    /// `sigma(a) * xi[i][a]`, the coefficient of `x^a` in equation `i`.
    pub fn weighted_row(&self, i: usize) -> Vec<f64> {
        self.coefficients[i]
            .iter()
            .zip(self.sigma.weights())
            .map(|(c, s)| c * s)
            .collect()
    }

    /// Multiplies every draw by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            support: self.support.clone(),
            sigma: self.sigma.clone(),
            coefficients: self
                .coefficients
                .iter()
                .map(|row| row.iter().map(|v| v * c).collect())
                .collect(),
        }
    }

    /// `(f_1(x), ..., f_n(x))` with monomials formed as `exp(a . log x)`.
    pub fn evaluate(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n() {
            return Err(Error::InvalidArgument(format!(
                "point has {} coordinates, system has {} variables",
                x.len(),
                self.n()
            )));
        }
        let y = LogPoint::from_point(x)?;
        Ok(self.evaluate_log(&y))
    }

    pub fn evaluate_log(&self, y: &LogPoint) -> Vec<f64> {
        let monomials: Vec<f64> = self
            .support
            .exponents()
            .iter()
            .zip(self.sigma.weights())
            .map(|(a, s)| {
                let log_term: f64 = a
                    .iter()
                    .zip(y.coords())
                    .map(|(&ai, yi)| ai as f64 * yi)
                    .sum();
                s * log_term.exp()
            })
            .collect();
        self.coefficients
            .iter()
            .map(|row| compensated_sum(row.iter().zip(&monomials).map(|(c, m)| c * m)))
            .collect()
    }

    /// `sum_a |sigma(a) xi[i][a] x^a|` per equation; the natural scale for
    /// residuals.
    pub fn term_magnitudes(&self, x: &[f64]) -> Result<Vec<f64>> {
        let abs = Self {
            support: self.support.clone(),
            sigma: self.sigma.clone(),
            coefficients: self
                .coefficients
                .iter()
                .map(|r| r.iter().map(|v| v.abs()).collect())
                .collect(),
        };
        abs.evaluate(x)
    }
}

/// Draws a system from stream `(seed, 0)`; same as `sample_trial(.., 0)`.
pub fn sample(support: &Support, sigma: &VarianceSystem, seed: u64) -> Result<FewnomialSystem> {
    sample_trial(support, sigma, seed, 0)
}

/// Draws the system of trial `trial`: entry `(i, a)` is the standard normal
/// at cell `(i, a)` of stream `(seed, trial)`.
pub fn sample_trial(
    support: &Support,
    sigma: &VarianceSystem,
    seed: u64,
    trial: u64,
) -> Result<FewnomialSystem> {
    let key = StreamKey::new(seed, trial);
    let coefficients = (0..support.n())
        .map(|i| key.normal_row(i as u64, support.t()))
        .collect();
    FewnomialSystem::new(support.clone(), sigma.clone(), coefficients)
}

/// Neumaier compensated summation.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}
