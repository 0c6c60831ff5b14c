//! Certified counting of nondegenerate positive zeros of small square
//! systems, by subdivision of a box in log coordinates.
//!
//! With `y = log x` each monomial is `exp(a . y)`, whose range over a box
//! is enclosed tightly by interval arithmetic. A cell is discarded when one
//! of several enclosures of the system excludes zero, and a zero is
//! certified with the Krawczyk operator on a slightly inflated cell, which
//! also proves the Jacobian invertible there. Certifications of the same
//! zero from neighbouring cells are merged before counting.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::bounds::khovanskii;
use crate::interval::{dot, Interval};
use crate::linalg::invert;
use crate::systems::FewnomialSystem;
use crate::{Error, Result};

/// Largest number of variables the subdivision accepts.
pub const MAX_VARIABLES: usize = 3;

/// Axis-aligned box in log coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "Vec<[f64; 2]>", try_from = "Vec<[f64; 2]>")]
pub struct LogBox {
    axes: Vec<Interval>,
}

impl TryFrom<Vec<[f64; 2]>> for LogBox {
    type Error = Error;
    fn try_from(v: Vec<[f64; 2]>) -> Result<Self> {
        Self::new(v.into_iter().map(|[a, b]| (a, b)).collect())
    }
}

impl From<LogBox> for Vec<[f64; 2]> {
    fn from(b: LogBox) -> Self {
        b.axes.iter().map(|i| [i.lo, i.hi]).collect()
    }
}

impl LogBox {
    pub fn new(bounds: Vec<(f64, f64)>) -> Result<Self> {
        if bounds
            .iter()
            .any(|(lo, hi)| !(lo.is_finite() && hi.is_finite() && lo <= hi))
        {
            return Err(Error::InvalidArgument(format!(
                "log box bounds must be finite with lo <= hi: {bounds:?}"
            )));
        }
        Ok(Self {
            axes: bounds
                .into_iter()
                .map(|(a, b)| Interval::new(a, b))
                .collect(),
        })
    }

    /// `[-r, r]^n`.
    pub fn cube(n: usize, r: f64) -> Result<Self> {
        Self::new(vec![(-r, r); n])
    }

    /// The log box whose image under `exp` contains the given `x` ranges.
    pub fn from_x_bounds(bounds: &[(f64, f64)]) -> Result<Self> {
        if bounds.iter().any(|(lo, hi)| !(*lo > 0.0 && lo <= hi)) {
            return Err(Error::InvalidArgument(
                "x bounds must be positive with lo <= hi".into(),
            ));
        }
        Self::new(
            bounds
                .iter()
                .map(|&(lo, hi)| {
                    let i = Interval::new(lo, hi).ln();
                    (i.lo, i.hi)
                })
                .collect(),
        )
    }

    fn from_axes(axes: Vec<Interval>) -> Self {
        Self { axes }
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Interval] {
        &self.axes
    }

    pub fn bounds(&self) -> Vec<(f64, f64)> {
        self.axes.iter().map(|i| (i.lo, i.hi)).collect()
    }

    pub fn midpoint(&self) -> Vec<f64> {
        self.axes.iter().map(Interval::mid).collect()
    }

    pub fn max_width(&self) -> f64 {
        self.axes.iter().map(Interval::width).fold(0.0, f64::max)
    }

    pub fn contains_point(&self, y: &[f64]) -> bool {
        self.axes.iter().zip(y).all(|(i, v)| i.contains(*v))
    }

    pub fn subset_of(&self, other: &LogBox) -> bool {
        self.axes
            .iter()
            .zip(&other.axes)
            .all(|(a, b)| a.subset_of(b))
    }

    pub fn intersect(&self, other: &LogBox) -> Option<LogBox> {
        self.axes
            .iter()
            .zip(&other.axes)
            .map(|(a, b)| a.intersect(b))
            .collect::<Option<Vec<_>>>()
            .map(Self::from_axes)
    }

    pub fn hull(&self, other: &LogBox) -> LogBox {
        Self::from_axes(
            self.axes
                .iter()
                .zip(&other.axes)
                .map(|(a, b)| a.hull(b))
                .collect(),
        )
    }

    /// Same centre, widths multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> LogBox {
        Self::from_axes(
            self.axes
                .iter()
                .map(|i| Interval::centered(i.mid(), 0.5 * i.width() * factor))
                .collect(),
        )
    }

    /// Halves along the widest axis.
    pub fn bisect(&self) -> (LogBox, LogBox) {
        let k = (0..self.dim())
            .max_by(|&a, &b| self.axes[a].width().total_cmp(&self.axes[b].width()))
            .expect("nonempty box");
        let (l, r) = self.axes[k].bisect();
        let mut left = self.axes.clone();
        let mut right = self.axes.clone();
        left[k] = l;
        right[k] = r;
        (Self::from_axes(left), Self::from_axes(right))
    }
}

/// Outcome of [`krawczyk_test`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    /// Exactly one zero in the box, with invertible Jacobian.
    Unique,
    /// No zero in the box.
    Empty,
    Unknown,
}

fn excludes_zero(i: &Interval) -> bool {
    i.lo > 0.0 || i.hi < 0.0
}

/// Interval evaluation of a system in log coordinates.
struct Evaluator {
    n: usize,
    t: usize,
    /// `t x n`.
    exps: Vec<f64>,
    /// `n x t`, coefficient of monomial `a` in equation `i`.
    coeffs: Vec<f64>,
}

/// Per-box data shared by the tests.
struct Enclosures {
    /// `F(Y)` scaled by `exp(-shift)`.
    values: Vec<Interval>,
    /// `exp(a . Y - shift)`.
    terms: Vec<Interval>,
    shift: f64,
}

impl Evaluator {
    fn new(system: &FewnomialSystem) -> Self {
        let n = system.n();
        Self {
            n,
            t: system.t(),
            exps: system.support().exponent_matrix(),
            coeffs: (0..n).flat_map(|i| system.weighted_row(i)).collect(),
        }
    }

    fn exponent(&self, a: usize) -> &[f64] {
        &self.exps[a * self.n..(a + 1) * self.n]
    }

    fn row(&self, i: usize) -> &[f64] {
        &self.coeffs[i * self.t..(i + 1) * self.t]
    }

    fn shift_at(&self, y: &[f64]) -> f64 {
        (0..self.t)
            .map(|a| {
                self.exponent(a)
                    .iter()
                    .zip(y)
                    .map(|(e, v)| e * v)
                    .sum::<f64>()
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }

    fn terms(&self, y: &[Interval], shift: f64) -> Vec<Interval> {
        (0..self.t)
            .map(|a| (dot(self.exponent(a), y) + (-shift)).exp())
            .collect()
    }

    fn enclose(&self, y: &[Interval], shift: f64) -> Enclosures {
        let terms = self.terms(y, shift);
        let values = (0..self.n).map(|i| dot(self.row(i), &terms)).collect();
        Enclosures {
            values,
            terms,
            shift,
        }
    }

    /// Interval Jacobian from monomial enclosures, row-major `n x n`.
    fn jacobian(&self, terms: &[Interval]) -> Vec<Interval> {
        let n = self.n;
        let mut jac = vec![Interval::ZERO; n * n];
        for i in 0..n {
            let row = self.row(i);
            for (a, term) in terms.iter().enumerate() {
                let weighted = term.scale(row[a]);
                for k in 0..n {
                    let e = self.exponent(a)[k];
                    if e != 0.0 {
                        jac[i * n + k] = jac[i * n + k] + weighted.scale(e);
                    }
                }
            }
        }
        jac
    }

    fn point_jacobian(&self, y: &[f64], shift: f64) -> Vec<f64> {
        let yi: Vec<Interval> = y.iter().map(|&v| Interval::point(v)).collect();
        self.jacobian(&self.terms(&yi, shift))
            .iter()
            .map(Interval::mid)
            .collect()
    }

    /// `L F` with `L = W_S^{-1}` for the `n` monomials largest at the box
    /// centre, which cancels the dominant terms exactly.
    fn tropical_excludes(&self, enc: &Enclosures, centre: &[f64]) -> bool {
        let n = self.n;
        let mut order: Vec<(usize, f64)> = (0..self.t)
            .map(|a| {
                let log_mag = self
                    .exponent(a)
                    .iter()
                    .zip(centre)
                    .map(|(e, v)| e * v)
                    .sum::<f64>()
                    + (0..n)
                        .map(|i| self.row(i)[a].abs())
                        .fold(0.0, f64::max)
                        .ln();
                (a, log_mag)
            })
            .collect();
        order.sort_by(|x, y| y.1.total_cmp(&x.1).then(x.0.cmp(&y.0)));
        let chosen: Vec<usize> = order.iter().take(n).map(|p| p.0).collect();
        let w_s: Vec<f64> = (0..n)
            .flat_map(|i| chosen.iter().map(move |&a| (i, a)))
            .map(|(i, a)| self.row(i)[a])
            .collect();
        let Some(l) = invert(&w_s, n) else {
            return false;
        };
        (0..n).any(|k| {
            let g = (0..self.t).fold(Interval::ZERO, |acc, a| {
                let coeff = (0..n).fold(Interval::ZERO, |c, i| {
                    c + Interval::point(l[k * n + i]).scale(self.row(i)[a])
                });
                acc + coeff * enc.terms[a]
            });
            excludes_zero(&g)
        })
    }

    /// Krawczyk image `K(Y)` and the mean-value exclusion flag.
    fn krawczyk(&self, cell: &LogBox, enc: &Enclosures) -> Option<(Vec<Interval>, bool)> {
        let n = self.n;
        let m = cell.midpoint();
        let c = invert(&self.point_jacobian(&m, enc.shift), n)?;
        if c.iter().any(|v| !v.is_finite()) {
            return None;
        }
        let mi: Vec<Interval> = m.iter().map(|&v| Interval::point(v)).collect();
        let at_m = self.enclose(&mi, enc.shift).values;
        let jac = self.jacobian(&enc.terms);
        let dy: Vec<Interval> = cell
            .axes()
            .iter()
            .zip(&m)
            .map(|(y, &v)| *y - Interval::point(v))
            .collect();
        let mut image = Vec::with_capacity(n);
        let mut mean_value_excludes = false;
        for k in 0..n {
            let cf = (0..n).fold(Interval::ZERO, |acc, i| acc + at_m[i].scale(c[k * n + i]));
            let mut slope_term = Interval::ZERO;
            let mut contraction = Interval::ZERO;
            for l in 0..n {
                let cj = (0..n).fold(Interval::ZERO, |acc, i| {
                    acc + jac[i * n + l].scale(c[k * n + i])
                });
                slope_term = slope_term + cj * dy[l];
                let delta = Interval::point(if k == l { 1.0 } else { 0.0 });
                contraction = contraction + (delta - cj) * dy[l];
            }
            if excludes_zero(&(cf + slope_term)) {
                mean_value_excludes = true;
            }
            image.push(Interval::point(m[k]) - cf + contraction);
        }
        Some((image, mean_value_excludes))
    }

    fn test(&self, cell: &LogBox) -> Certificate {
        let centre = cell.midpoint();
        let enc = self.enclose(cell.axes(), self.shift_at(&centre));
        if enc.values.iter().any(excludes_zero) || self.tropical_excludes(&enc, &centre) {
            return Certificate::Empty;
        }
        let Some((image, mean_value_excludes)) = self.krawczyk(cell, &enc) else {
            return Certificate::Unknown;
        };
        if mean_value_excludes
            || image
                .iter()
                .zip(cell.axes())
                .any(|(k, y)| k.hi < y.lo || k.lo > y.hi)
        {
            return Certificate::Empty;
        }
        if image
            .iter()
            .zip(cell.axes())
            .all(|(k, y)| y.lo < k.lo && k.hi < y.hi)
        {
            Certificate::Unique
        } else {
            Certificate::Unknown
        }
    }

    /// `X <- K(X) ∩ X`, starting from a box already certified unique.
    fn refine(&self, start: &LogBox, iterations: usize) -> LogBox {
        let mut x = start.clone();
        for _ in 0..iterations {
            let enc = self.enclose(x.axes(), self.shift_at(&x.midpoint()));
            let Some((image, _)) = self.krawczyk(&x, &enc) else {
                break;
            };
            let Some(next) = LogBox::from_axes(image).intersect(&x) else {
                break;
            };
            if next == x {
                break;
            }
            x = next;
        }
        x
    }
}

/// Rigorous enclosures of each `f_i` over `exp(box)`.
pub fn interval_evaluate(system: &FewnomialSystem, cell: &LogBox) -> Result<Vec<Interval>> {
    check_dims(system, cell)?;
    Ok(Evaluator::new(system).enclose(cell.axes(), 0.0).values)
}

/// Classifies a box. `Empty` is returned whenever one of the exclusion
/// tests (direct, preconditioned, mean-value or Krawczyk) proves there is no
/// zero.
pub fn krawczyk_test(system: &FewnomialSystem, cell: &LogBox) -> Result<Certificate> {
    check_dims(system, cell)?;
    Ok(Evaluator::new(system).test(cell))
}

fn check_dims(system: &FewnomialSystem, cell: &LogBox) -> Result<()> {
    if system.n() != cell.dim() {
        return Err(Error::InvalidArgument(format!(
            "system has {} variables but the box has {}",
            system.n(),
            cell.dim()
        )));
    }
    if system.n() > MAX_VARIABLES {
        return Err(Error::Unsupported(format!(
            "subdivision supports n <= {MAX_VARIABLES}, got {}",
            system.n()
        )));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CountConfig {
    /// Half-width of the default box `[-radius, radius]^n`.
    pub radius: f64,
    /// Maximum number of bisections of a cell.
    pub depth_limit: usize,
    pub max_cells: usize,
    /// Width factor of the cell on which uniqueness is tested.
    pub inflation: f64,
    pub refine_iterations: usize,
}

impl Default for CountConfig {
    fn default() -> Self {
        Self {
            radius: 8.0,
            depth_limit: 120,
            max_cells: 200_000,
            inflation: 1.1,
            refine_iterations: 20,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertifiedCount {
    /// Zeros certified inside the box.
    pub verified: usize,
    /// One small enclosure per verified zero.
    pub boxes: Vec<LogBox>,
    /// Cells at the depth limit or left over by the budget, plus zeros
    /// whose enclosure straddles the box boundary.
    pub unresolved: usize,
    /// Khovanskii's bound for the support.
    pub cap: f64,
    /// Verified zeros inside the box shrunk to half its width.
    pub verified_half: usize,
    pub cells: usize,
    pub budget_exhausted: bool,
}

struct Candidate {
    enclosure: LogBox,
    region: LogBox,
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// [`count_in_box_with`] using default settings and the given depth limit.
pub fn count_in_box(
    system: &FewnomialSystem,
    outer: &LogBox,
    depth_limit: usize,
) -> Result<CertifiedCount> {
    let cfg = CountConfig {
        depth_limit,
        ..Default::default()
    };
    count_in_box_with(system, outer, &cfg)
}

/// Breadth-first subdivision of `outer`.
pub fn count_in_box_with(
    system: &FewnomialSystem,
    outer: &LogBox,
    cfg: &CountConfig,
) -> Result<CertifiedCount> {
    check_dims(system, outer)?;
    let ev = Evaluator::new(system);
    let mut queue = VecDeque::from([(outer.clone(), 0usize)]);
    let mut candidates: Vec<Candidate> = Vec::new();
    let mut unresolved = 0;
    let mut cells = 0;
    let mut budget_exhausted = false;
    while let Some((cell, depth)) = queue.pop_front() {
        if cells == cfg.max_cells {
            budget_exhausted = true;
            unresolved += queue.len() + 1;
            break;
        }
        cells += 1;
        // a cell inside a uniqueness region holds at most that region's
        // zero, which is already recorded
        if candidates.iter().any(|c| cell.subset_of(&c.region)) {
            continue;
        }
        if ev.test(&cell) == Certificate::Empty {
            continue;
        }
        let region = cell.scaled(cfg.inflation);
        if ev.test(&region) == Certificate::Unique {
            let enclosure = ev.refine(&region, cfg.refine_iterations);
            if enclosure.intersect(&cell).is_some() {
                candidates.push(Candidate { enclosure, region });
            }
            continue;
        }
        if depth >= cfg.depth_limit {
            unresolved += 1;
            continue;
        }
        let (a, b) = cell.bisect();
        queue.push_back((a, depth + 1));
        queue.push_back((b, depth + 1));
    }

    // Two candidates certify the same zero when one's enclosure lies in the
    // other's uniqueness region.
    let k = candidates.len();
    let mut parent: Vec<usize> = (0..k).collect();
    for i in 0..k {
        for j in i + 1..k {
            let (a, b) = (&candidates[i], &candidates[j]);
            let same = a.enclosure.subset_of(&b.region)
                || b.enclosure.subset_of(&a.region)
                || (a.enclosure.intersect(&b.enclosure).is_some()
                    && ev.test(&a.enclosure.hull(&b.enclosure)) == Certificate::Unique);
            if same {
                let (ra, rb) = (find(&mut parent, i), find(&mut parent, j));
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
    }
    let mut classes: Vec<(usize, LogBox)> = Vec::new();
    for i in 0..k {
        let root = find(&mut parent, i);
        match classes.iter_mut().find(|c| c.0 == root) {
            Some(c) => {
                if let Some(smaller) = c.1.intersect(&candidates[i].enclosure) {
                    c.1 = smaller;
                }
            }
            None => classes.push((root, candidates[i].enclosure.clone())),
        }
    }
    let half = outer.scaled(0.5);
    let mut boxes = Vec::new();
    let mut verified_half = 0;
    for (_, e) in classes {
        if e.subset_of(outer) {
            if e.subset_of(&half) {
                verified_half += 1;
            }
            boxes.push(e);
        } else if e.intersect(outer).is_some() {
            unresolved += 1;
        }
    }
    boxes.sort_by(|a, b| a.axes()[0].lo.total_cmp(&b.axes()[0].lo));
    let cap = khovanskii(system.n() as u64, system.t() as u64);
    debug_assert!(boxes.len() as f64 <= cap);
    Ok(CertifiedCount {
        verified: boxes.len(),
        boxes,
        unresolved,
        cap,
        verified_half,
        cells,
        budget_exhausted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::{Support, VarianceSystem};

    /// Equations given as `(exponent, coefficient)` lists over a shared
    /// support with unit weights.
    fn system(n: usize, eqs: &[&[(Vec<i64>, f64)]]) -> FewnomialSystem {
        let mut exps: Vec<Vec<i64>> = eqs
            .iter()
            .flat_map(|e| e.iter().map(|t| t.0.clone()))
            .collect();
        exps.sort();
        exps.dedup();
        let support = Support::new(exps.clone()).unwrap();
        let coeffs = eqs
            .iter()
            .map(|e| {
                exps.iter()
                    .map(|x| e.iter().filter(|t| &t.0 == x).map(|t| t.1).sum())
                    .collect()
            })
            .collect();
        let sys = FewnomialSystem::new(support, VarianceSystem::unit(exps.len()), coeffs).unwrap();
        assert_eq!(sys.n(), n);
        sys
    }

    fn x_box(lo: f64, hi: f64, n: usize) -> LogBox {
        LogBox::from_x_bounds(&vec![(lo, hi); n]).unwrap()
    }

    #[test]
    fn interval_evaluation_examples() {
        let f = system(1, &[&[(vec![1], 1.0), (vec![0], -2.0)]]);
        let b = LogBox::new(vec![(3f64.ln(), 4f64.ln())]).unwrap();
        let e = interval_evaluate(&f, &b).unwrap()[0];
        assert!(e.lo <= 1.0 && e.hi >= 2.0);
        assert!(e.lo > 1.0 - 1e-12 && e.hi < 2.0 + 1e-12);

        let g = system(
            2,
            &[
                &[(vec![1, 1], 1.0), (vec![0, 0], -1.0)],
                &[(vec![1, 0], 1.0), (vec![0, 1], -1.0)],
            ],
        );
        let e = interval_evaluate(&g, &x_box(1.0, 2.0, 2)).unwrap()[0];
        assert!(e.lo <= 0.0 && e.hi >= 3.0);

        let y = [0.4, -0.3];
        let point = LogBox::new(vec![(y[0], y[0]), (y[1], y[1])]).unwrap();
        let exact = g.evaluate_log(&crate::systems::LogPoint::new(y.to_vec()).unwrap());
        for (e, v) in interval_evaluate(&g, &point).unwrap().iter().zip(exact) {
            assert!(e.contains(v));
            assert!(e.width() <= 64.0 * f64::EPSILON * 3.0);
        }
    }

    #[test]
    fn krawczyk_examples() {
        let f = system(
            2,
            &[
                &[(vec![1, 0], 1.0), (vec![0, 0], -2.0)],
                &[(vec![0, 1], 1.0), (vec![0, 0], -3.0)],
            ],
        );
        let around = LogBox::new(vec![
            (2f64.ln() - 0.1, 2f64.ln() + 0.1),
            (3f64.ln() - 0.1, 3f64.ln() + 0.1),
        ])
        .unwrap();
        assert_eq!(krawczyk_test(&f, &around).unwrap(), Certificate::Unique);
        assert_eq!(
            krawczyk_test(&f, &x_box(5.0, 6.0, 2)).unwrap(),
            Certificate::Empty
        );

        let singular = system(
            2,
            &[
                &[(vec![1, 0], 1.0), (vec![0, 1], -1.0)],
                &[(vec![1, 0], 1.0), (vec![0, 1], -1.0)],
            ],
        );
        let diag = x_box(0.5, 2.0, 2);
        assert_eq!(
            krawczyk_test(&singular, &diag).unwrap(),
            Certificate::Unknown
        );
        let c = count_in_box(&singular, &diag, 12).unwrap();
        assert_eq!(c.verified, 0);
        assert!(c.unresolved > 0);
    }

    #[test]
    fn counting_examples() {
        let outer = x_box(0.1, 10.0, 2);
        let vieta = system(
            2,
            &[
                &[(vec![1, 0], 1.0), (vec![0, 1], 1.0), (vec![0, 0], -3.0)],
                &[(vec![1, 1], 1.0), (vec![0, 0], -2.0)],
            ],
        );
        let c = count_in_box(&vieta, &outer, 60).unwrap();
        assert_eq!((c.verified, c.unresolved), (2, 0), "{c:?}");
        for (b, z) in c.boxes.iter().zip([[1.0, 2.0], [2.0, 1.0]]) {
            let y: Vec<f64> = z.iter().map(|v: &f64| v.ln()).collect();
            assert!(b.contains_point(&y) || b.max_width() < 1e-12, "{b:?}");
        }

        let linear = system(
            2,
            &[
                &[(vec![1, 0], 1.0), (vec![0, 0], -2.0)],
                &[(vec![0, 1], 1.0), (vec![0, 0], -3.0)],
            ],
        );
        assert_eq!(count_in_box(&linear, &outer, 60).unwrap().verified, 1);

        let hyperbola = system(
            2,
            &[
                &[(vec![1, 1], 1.0), (vec![0, 0], -1.0)],
                &[(vec![1, 0], 1.0), (vec![0, 1], -1.0)],
            ],
        );
        let c = count_in_box(&hyperbola, &outer, 60).unwrap();
        assert_eq!((c.verified, c.unresolved), (1, 0));
        assert!(c.boxes[0].contains_point(&[0.0, 0.0]));
    }

    #[test]
    fn zero_on_cell_boundary_counted_once() {
        // zero at x = (1, 1), i.e. y = 0, the first bisection plane
        let f = system(
            2,
            &[
                &[(vec![2, 0], 1.0), (vec![0, 1], -1.0)],
                &[(vec![0, 3], 1.0), (vec![1, 0], -1.0)],
            ],
        );
        let c = count_in_box(&f, &LogBox::cube(2, 8.0).unwrap(), 60).unwrap();
        assert_eq!((c.verified, c.unresolved), (1, 0), "{c:?}");
        assert_eq!(c.verified_half, 1);
    }

    #[test]
    fn three_variables() {
        // x1 = 2, x2 = x1, x3 x1 = 1
        let f = system(
            3,
            &[
                &[(vec![1, 0, 0], 1.0), (vec![0, 0, 0], -2.0)],
                &[(vec![0, 1, 0], 1.0), (vec![1, 0, 0], -1.0)],
                &[(vec![1, 0, 1], 1.0), (vec![0, 0, 0], -1.0)],
            ],
        );
        let c = count_in_box(&f, &LogBox::cube(3, 8.0).unwrap(), 60).unwrap();
        assert_eq!((c.verified, c.unresolved), (1, 0));
        let l2 = 2f64.ln();
        assert!(c.boxes[0].contains_point(&[l2, l2, -l2]));
    }

    #[test]
    fn growing_box_never_loses_zeros() {
        let f = system(
            2,
            &[
                &[(vec![1, 0], 1.0), (vec![0, 1], 1.0), (vec![0, 0], -3.0)],
                &[(vec![1, 1], 1.0), (vec![0, 0], -2.0)],
            ],
        );
        let mut last = 0;
        for r in [0.2, 0.5, 1.0, 4.0] {
            let c = count_in_box(&f, &LogBox::cube(2, r).unwrap(), 60).unwrap();
            assert!(c.verified >= last);
            last = c.verified;
        }
        assert_eq!(last, 2);
    }
}
