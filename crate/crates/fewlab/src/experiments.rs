//! Experiment runners.

use std::f64::consts::PI;
use std::time::Instant;

use fewlab_core::bounds::BoundReport;
use fewlab_core::density::{
    combinations, expected_zeros, expected_zeros_in_box, subset_integral, IntegralEstimate,
    IntegrationConfig, VeroneseMap,
};
use fewlab_core::multivariate::{count_in_box_with, CountConfig, LogBox};
use fewlab_core::special_systems::{
    cone_probability, random_special_expected_count, solve_special, SpecialSystem, SqrtTermFunction,
};
use fewlab_core::stats::{MeanEstimate, Welford};
use fewlab_core::systems::{sample_trial, Support, VarianceSystem};
use fewlab_core::univariate::{count_positive_roots, SparsePoly};
use log::{debug, info};
use rayon::prelude::*;

use crate::config::{ConfigError, ExperimentConfig, ExperimentKind};
use crate::report::{Diagnostics, ExperimentReport, ReportBody, Row, TrialRecord, Verdict};

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Core(#[from] fewlab_core::Error),
    #[error("cannot start worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

/// Monte Carlo estimate of the expected number of positive zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroEstimate {
    pub estimate: MeanEstimate,
    pub diagnostics: Diagnostics,
    pub records: Vec<TrialRecord>,
}

fn count_trial(
    support: &Support,
    sigma: &VarianceSystem,
    seed: u64,
    trial: u64,
    cfg: &CountConfig,
) -> fewlab_core::Result<(usize, bool, usize)> {
    let system = sample_trial(support, sigma, seed, trial)?;
    if support.n() == 1 {
        let roots = count_positive_roots(&SparsePoly::from_system(&system)?);
        Ok((roots.count, roots.degenerate, 0))
    } else {
        let outer = LogBox::cube(support.n(), cfg.radius)?;
        let c = count_in_box_with(&system, &outer, cfg)?;
        Ok((c.verified, false, c.unresolved))
    }
}

/// Mean number of positive zeros over `trials` sampled systems. `n = 1`
/// counts all positive roots; larger `n` counts zeros in
/// `exp([-radius, radius]^n)`. Trials run on the current rayon pool and are
/// reduced in trial order, so the result does not depend on the pool size.
pub fn estimate_expected_zeros(
    support: &Support,
    sigma: &VarianceSystem,
    trials: u64,
    seed: u64,
    cfg: &CountConfig,
    label: &str,
) -> Result<ZeroEstimate, RunError> {
    let outcomes: Vec<_> = (0..trials)
        .into_par_iter()
        .map(|trial| count_trial(support, sigma, seed, trial, cfg))
        .collect();
    let mut acc = Welford::default();
    let mut diagnostics = Diagnostics::default();
    let mut records = Vec::with_capacity(trials as usize);
    for (trial, outcome) in (0..trials).zip(outcomes) {
        let (zeros, discarded, unresolved) = outcome?;
        if discarded {
            diagnostics.discarded_trials += 1;
            debug!("{label}: trial {trial} has a degenerate root, discarded");
        } else {
            acc.push(zeros as f64);
        }
        if unresolved > 0 {
            diagnostics.unresolved_trials += 1;
            debug!("{label}: trial {trial} left {unresolved} unresolved cells");
        }
        diagnostics.max_zeros = Some(diagnostics.max_zeros.unwrap_or(0).max(zeros));
        records.push(TrialRecord {
            row: label.to_string(),
            trial,
            zeros,
            discarded,
            unresolved,
        });
    }
    diagnostics.lower_bound_only = diagnostics.unresolved_trials * 100 > trials;
    if diagnostics.lower_bound_only {
        info!("{label}: count is a certified lower bound");
    }
    Ok(ZeroEstimate {
        estimate: acc.finish(),
        diagnostics,
        records,
    })
}

/// The density integral matching what [`estimate_expected_zeros`] counts.
pub fn matching_density(
    support: &Support,
    sigma: &VarianceSystem,
    radius: f64,
    cfg: &IntegrationConfig,
) -> Result<IntegralEstimate, RunError> {
    let map = VeroneseMap::new(support.clone(), sigma.clone())?;
    Ok(if support.n() == 1 {
        expected_zeros(&map, cfg)?
    } else {
        expected_zeros_in_box(&map, &vec![(-radius, radius); support.n()], cfg)?
    })
}

/// `|a - b| <= 3 sqrt(ea^2 + eb^2)`.
pub fn agree(a: f64, ea: f64, b: f64, eb: f64) -> bool {
    (a - b).abs() <= 3.0 * ea.hypot(eb)
}

fn upper_verdict(name: &str, row: &Row, bound: f64) -> Verdict {
    let lower = row.estimate - 3.0 * row.error();
    Verdict {
        name: name.into(),
        row: row.label.clone(),
        passed: lower <= bound,
        detail: format!("{lower:.6} <= {bound:.6}"),
    }
}

fn agreement_verdict(name: &str, row: &Row, other: f64, other_err: f64) -> Verdict {
    let passed = agree(row.estimate, row.error(), other, other_err);
    Verdict {
        name: name.into(),
        row: row.label.clone(),
        passed,
        detail: format!(
            "|{:.6} - {other:.6}| vs 3 x {:.3e}",
            row.estimate,
            row.error().hypot(other_err)
        ),
    }
}

fn bound_columns(row: &mut Row, n: usize, t: usize) {
    let b = BoundReport::new(n as u64, t as u64);
    row.main_bound = Some(b.main);
    row.univariate_bound = b.univariate_expected;
    row.khovanskii = b.khovanskii;
    row.khovanskii_log2 = Some(b.khovanskii_log2);
    row.bihan_sottile = b.bihan_sottile;
}

fn set_density(row: &mut Row, d: &IntegralEstimate) {
    row.density_estimate = Some(d.estimate);
    row.density_error = Some(d.error());
    row.diagnostics.truncated |= d.truncated;
}

struct Builder {
    rows: Vec<Row>,
    verdicts: Vec<Verdict>,
    trials: Vec<TrialRecord>,
}

/// Runs one experiment on a pool of `jobs` workers (0 = rayon default).
pub fn run(cfg: &ExperimentConfig, jobs: usize) -> Result<ExperimentReport, RunError> {
    cfg.validate()?;
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;
    let mut b = Builder {
        rows: Vec::new(),
        verdicts: Vec::new(),
        trials: Vec::new(),
    };
    pool.install(|| dispatch(cfg, &mut b))?;
    let body = ReportBody {
        config: cfg.clone(),
        rows: b.rows,
        verdicts: b.verdicts,
        trials: b.trials,
    };
    Ok(ExperimentReport {
        body,
        wall_time_seconds: start.elapsed().as_secs_f64(),
    })
}

fn supports_with_sigma(cfg: &ExperimentConfig) -> Result<Vec<(Support, VarianceSystem)>, RunError> {
    let spec = cfg.support.as_ref().expect("validated");
    let mut out = Vec::new();
    for s in spec.supports()? {
        let sigma = cfg.sigma.for_support(&s)?;
        out.push((s, sigma));
    }
    Ok(out)
}

fn dispatch(cfg: &ExperimentConfig, b: &mut Builder) -> Result<(), RunError> {
    match cfg.kind {
        ExperimentKind::McExpectedZeros => {
            for (i, (support, sigma)) in supports_with_sigma(cfg)?.into_iter().enumerate() {
                mc_row(cfg, b, &format!("support{i}"), &support, &sigma)?;
            }
        }
        ExperimentKind::DensityIntegral => {
            for (i, (support, sigma)) in supports_with_sigma(cfg)?.into_iter().enumerate() {
                let map = VeroneseMap::new(support.clone(), sigma)?;
                let d = expected_zeros(&map, &cfg.integration)?;
                let mut row = Row {
                    label: format!("support{i}"),
                    n: support.n(),
                    t: support.t(),
                    ..Row::default()
                };
                integral_columns(&mut row, &d);
                bound_columns(&mut row, support.n(), support.t());
                b.verdicts
                    .push(upper_verdict("main_bound", &row, row.main_bound.unwrap()));
                b.rows.push(row);
            }
        }
        ExperimentKind::SubsetIntegralCheck => {
            for (i, (support, sigma)) in supports_with_sigma(cfg)?.into_iter().enumerate() {
                let n = support.n();
                let map = VeroneseMap::new(support.clone(), sigma)?;
                let cap = 0.5f64.powi(n as i32);
                for subset in combinations(support.t(), n) {
                    let d = subset_integral(&map, &subset, &cfg.integration)?;
                    let mut row = Row {
                        label: format!("support{i}:{subset:?}"),
                        n,
                        t: support.t(),
                        reference: Some(cap),
                        ..Row::default()
                    };
                    integral_columns(&mut row, &d);
                    let passed = d.estimate <= cap + d.error();
                    b.verdicts.push(Verdict {
                        name: "subset_bound".into(),
                        row: row.label.clone(),
                        passed,
                        detail: format!("{:.6} <= {cap} + {:.3e}", d.estimate, d.error()),
                    });
                    b.rows.push(row);
                }
            }
        }
        ExperimentKind::BoundSweep => {
            for &n in &cfg.ns {
                for t in n..=n + cfg.t_extra {
                    let r = BoundReport::new(n, t);
                    let mut row = Row {
                        label: format!("n{n}:t{t}"),
                        n: n as usize,
                        t: t as usize,
                        x: Some(t as f64),
                        estimate: r.main,
                        ..Row::default()
                    };
                    bound_columns(&mut row, n as usize, t as usize);
                    let finite = [Some(r.main), r.khovanskii, Some(r.khovanskii_log2)]
                        .into_iter()
                        .chain([r.bihan_sottile, r.univariate_expected])
                        .flatten()
                        .all(f64::is_finite);
                    b.verdicts.push(Verdict {
                        name: "finite".into(),
                        row: row.label.clone(),
                        passed: finite,
                        detail: String::new(),
                    });
                    b.rows.push(row);
                }
            }
        }
        ExperimentKind::ConeCheck => {
            let n = cfg.n.expect("validated");
            let est = cone_probability(n, cfg.trials, cfg.seed);
            let target = 0.5f64.powi(n as i32);
            let row = Row {
                label: format!("n{n}"),
                n,
                estimate: est.mean,
                std_error: Some(est.std_error),
                trials: Some(est.samples),
                reference: Some(target),
                ..Row::default()
            };
            b.verdicts
                .push(agreement_verdict("cone_probability", &row, target, 0.0));
            b.rows.push(row);
        }
        ExperimentKind::SpecialCheck => special_check(cfg, b)?,
        ExperimentKind::KacSweep | ExperimentKind::KostlanSweep => degree_sweep(cfg, b)?,
    }
    Ok(())
}

fn integral_columns(row: &mut Row, d: &IntegralEstimate) {
    row.estimate = d.estimate;
    row.error_bound = d.abs_error_bound;
    row.std_error = d.std_error;
    row.evaluations = Some(d.evaluations);
    row.diagnostics.truncated = d.truncated;
}

fn mc_row(
    cfg: &ExperimentConfig,
    b: &mut Builder,
    label: &str,
    support: &Support,
    sigma: &VarianceSystem,
) -> Result<Row, RunError> {
    let (n, t) = (support.n(), support.t());
    let count_cfg = cfg.count_config();
    let z = estimate_expected_zeros(support, sigma, cfg.trials, cfg.seed, &count_cfg, label)?;
    let mut row = Row {
        label: label.into(),
        n,
        t,
        estimate: z.estimate.mean,
        std_error: Some(z.estimate.std_error),
        trials: Some(z.estimate.samples),
        diagnostics: z.diagnostics,
        ..Row::default()
    };
    bound_columns(&mut row, n, t);
    b.verdicts
        .push(upper_verdict("main_bound", &row, row.main_bound.unwrap()));
    if let Some(k) = row.khovanskii {
        b.verdicts.push(upper_verdict("khovanskii", &row, k));
    }
    if n == 1 && sigma.is_unit() {
        let u = row.univariate_bound.unwrap();
        b.verdicts.push(upper_verdict("univariate_bound", &row, u));
    }
    if cfg.cross_check {
        let d = matching_density(support, sigma, count_cfg.radius, &cfg.integration)?;
        set_density(&mut row, &d);
        b.verdicts.push(agreement_verdict(
            "density_agreement",
            &row,
            d.estimate,
            d.error(),
        ));
    }
    b.trials.extend(z.records);
    b.rows.push(row.clone());
    Ok(row)
}

fn special_check(cfg: &ExperimentConfig, b: &mut Builder) -> Result<(), RunError> {
    let n = cfg.n.expect("validated");
    // f = (1 + x^(2(1,...,1)) / 5)^(1/2) and alphas the standard basis
    let f = SqrtTermFunction::new(
        vec![1.0, 5f64.sqrt().recip()],
        vec![vec![0.0; n], vec![1.0; n]],
    )?;
    let basis: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| f64::from(u8::from(i == j))).collect())
        .collect();
    if n == 2 {
        let system = SpecialSystem::new(vec![1.0, 0.0, 0.0, 1.0], basis.clone(), f.clone())?;
        let sol = solve_special(&system, 1e-12)?;
        let row = Row {
            label: "two_zero_instance".into(),
            n,
            t: n + 1,
            estimate: sol.zeros.len() as f64,
            reference: Some(2.0),
            ..Row::default()
        };
        b.verdicts.push(Verdict {
            name: "two_zeros".into(),
            row: row.label.clone(),
            passed: sol.zeros.len() == 2,
            detail: format!("{:?}", sol.zeros),
        });
        b.rows.push(row);
    }
    let est = random_special_expected_count(&basis, &vec![1.0; n], &f, cfg.trials, cfg.seed)?;
    let row = Row {
        label: format!("random_n{n}"),
        n,
        t: n + 1,
        estimate: est.estimate.mean,
        std_error: Some(est.estimate.std_error),
        trials: Some(est.estimate.samples),
        diagnostics: Diagnostics {
            discarded_trials: est.discarded,
            max_zeros: Some(est.max_zeros),
            ..Diagnostics::default()
        },
        ..Row::default()
    };
    b.verdicts.push(Verdict {
        name: "at_most_two".into(),
        row: row.label.clone(),
        passed: est.max_zeros <= 2,
        detail: format!("max {} zeros, {} degenerate", est.max_zeros, est.degenerate),
    });
    b.rows.push(row);
    Ok(())
}

fn degree_sweep(cfg: &ExperimentConfig, b: &mut Builder) -> Result<(), RunError> {
    let kac = cfg.kind == ExperimentKind::KacSweep;
    let mut previous: Option<Row> = None;
    for &d in &cfg.degrees {
        let support = Support::dense_univariate(d);
        let sigma = if kac {
            VarianceSystem::unit(support.t())
        } else {
            VarianceSystem::kostlan(&support)?
        };
        let label = format!("d{d}");
        let mut row = mc_row(cfg, b, &label, &support, &sigma)?;
        b.rows.pop();
        // the univariate and main bound verdicts are implied, not the point
        b.verdicts.retain(|v| v.row != label);
        row.x = Some(f64::from(d));
        let dens = matching_density(&support, &sigma, cfg.radius, &cfg.integration)?;
        set_density(&mut row, &dens);
        b.verdicts.push(agreement_verdict(
            "density_agreement",
            &row,
            dens.estimate,
            dens.error(),
        ));
        if kac {
            row.reference = Some(f64::from(d).ln() / PI);
            if let Some(prev) = &previous {
                let target = (f64::from(d) / prev.x.unwrap()).ln() / PI;
                let mc = row.estimate - prev.estimate;
                let quad = dens.estimate - prev.density_estimate.unwrap();
                b.verdicts.push(Verdict {
                    name: "log_growth".into(),
                    row: label.clone(),
                    passed: (mc - target).abs() <= 0.25 * target
                        && (quad - target).abs() <= 0.25 * target,
                    detail: format!("mc {mc:.4}, quadrature {quad:.4}, target {target:.4}"),
                });
            }
        } else {
            let target = 0.5 * f64::from(d).sqrt();
            row.reference = Some(target);
            b.verdicts
                .push(agreement_verdict("half_root_d", &row, target, 0.0));
            b.verdicts.push(Verdict {
                name: "quadrature_half_root_d".into(),
                row: label.clone(),
                passed: (dens.estimate - target).abs() <= 1e-4,
                detail: format!("{:.8} vs {target}", dens.estimate),
            });
        }
        previous = Some(row.clone());
        b.rows.push(row);
    }
    Ok(())
}

/// Twelve fixed supports with `n <= 3` and `t <= 8` used as a regression
/// suite for the Monte Carlo and density estimates.
pub fn regression_supports() -> Vec<Support> {
    let one = |e: &[i64]| Support::univariate(e).expect("valid support");
    let many =
        |e: &[&[i64]]| Support::new(e.iter().map(|v| v.to_vec()).collect()).expect("valid support");
    vec![
        one(&[0, 1, 2]),
        one(&[0, 3, 7, 12]),
        one(&[0, 1, 5, 9, 20]),
        one(&[0, 2, 3, 8, 11, 15, 17, 20]),
        many(&[&[0, 0], &[1, 0], &[0, 1]]),
        many(&[&[0, 0], &[2, 1], &[1, 3], &[3, 3]]),
        many(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1], &[2, 3]]),
        many(&[&[0, 0], &[4, 1], &[1, 4], &[3, 3], &[6, 2], &[2, 6]]),
        many(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]),
        many(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1]]),
        many(&[
            &[0, 0, 0],
            &[2, 0, 1],
            &[0, 3, 1],
            &[1, 1, 3],
            &[2, 2, 0],
            &[1, 2, 2],
        ]),
        many(&[
            &[0, 0, 0],
            &[1, 0, 0],
            &[0, 1, 0],
            &[0, 0, 1],
            &[2, 1, 1],
            &[1, 2, 1],
            &[1, 1, 2],
            &[3, 3, 3],
        ]),
    ]
}
