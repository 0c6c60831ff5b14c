//! Experiment results and their files.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::config::ExperimentConfig;

/// One estimate with its comparison columns.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Row {
    pub label: String,
    pub n: usize,
    pub t: usize,
    /// Sweep coordinate (degree or `t`), when the row belongs to a sweep.
    pub x: Option<f64>,
    pub estimate: f64,
    pub std_error: Option<f64>,
    pub error_bound: Option<f64>,
    pub trials: Option<u64>,
    pub evaluations: Option<usize>,
    /// Exact or reference value the estimate is compared with.
    pub reference: Option<f64>,
    pub density_estimate: Option<f64>,
    pub density_error: Option<f64>,
    pub main_bound: Option<f64>,
    pub univariate_bound: Option<f64>,
    pub khovanskii: Option<f64>,
    pub khovanskii_log2: Option<f64>,
    pub bihan_sottile: Option<f64>,
    pub diagnostics: Diagnostics,
}

impl Row {
    /// Monte Carlo standard error or deterministic error bound.
    pub fn error(&self) -> f64 {
        self.std_error.or(self.error_bound).unwrap_or(0.0)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Diagnostics {
    /// Trials excluded from the mean (degenerate zero sets).
    pub discarded_trials: u64,
    /// Trials whose count left unresolved cells; their verified count is
    /// used, so it is a lower bound.
    pub unresolved_trials: u64,
    /// More than 1% of trials were unresolved.
    pub lower_bound_only: bool,
    /// An integral hit its tail or evaluation budget.
    pub truncated: bool,
    pub max_zeros: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub name: String,
    /// Label of the row the verdict belongs to.
    pub row: String,
    pub passed: bool,
    pub detail: String,
}

/// Per-trial record of a counting experiment.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    pub row: String,
    pub trial: u64,
    pub zeros: usize,
    pub discarded: bool,
    pub unresolved: usize,
}

/// Everything the run determines, wall time excluded.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportBody {
    pub config: ExperimentConfig,
    pub rows: Vec<Row>,
    pub verdicts: Vec<Verdict>,
    #[serde(skip)]
    pub trials: Vec<TrialRecord>,
}

impl ReportBody {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// `"pass"`, `"fail"` or empty for a row without verdicts.
    fn row_verdict(&self, label: &str) -> &'static str {
        let mut any = false;
        for v in self.verdicts.iter().filter(|v| v.row == label) {
            if !v.passed {
                return "fail";
            }
            any = true;
        }
        if any {
            "pass"
        } else {
            ""
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub body: ReportBody,
    pub wall_time_seconds: f64,
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.12e}")).unwrap_or_default()
}

impl ExperimentReport {
    /// Writes `report.json`, `trials.jsonl`, `summary.csv` and, for sweeps,
    /// `plot.dat` into `dir`.
    pub fn write(&self, dir: &Path) -> std::io::Result<()> {
        fs::create_dir_all(dir)?;
        let json = serde_json::to_string_pretty(self).map_err(std::io::Error::other)?;
        fs::write(dir.join("report.json"), json + "\n")?;

        let mut out = BufWriter::new(File::create(dir.join("trials.jsonl"))?);
        for t in &self.body.trials {
            serde_json::to_writer(&mut out, t).map_err(std::io::Error::other)?;
            out.write_all(b"\n")?;
        }
        out.flush()?;

        let mut csv = csv::Writer::from_path(dir.join("summary.csv"))?;
        csv.write_record([
            "kind",
            "label",
            "n",
            "t",
            "x",
            "estimate",
            "std_error",
            "error_bound",
            "reference",
            "density_estimate",
            "main_bound",
            "univariate_bound",
            "khovanskii",
            "verdict",
        ])?;
        let kind = self.body.config.kind.name();
        for r in &self.body.rows {
            csv.write_record([
                kind.to_string(),
                r.label.clone(),
                r.n.to_string(),
                r.t.to_string(),
                opt(r.x),
                format!("{:.12e}", r.estimate),
                opt(r.std_error),
                opt(r.error_bound),
                opt(r.reference),
                opt(r.density_estimate),
                opt(r.main_bound),
                opt(r.univariate_bound),
                opt(r.khovanskii),
                self.body.row_verdict(&r.label).to_string(),
            ])?;
        }
        csv.flush()?;

        if self.body.rows.iter().any(|r| r.x.is_some()) {
            let mut plot = BufWriter::new(File::create(dir.join("plot.dat"))?);
            let mut last_n = None;
            for r in &self.body.rows {
                let Some(x) = r.x else { continue };
                // blank line between blocks of different n
                if last_n.is_some_and(|n| n != r.n) {
                    writeln!(plot)?;
                }
                last_n = Some(r.n);
                writeln!(plot, "{x} {:.12e}", r.estimate)?;
            }
            plot.flush()?;
        }
        Ok(())
    }
}
