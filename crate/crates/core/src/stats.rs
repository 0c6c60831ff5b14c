//! Running mean and standard error.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MeanEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
}

impl MeanEstimate {
    /// Mean and `sample_std / sqrt(samples)` of the values, accumulated in
    /// input order.
    pub fn from_values<I: IntoIterator<Item = f64>>(values: I) -> Self {
        let mut acc = Welford::default();
        for v in values {
            acc.push(v);
        }
        acc.finish()
    }

    /// Lower end of a one-sided `k`-standard-error band.
    pub fn lower(&self, k: f64) -> f64 {
        self.mean - k * self.std_error
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Welford {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Welford {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn finish(&self) -> MeanEstimate {
        let n = self.count;
        let std_error = if n > 1 {
            (self.m2 / (n - 1) as f64 / n as f64).sqrt()
        } else {
            0.0
        };
        MeanEstimate {
            mean: if n > 0 { self.mean } else { 0.0 },
            std_error,
            samples: n,
        }
    }
}
