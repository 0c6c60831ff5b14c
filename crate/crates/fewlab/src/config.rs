//! Experiment configuration files (TOML).

use std::path::{Path, PathBuf};

use fewlab_core::density::IntegrationConfig;
use fewlab_core::multivariate::{CountConfig, MAX_VARIABLES};
use fewlab_core::rng::derive_seed;
use fewlab_core::systems::{Support, VarianceSystem};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        source: Box<toml::de::Error>,
    },
    #[error("field `{field}`: {message}")]
    Invalid { field: String, message: String },
}

fn invalid(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        field: field.into(),
        message: message.into(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    McExpectedZeros,
    DensityIntegral,
    BoundSweep,
    ConeCheck,
    SpecialCheck,
    SubsetIntegralCheck,
    KacSweep,
    KostlanSweep,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::McExpectedZeros => "mc_expected_zeros",
            Self::DensityIntegral => "density_integral",
            Self::BoundSweep => "bound_sweep",
            Self::ConeCheck => "cone_check",
            Self::SpecialCheck => "special_check",
            Self::SubsetIntegralCheck => "subset_integral_check",
            Self::KacSweep => "kac_sweep",
            Self::KostlanSweep => "kostlan_sweep",
        }
    }

    fn needs_support(self) -> bool {
        matches!(
            self,
            Self::McExpectedZeros | Self::DensityIntegral | Self::SubsetIntegralCheck
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomSupportSpec {
    pub n: usize,
    /// Number of monomials; alternatively `t_range`.
    #[serde(default)]
    pub t: Option<usize>,
    /// Inclusive range sampled uniformly per support.
    #[serde(default)]
    pub t_range: Option<[usize; 2]>,
    #[serde(default = "default_max_exponent")]
    pub max_exponent: i64,
    #[serde(default)]
    pub seed: u64,
    /// Number of supports to draw.
    #[serde(default = "one")]
    pub count: usize,
}

fn default_max_exponent() -> i64 {
    20
}

fn one() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SupportSpec {
    Exponents(Vec<Vec<i64>>),
    Random(RandomSupportSpec),
}

impl SupportSpec {
    pub fn n(&self) -> Option<usize> {
        match self {
            Self::Exponents(e) => e.first().map(Vec::len),
            Self::Random(r) => Some(r.n),
        }
    }

    /// The supports this spec describes, in order.
    pub fn supports(&self) -> Result<Vec<Support>, ConfigError> {
        match self {
            Self::Exponents(e) => Ok(vec![Support::new(e.clone())
                .map_err(|err| invalid("support.exponents", err.to_string()))?]),
            Self::Random(r) => (0..r.count)
                .map(|i| {
                    let seed = derive_seed(r.seed, i as u64);
                    let t = match (r.t, r.t_range) {
                        (Some(t), None) => t,
                        (None, Some([lo, hi])) => {
                            let span = (hi - lo + 1) as u64;
                            lo + (derive_seed(seed, 0x7470) % span) as usize
                        }
                        _ => unreachable!("checked by validate"),
                    };
                    Support::random(r.n, t, r.max_exponent, seed)
                        .map_err(|err| invalid("support.random", err.to_string()))
                })
                .collect(),
        }
    }

    fn validate(&self) -> Result<(), ConfigError> {
        match self {
            Self::Exponents(e) => {
                Support::new(e.clone())
                    .map_err(|err| invalid("support.exponents", err.to_string()))?;
            }
            Self::Random(r) => {
                if r.n == 0 {
                    return Err(invalid("support.random.n", "must be at least 1"));
                }
                match (r.t, r.t_range) {
                    (Some(t), None) if t >= 1 => {}
                    (None, Some([lo, hi])) if 1 <= lo && lo <= hi => {}
                    (Some(_), Some(_)) => {
                        return Err(invalid(
                            "support.random",
                            "give either `t` or `t_range`, not both",
                        ))
                    }
                    _ => {
                        return Err(invalid(
                            "support.random.t",
                            "need `t >= 1` or `t_range = [lo, hi]` with 1 <= lo <= hi",
                        ))
                    }
                }
                if r.max_exponent < 0 {
                    return Err(invalid(
                        "support.random.max_exponent",
                        "must be nonnegative",
                    ));
                }
                if r.count == 0 {
                    return Err(invalid("support.random.count", "must be at least 1"));
                }
                let t_max = r.t.unwrap_or_else(|| r.t_range.map_or(0, |[_, hi]| hi));
                let room = ((r.max_exponent + 1) as f64).powi(r.n as i32);
                if t_max as f64 > room {
                    return Err(invalid(
                        "support.random.max_exponent",
                        format!(
                            "[0, {}]^{} holds fewer than {t_max} exponents",
                            r.max_exponent, r.n
                        ),
                    ));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SigmaSpec {
    #[default]
    Unit,
    /// Multinomial weights of the largest total degree in the support.
    Kostlan,
    Weights(Vec<f64>),
}

impl SigmaSpec {
    pub fn for_support(&self, support: &Support) -> Result<VarianceSystem, ConfigError> {
        match self {
            Self::Unit => Ok(VarianceSystem::unit(support.t())),
            Self::Kostlan => {
                VarianceSystem::kostlan(support).map_err(|e| invalid("sigma", e.to_string()))
            }
            Self::Weights(w) => {
                if w.len() != support.t() {
                    return Err(invalid(
                        "sigma.weights",
                        format!("{} weights for a support with t = {}", w.len(), support.t()),
                    ));
                }
                VarianceSystem::new(w.clone()).map_err(|e| invalid("sigma.weights", e.to_string()))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    #[serde(default)]
    pub support: Option<SupportSpec>,
    #[serde(default)]
    pub sigma: SigmaSpec,
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[serde(default)]
    pub seed: u64,
    /// Half-width of the log box searched by the multivariate counter.
    #[serde(default = "default_radius")]
    pub radius: f64,
    /// Number of variables for `cone_check` and `special_check`.
    #[serde(default)]
    pub n: Option<usize>,
    /// Degrees for `kac_sweep` and `kostlan_sweep`.
    #[serde(default)]
    pub degrees: Vec<u32>,
    /// Variable counts for `bound_sweep`.
    #[serde(default)]
    pub ns: Vec<u64>,
    /// `bound_sweep` covers `t = n ..= n + t_extra`.
    #[serde(default = "default_t_extra")]
    pub t_extra: u64,
    /// Also integrate the density and check agreement with the Monte Carlo
    /// estimate (`mc_expected_zeros`).
    #[serde(default)]
    pub cross_check: bool,
    #[serde(default)]
    pub integration: IntegrationConfig,
    #[serde(default)]
    pub counting: Option<CountConfig>,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

fn default_trials() -> u64 {
    1_000
}

fn default_radius() -> f64 {
    8.0
}

fn default_t_extra() -> u64 {
    4
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind) -> Self {
        Self {
            kind,
            support: None,
            sigma: SigmaSpec::Unit,
            trials: default_trials(),
            seed: 0,
            radius: default_radius(),
            n: None,
            degrees: Vec::new(),
            ns: Vec::new(),
            t_extra: default_t_extra(),
            cross_check: false,
            integration: IntegrationConfig::default(),
            counting: None,
            output: None,
        }
    }

    pub fn from_toml(text: &str, path: &Path) -> Result<Self, ConfigError> {
        let cfg: Self = toml::from_str(text).map_err(|e| ConfigError::Parse {
            path: path.to_path_buf(),
            source: Box::new(e),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        Self::from_toml(&text, path)
    }

    /// Counting settings with the configured radius.
    pub fn count_config(&self) -> CountConfig {
        CountConfig {
            radius: self.radius,
            ..self.counting.unwrap_or_default()
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.trials == 0 {
            return Err(invalid("trials", "must be at least 1"));
        }
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(invalid("radius", "must be positive and finite"));
        }
        if let Some(c) = &self.counting {
            if c.max_cells == 0 || !(c.inflation >= 1.0) {
                return Err(invalid(
                    "counting",
                    "need max_cells >= 1 and inflation >= 1",
                ));
            }
        }
        let ig = &self.integration;
        if !(ig.radius > 0.0 && ig.max_radius >= ig.radius && ig.samples > 0) {
            return Err(invalid(
                "integration",
                "need radius > 0, max_radius >= radius and samples >= 1",
            ));
        }
        match (&self.support, self.kind.needs_support()) {
            (None, true) => {
                return Err(invalid(
                    "support",
                    format!("required for kind {}", self.kind.name()),
                ))
            }
            (Some(_), false) => {
                return Err(invalid(
                    "support",
                    format!("not used by kind {}", self.kind.name()),
                ))
            }
            (Some(s), true) => {
                s.validate()?;
                let n = s.n().unwrap_or(0);
                if self.kind == ExperimentKind::McExpectedZeros && n > MAX_VARIABLES {
                    return Err(invalid(
                        "support",
                        format!("zero counting supports n <= {MAX_VARIABLES}, got n = {n}"),
                    ));
                }
                if let (SigmaSpec::Weights(_), SupportSpec::Random(_)) = (&self.sigma, s) {
                    return Err(invalid(
                        "sigma.weights",
                        "explicit weights need explicit exponents",
                    ));
                }
                for support in s.supports()? {
                    self.sigma.for_support(&support)?;
                }
            }
            (None, false) => {}
        }
        match self.kind {
            ExperimentKind::ConeCheck | ExperimentKind::SpecialCheck => match self.n {
                Some(n) if n >= 1 => {}
                _ => return Err(invalid("n", "required and at least 1")),
            },
            ExperimentKind::KacSweep | ExperimentKind::KostlanSweep => {
                if self.degrees.is_empty() || self.degrees.contains(&0) {
                    return Err(invalid(
                        "degrees",
                        "need a nonempty list of positive degrees",
                    ));
                }
            }
            ExperimentKind::BoundSweep => {
                if self.ns.is_empty() || self.ns.contains(&0) {
                    return Err(invalid(
                        "ns",
                        "need a nonempty list of positive variable counts",
                    ));
                }
            }
            _ => {}
        }
        if self.kind == ExperimentKind::SpecialCheck && self.n.is_some_and(|n| n > 8) {
            return Err(invalid("n", "special_check supports n <= 8"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<ExperimentConfig, ConfigError> {
        ExperimentConfig::from_toml(text, Path::new("test.toml"))
    }

    #[test]
    fn parses_explicit_and_random_supports() {
        let cfg = parse(
            r#"
            kind = "mc_expected_zeros"
            trials = 10
            seed = 3
            support.exponents = [[0, 0], [1, 0], [0, 1]]
            "#,
        )
        .unwrap();
        assert_eq!(cfg.support.unwrap().supports().unwrap()[0].t(), 3);
        let cfg = parse(
            r#"
            kind = "mc_expected_zeros"
            sigma = "kostlan"
            [support.random]
            n = 2
            t_range = [3, 6]
            count = 5
            "#,
        )
        .unwrap();
        let supports = cfg.support.unwrap().supports().unwrap();
        assert_eq!(supports.len(), 5);
        assert!(supports.iter().all(|s| (3..=6).contains(&s.t())));
    }

    #[test]
    fn errors_name_the_field() {
        let msg = |text: &str| parse(text).unwrap_err().to_string();
        assert!(msg("kind = \"cone_check\"\ntrials = 0\nn = 1").contains("`trials`"));
        assert!(msg("kind = \"cone_check\"\nradius = -1.0\nn = 1").contains("`radius`"));
        assert!(msg("kind = \"mc_expected_zeros\"").contains("`support`"));
        let m = msg(
            "kind = \"density_integral\"\nsupport.exponents = [[0], [1]]\nsigma.weights = [1.0]",
        );
        assert!(m.contains("`sigma.weights`"), "{m}");
        let m = msg("kind = \"cone_check\"\nn = 1\nbogus = 2");
        assert!(m.contains("line 3"), "{m}");
    }
}
