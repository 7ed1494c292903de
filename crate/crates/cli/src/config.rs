use std::path::{Path, PathBuf};

use bayesges::bayes::{DpmConfig, EvidenceBackend, GaussianHyper, ModelPriorConfig, PriorForm};
use bayesges::search::Strategy;
use bayesges::sim::{Domain, Link};
use bayesges::OddsConfig;
use serde::Deserialize;

use crate::Failure;

/// Everything a run needs, read from one JSON file. Relative paths are
/// resolved against the directory holding the config.
#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub n: Option<usize>,
    /// SEM specification (JSON) for `simulate`.
    pub sem: Option<PathBuf>,
    /// Alternative to `sem`: draw a random SEM from the run seed.
    pub random_sem: Option<RandomSem>,
    pub data: Option<PathBuf>,
    pub domain: Domain,
    pub truth_dag: Option<PathBuf>,
    pub truth_cpdag: Option<PathBuf>,
    pub learned_cpdag: Option<PathBuf>,
    pub test: TestKind,
    pub strategy: Strategy,
    /// DAG file (inline notation) for `epsilon`.
    pub dag: Option<PathBuf>,
    pub n_grid: Vec<usize>,
    pub bayes: BayesSection,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum TestKind {
    Oracle,
    #[default]
    Odds,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum BackendKind {
    #[default]
    Conjugate,
    Bic,
    Dpm,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SemKind {
    #[default]
    Linear,
    Additive,
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RandomSem {
    pub d: usize,
    pub edge_prob: f64,
    pub kind: SemKind,
    pub link: Link,
    /// Magnitude range of coefficients (linear) or amplitudes (additive).
    pub coef_range: (f64, f64),
    pub noise_var: f64,
}

impl Default for RandomSem {
    fn default() -> Self {
        RandomSem {
            d: 3,
            edge_prob: 0.5,
            kind: SemKind::Linear,
            link: Link::Tanh,
            coef_range: (0.5, 1.5),
            noise_var: 1.0,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BayesSection {
    pub lambda: f64,
    #[serde(rename = "Gamma")]
    pub penalty: f64,
    pub gamma: f64,
    #[serde(rename = "gamma_G")]
    pub gamma_g: f64,
    pub prior_form: PriorForm,
    pub backend: BackendKind,
    #[serde(rename = "K")]
    pub k: Option<usize>,
    #[serde(rename = "M")]
    pub m: Option<usize>,
    /// DPM seed; derived from the run seed when absent.
    pub seed: Option<u64>,
    pub alpha: Option<f64>,
    pub ig_shape: Option<f64>,
    pub ig_rate: Option<f64>,
    pub tau2: Option<f64>,
    pub a0: Option<f64>,
    pub b0: Option<f64>,
    /// Evidence cache file, read if present and rewritten after learning.
    pub cache: Option<PathBuf>,
}

impl Default for BayesSection {
    fn default() -> Self {
        BayesSection {
            lambda: 1.0,
            penalty: 1.0,
            gamma: 1.0,
            gamma_g: 1.0,
            prior_form: PriorForm::Structural,
            backend: BackendKind::Conjugate,
            k: None,
            m: None,
            seed: None,
            alpha: None,
            ig_shape: None,
            ig_rate: None,
            tau2: None,
            a0: None,
            b0: None,
            cache: None,
        }
    }
}

impl BayesSection {
    pub fn prior(&self) -> ModelPriorConfig {
        ModelPriorConfig {
            gamma_g: self.gamma_g,
            penalty: self.penalty,
            form: self.prior_form,
        }
    }

    pub fn odds_config(&self, dpm_seed: u64) -> OddsConfig {
        let backend = match self.backend {
            BackendKind::Conjugate => {
                let d = GaussianHyper::default();
                EvidenceBackend::Conjugate(GaussianHyper {
                    tau2: self.tau2.unwrap_or(d.tau2),
                    a0: self.a0.unwrap_or(d.a0),
                    b0: self.b0.unwrap_or(d.b0),
                })
            }
            BackendKind::Bic => EvidenceBackend::Bic,
            BackendKind::Dpm => {
                let d = DpmConfig::default();
                EvidenceBackend::Dpm(DpmConfig {
                    k: self.k.unwrap_or(d.k),
                    m: self.m.unwrap_or(d.m),
                    seed: self.seed.unwrap_or(dpm_seed),
                    alpha: self.alpha.unwrap_or(d.alpha),
                    ig_shape: self.ig_shape.unwrap_or(d.ig_shape),
                    ig_rate: self.ig_rate.unwrap_or(d.ig_rate),
                })
            }
        };
        OddsConfig {
            lambda: self.lambda,
            gamma: self.gamma,
            prior: self.prior(),
            backend,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::input(format!("cannot read config {}: {e}", path.display())))?;
        let mut cfg: RunConfig = serde_json::from_str(&text)
            .map_err(|e| Failure::input(format!("invalid config {}: {e}", path.display())))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        let fix = |p: &mut Option<PathBuf>| {
            if let Some(p) = p {
                if p.is_relative() {
                    *p = base.join(&*p);
                }
            }
        };
        fix(&mut cfg.out);
        fix(&mut cfg.sem);
        fix(&mut cfg.data);
        fix(&mut cfg.truth_dag);
        fix(&mut cfg.truth_cpdag);
        fix(&mut cfg.learned_cpdag);
        fix(&mut cfg.dag);
        fix(&mut cfg.bayes.cache);
        if cfg.out.is_none() {
            cfg.out = Some(base);
        }
        Ok(cfg)
    }

    pub fn out_dir(&self) -> &Path {
        self.out.as_deref().unwrap_or(Path::new("."))
    }

    /// `explicit` if set, otherwise `name` inside the output directory.
    pub fn input_or_out(&self, explicit: &Option<PathBuf>, name: &str) -> PathBuf {
        explicit.clone().unwrap_or_else(|| self.out_dir().join(name))
    }
}
