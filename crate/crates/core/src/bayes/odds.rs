use super::cache::EvidenceCache;
use super::evidence::{EvidenceBackend, EvidenceKey};
use super::lecam::LeCamConfig;
use super::prior::{log_model_prior, log_vertex_prior, ModelPriorConfig, PriorForm};
use crate::error::{Error, Result};
use crate::graph::Dag;
use crate::search::{Comparison, ComparisonTest, Decision};
use crate::sim::Dataset;

/// Settings of the posterior-odds test.
#[derive(Clone, Debug, PartialEq)]
pub struct OddsConfig {
    pub lambda: f64,
    /// Smoothness exponent in the rate equation.
    pub gamma: f64,
    pub prior: ModelPriorConfig,
    pub backend: EvidenceBackend,
}

impl Default for OddsConfig {
    fn default() -> Self {
        OddsConfig {
            lambda: 1.0,
            gamma: 1.0,
            prior: ModelPriorConfig::default(),
            backend: EvidenceBackend::default(),
        }
    }
}

impl OddsConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::Config(format!("lambda must be positive, got {}", self.lambda)));
        }
        self.prior.validate()?;
        self.backend.validate()
    }
}

/// Thresholded posterior odds `phi_lambda` bound to one dataset.
#[derive(Debug)]
pub struct OddsTest<'a> {
    data: &'a Dataset,
    cache: EvidenceCache,
    prior: ModelPriorConfig,
    lecam: LeCamConfig,
    lambda: f64,
    /// Per-vertex prior factor indexed by parent count.
    vertex_prior: Vec<f64>,
}

impl<'a> OddsTest<'a> {
    pub fn new(data: &'a Dataset, cfg: &OddsConfig) -> Result<OddsTest<'a>> {
        cfg.validate()?;
        let lecam = LeCamConfig::new(cfg.gamma, data.n_rows(), data.n_cols())?;
        let vertex_prior = (0..data.n_cols())
            .map(|s| log_vertex_prior(s, &cfg.prior, &lecam))
            .collect::<Result<Vec<_>>>()?;
        Ok(OddsTest {
            data,
            cache: EvidenceCache::new(cfg.backend.clone()),
            prior: cfg.prior,
            lecam,
            lambda: cfg.lambda,
            vertex_prior,
        })
    }

    pub fn cache(&self) -> &EvidenceCache {
        &self.cache
    }

    pub fn lecam(&self) -> &LeCamConfig {
        &self.lecam
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn log_evidence(&self, key: EvidenceKey) -> Result<f64> {
        self.cache.log_evidence(self.data, key)
    }

    /// `ln P(g | X) - ln P(h | X)`. Vertices with equal parent sets in both
    /// graphs are skipped, so their terms cancel exactly.
    pub fn log_posterior_odds(&self, g: &Dag, h: &Dag) -> Result<f64> {
        let d = self.lecam.d;
        for x in [g, h] {
            if x.n_vertices() != d {
                return Err(Error::VertexCountMismatch(x.n_vertices(), d));
            }
        }
        let structural = self.prior.form == PriorForm::Structural;
        let mut odds = 0.0;
        for j in 0..d {
            let (pg, ph) = (g.parents(j), h.parents(j));
            if pg == ph {
                continue;
            }
            let eg = self.log_evidence(EvidenceKey::new(j, pg)?)?;
            let eh = self.log_evidence(EvidenceKey::new(j, ph)?)?;
            let mut term = eg - eh;
            if structural {
                term += self.vertex_prior[pg.len()] - self.vertex_prior[ph.len()];
            }
            odds += term;
        }
        if !structural && g != h {
            odds += log_model_prior(g, &self.prior, &self.lecam)? - log_model_prior(h, &self.prior, &self.lecam)?;
        }
        Ok(odds)
    }

    /// Prefer `g` iff the log odds strictly exceed `ln lambda`.
    pub fn phi_lambda(&self, g: &Dag, h: &Dag) -> Result<Decision> {
        Ok(self.compare(g, h)?.decision)
    }
}

impl ComparisonTest for OddsTest<'_> {
    fn n_vertices(&self) -> usize {
        self.lecam.d
    }

    fn compare(&self, g: &Dag, h: &Dag) -> Result<Comparison> {
        let odds = self.log_posterior_odds(g, h)?;
        let decision = if odds > self.lambda.ln() {
            Decision::PreferG
        } else {
            Decision::PreferH
        };
        Ok(Comparison {
            decision,
            log_odds: Some(odds),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_dag;
    use crate::sim::Domain;

    fn chain_data() -> Dataset {
        let n = 200;
        let x1: Vec<f64> = (0..n).map(|i| ((i * 7919) % 1000) as f64 / 250.0 - 2.0).collect();
        let x2: Vec<f64> = x1.iter().enumerate().map(|(i, v)| v + ((i * 104729) % 997) as f64 / 500.0 - 1.0).collect();
        let x3: Vec<f64> = (0..n).map(|i| ((i * 31) % 101) as f64 / 50.0 - 1.0).collect();
        Dataset::with_default_names(vec![x1, x2, x3], Domain::Unbounded).unwrap()
    }

    #[test]
    fn identical_graphs_have_zero_odds() {
        let ds = chain_data();
        let t = OddsTest::new(&ds, &OddsConfig::default()).unwrap();
        let g = parse_dag("[∅|1|∅]").unwrap();
        assert_eq!(t.log_posterior_odds(&g, &g).unwrap(), 0.0);
        assert_eq!(t.phi_lambda(&g, &g).unwrap(), Decision::PreferH);
    }

    #[test]
    fn dependent_pair_prefers_edge() {
        let ds = chain_data();
        let t = OddsTest::new(&ds, &OddsConfig::default()).unwrap();
        let g = parse_dag("[∅|1|∅]").unwrap();
        let h = Dag::empty(3);
        assert_eq!(t.phi_lambda(&g, &h).unwrap(), Decision::PreferG);
        let odds = t.log_posterior_odds(&g, &h).unwrap();
        assert_eq!(t.log_posterior_odds(&h, &g).unwrap(), -odds);
    }

    #[test]
    fn global_form_adds_whole_graph_prior() {
        let ds = chain_data();
        let global = OddsConfig {
            prior: ModelPriorConfig {
                form: PriorForm::Global,
                ..Default::default()
            },
            ..Default::default()
        };
        let t = OddsTest::new(&ds, &global).unwrap();
        let g = parse_dag("[∅|1|∅]").unwrap();
        let h = Dag::empty(3);
        let key = |j, s: &[usize]| EvidenceKey::new(j, s.iter().copied().collect()).unwrap();
        let evidence = t.log_evidence(key(1, &[0])).unwrap() - t.log_evidence(key(1, &[])).unwrap();
        let prior = log_model_prior(&g, &global.prior, t.lecam()).unwrap()
            - log_model_prior(&h, &global.prior, t.lecam()).unwrap();
        assert!(prior < 0.0);
        assert_eq!(t.log_posterior_odds(&g, &h).unwrap(), evidence + prior);
    }

    #[test]
    fn tiny_lambda_accepts_positive_odds() {
        let ds = chain_data();
        let cfg = OddsConfig {
            lambda: 1e-300,
            ..Default::default()
        };
        let t = OddsTest::new(&ds, &cfg).unwrap();
        let g = parse_dag("[∅|1|∅]").unwrap();
        assert!(t.phi_lambda(&g, &Dag::empty(3)).unwrap().prefers_g());
        assert!(OddsTest::new(&ds, &OddsConfig { lambda: 0.0, ..Default::default() }).is_err());
    }
}
