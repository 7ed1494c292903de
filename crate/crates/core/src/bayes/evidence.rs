use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use super::dpm::{self, DpmConfig};
use crate::error::{Error, Result};
use crate::graph::VertexSet;
use crate::sim::Dataset;

/// A local evidence term: column `node` given the columns in `parents`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EvidenceKey {
    pub node: usize,
    pub parents: VertexSet,
}

impl EvidenceKey {
    pub fn new(node: usize, parents: VertexSet) -> Result<EvidenceKey> {
        if parents.contains(node) {
            return Err(Error::Config(format!(
                "vertex {} listed among its own parents",
                node + 1
            )));
        }
        Ok(EvidenceKey { node, parents })
    }

    fn check(&self, data: &Dataset) -> Result<()> {
        let d = data.n_cols();
        if self.node >= d {
            return Err(Error::VertexOutOfRange { vertex: self.node + 1, d });
        }
        if let Some(v) = self.parents.iter().find(|&v| v >= d) {
            return Err(Error::VertexOutOfRange { vertex: v + 1, d });
        }
        if self.parents.contains(self.node) {
            return Err(Error::Config("node listed among its own parents".into()));
        }
        Ok(())
    }
}

/// Normal-inverse-gamma hyperparameters for the conjugate linear model
/// `x_j = b0 + b'x_S + e`, `e ~ N(0, s2)`, `b | s2 ~ N(0, s2 tau2 I)`,
/// `s2 ~ InvGamma(a0, b0)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GaussianHyper {
    pub tau2: f64,
    pub a0: f64,
    pub b0: f64,
}

impl Default for GaussianHyper {
    fn default() -> Self {
        GaussianHyper {
            tau2: 1.0,
            a0: 1.0,
            b0: 1.0,
        }
    }
}

impl GaussianHyper {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("tau2", self.tau2), ("a0", self.a0), ("b0", self.b0)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

/// Source of local log marginal evidence.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "backend", rename_all = "snake_case")]
pub enum EvidenceBackend {
    Conjugate(GaussianHyper),
    Bic,
    Dpm(DpmConfig),
}

impl Default for EvidenceBackend {
    fn default() -> Self {
        EvidenceBackend::Conjugate(GaussianHyper::default())
    }
}

impl EvidenceBackend {
    pub fn name(&self) -> &'static str {
        match self {
            EvidenceBackend::Conjugate(_) => "conjugate",
            EvidenceBackend::Bic => "bic",
            EvidenceBackend::Dpm(_) => "dpm",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            EvidenceBackend::Conjugate(h) => h.validate(),
            EvidenceBackend::Bic => Ok(()),
            EvidenceBackend::Dpm(c) => c.validate(),
        }
    }

    /// Natural-log local evidence, computed from scratch.
    pub fn log_evidence(&self, data: &Dataset, key: EvidenceKey) -> Result<f64> {
        key.check(data)?;
        self.validate()?;
        if data.n_rows() < 2 {
            return Err(Error::Degenerate("need at least two rows".into()));
        }
        match self {
            EvidenceBackend::Conjugate(h) => conjugate_log_evidence(data, key, h),
            EvidenceBackend::Bic => bic_score(data, key),
            EvidenceBackend::Dpm(c) => {
                let joint = dpm::log_joint(data, key.parents.with(key.node), c)?;
                let marginal = dpm::log_joint(data, key.parents, c)?;
                Ok(joint - marginal)
            }
        }
    }
}

struct Regression {
    /// `X'X` with an intercept column first.
    gram: DMatrix<f64>,
    xty: DVector<f64>,
    yty: f64,
    n: usize,
}

fn regression(data: &Dataset, key: EvidenceKey) -> Result<Regression> {
    for v in key.parents.with(key.node).iter() {
        if data.variance(v) <= 0.0 {
            return Err(Error::Degenerate(format!(
                "column {} has zero variance",
                data.names()[v]
            )));
        }
    }
    let n = data.n_rows();
    let y = data.column(key.node);
    let cols: Vec<&[f64]> = key.parents.iter().map(|v| data.column(v)).collect();
    let p = cols.len() + 1;
    let mut gram = DMatrix::zeros(p, p);
    let mut xty = DVector::zeros(p);
    gram[(0, 0)] = n as f64;
    xty[0] = y.iter().sum();
    for (a, ca) in cols.iter().enumerate() {
        let sa: f64 = ca.iter().sum();
        gram[(0, a + 1)] = sa;
        gram[(a + 1, 0)] = sa;
        xty[a + 1] = ca.iter().zip(y).map(|(u, v)| u * v).sum();
        for (b, cb) in cols.iter().enumerate().skip(a) {
            let s: f64 = ca.iter().zip(cb.iter()).map(|(u, v)| u * v).sum();
            gram[(a + 1, b + 1)] = s;
            gram[(b + 1, a + 1)] = s;
        }
    }
    let yty = y.iter().map(|v| v * v).sum();
    Ok(Regression { gram, xty, yty, n })
}

/// Exact log marginal likelihood of the normal-inverse-gamma linear model.
pub fn conjugate_log_evidence(data: &Dataset, key: EvidenceKey, h: &GaussianHyper) -> Result<f64> {
    let r = regression(data, key)?;
    let p = r.gram.nrows();
    let n = r.n as f64;
    let mut a = r.gram.clone();
    for i in 0..p {
        a[(i, i)] += 1.0 / h.tau2;
    }
    let chol = a
        .cholesky()
        .ok_or_else(|| Error::Degenerate("posterior precision not positive definite".into()))?;
    let log_det_a: f64 = 2.0 * chol.l().diagonal().iter().map(|v| v.ln()).sum::<f64>();
    let mean = chol.solve(&r.xty);
    let quad = (r.yty - r.xty.dot(&mean)).max(0.0);
    let an = h.a0 + 0.5 * n;
    let bn = h.b0 + 0.5 * quad;
    Ok(-0.5 * n * (2.0 * std::f64::consts::PI).ln() - 0.5 * log_det_a - 0.5 * p as f64 * h.tau2.ln()
        + h.a0 * h.b0.ln()
        - an * bn.ln()
        + ln_gamma(an)
        - ln_gamma(h.a0))
}

/// Maximized Gaussian log-likelihood minus `((|S| + 2) / 2) ln n`.
pub fn bic_score(data: &Dataset, key: EvidenceKey) -> Result<f64> {
    let r = regression(data, key)?;
    let chol = r
        .gram
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Degenerate("collinear parent columns".into()))?;
    let beta = chol.solve(&r.xty);
    let y = data.column(key.node);
    let parents: Vec<&[f64]> = key.parents.iter().map(|v| data.column(v)).collect();
    let mut rss = 0.0;
    for i in 0..r.n {
        let mut fit = beta[0];
        for (b, col) in beta.iter().skip(1).zip(&parents) {
            fit += b * col[i];
        }
        rss += (y[i] - fit).powi(2);
    }
    if rss <= 0.0 {
        return Err(Error::Degenerate("zero residual variance".into()));
    }
    let n = r.n as f64;
    let loglik = -0.5 * n * ((2.0 * std::f64::consts::PI * rss / n).ln() + 1.0);
    Ok(loglik - 0.5 * (key.parents.len() as f64 + 2.0) * n.ln())
}
