//! Complexity rates from Le Cam's equation
//! `sum_l (d / eps)^((s_l + 1) / gamma) = n * eps^2`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative residual accepted from the root finder.
pub const RESIDUAL_TOLERANCE: f64 = 1e-9;

const LOWER_BRACKET: f64 = 1e-8;
const MAX_BISECTIONS: usize = 400;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LeCamConfig {
    /// Smoothness exponent; 1 corresponds to Lipschitz densities.
    pub gamma: f64,
    /// Sample count.
    pub n: usize,
    /// Vertex count.
    pub d: usize,
}

impl LeCamConfig {
    pub fn new(gamma: f64, n: usize, d: usize) -> Result<Self> {
        let cfg = LeCamConfig { gamma, n, d };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::Config(format!("gamma must be positive, got {}", self.gamma)));
        }
        if self.n == 0 || self.d == 0 {
            return Err(Error::Config("n and d must be at least 1".into()));
        }
        Ok(())
    }
}

/// The unique positive root `eps_n` for the given sparsity sequence.
///
/// Bisects `log(n eps^2) - log(sum_l (d/eps)^((s_l+1)/gamma))`, which is
/// strictly increasing in `log eps`, on `[1e-8, 2 max(d, n)]` (the lower end
/// is pushed down if needed).
pub fn solve_epsilon(cfg: &LeCamConfig, sparsity: &[usize]) -> Result<f64> {
    cfg.validate()?;
    if sparsity.len() != cfg.d {
        return Err(Error::Config(format!(
            "sparsity sequence has length {}, expected {}",
            sparsity.len(),
            cfg.d
        )));
    }
    let log_d = (cfg.d as f64).ln();
    let log_n = (cfg.n as f64).ln();
    let exponents: Vec<f64> = sparsity.iter().map(|&s| (s as f64 + 1.0) / cfg.gamma).collect();

    // increasing in u = log eps
    let gap = |u: f64| -> f64 {
        let terms = exponents.iter().map(|&e| e * (log_d - u));
        log_n + 2.0 * u - log_sum_exp(terms)
    };

    // at eps = 2 max(d, n) every term is at most 1 while n eps^2 > d
    let mut lo = LOWER_BRACKET.ln();
    let mut hi = (2.0 * cfg.d.max(cfg.n) as f64).ln();
    for _ in 0..8 {
        if gap(lo) < 0.0 {
            break;
        }
        lo -= 10.0;
    }
    if !(gap(lo) < 0.0 && gap(hi) > 0.0) {
        return Err(Error::NonConvergence(format!(
            "root not bracketed for n = {}, d = {}",
            cfg.n, cfg.d
        )));
    }
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if gap(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let u = if gap(lo).abs() < gap(hi).abs() { lo } else { hi };
    let eps = u.exp();
    let residual = relative_residual(cfg, sparsity, eps);
    if residual > RESIDUAL_TOLERANCE {
        return Err(Error::NonConvergence(format!(
            "relative residual {residual:e} above tolerance"
        )));
    }
    Ok(eps)
}

/// `|lhs - rhs| / rhs` of Le Cam's equation at `eps`.
pub fn relative_residual(cfg: &LeCamConfig, sparsity: &[usize], eps: f64) -> f64 {
    let d = cfg.d as f64;
    let lhs: f64 = sparsity
        .iter()
        .map(|&s| (d / eps).powf((s as f64 + 1.0) / cfg.gamma))
        .sum();
    let rhs = cfg.n as f64 * eps * eps;
    (lhs - rhs).abs() / rhs
}

fn log_sum_exp(xs: impl Iterator<Item = f64> + Clone) -> f64 {
    let m = xs.clone().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + xs.map(|x| (x - m).exp()).sum::<f64>().ln()
}
