use serde::{Deserialize, Serialize};

use super::lecam::{solve_epsilon, LeCamConfig};
use crate::error::{Error, Result};
use crate::graph::Dag;

/// How the complexity penalty `Γ n ε_n²` is attached to a model.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PriorForm {
    /// One factor per vertex: vertex `j` contributes `-(Γ/d) n ε²` with `ε`
    /// solving the rate equation for the constant sequence `(s_j, ..., s_j)`.
    /// The prior then depends on each vertex only through its parent count,
    /// and agrees with [`PriorForm::Global`] whenever all parent counts match.
    #[default]
    Structural,
    /// `-Γ n ε_n(G)²` with `ε_n(G)` solved from the whole sparsity sequence.
    Global,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelPriorConfig {
    /// Per-model weight γ_G (the same for every model).
    #[serde(rename = "gamma_G")]
    pub gamma_g: f64,
    /// Penalty multiplier Γ.
    #[serde(rename = "Gamma")]
    pub penalty: f64,
    #[serde(default)]
    pub form: PriorForm,
}

impl Default for ModelPriorConfig {
    fn default() -> Self {
        ModelPriorConfig {
            gamma_g: 1.0,
            penalty: 1.0,
            form: PriorForm::Structural,
        }
    }
}

impl ModelPriorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma_g > 0.0 && self.gamma_g.is_finite()) {
            return Err(Error::Config(format!("gamma_G must be positive, got {}", self.gamma_g)));
        }
        if !(self.penalty > 0.0 && self.penalty.is_finite()) {
            return Err(Error::Config(format!("Gamma must be positive, got {}", self.penalty)));
        }
        Ok(())
    }
}

/// Unnormalized log prior `log γ_G - Γ n ε_n(G)²` over the whole graph.
pub fn log_model_prior(g: &Dag, cfg: &ModelPriorConfig, lecam: &LeCamConfig) -> Result<f64> {
    cfg.validate()?;
    check_dims(g, lecam)?;
    let eps = solve_epsilon(lecam, &g.sparsity())?;
    Ok(cfg.gamma_g.ln() - cfg.penalty * lecam.n as f64 * eps * eps)
}

/// Per-vertex prior factor for a vertex with `parent_count` parents.
pub fn log_vertex_prior(parent_count: usize, cfg: &ModelPriorConfig, lecam: &LeCamConfig) -> Result<f64> {
    let eps = solve_epsilon(lecam, &vec![parent_count; lecam.d])?;
    Ok(-cfg.penalty * lecam.n as f64 * eps * eps / lecam.d as f64)
}

/// Unnormalized log prior in the vertex-factorized form.
pub fn log_structural_prior(g: &Dag, cfg: &ModelPriorConfig, lecam: &LeCamConfig) -> Result<f64> {
    cfg.validate()?;
    check_dims(g, lecam)?;
    let mut total = cfg.gamma_g.ln();
    for s in g.sparsity() {
        total += log_vertex_prior(s, cfg, lecam)?;
    }
    Ok(total)
}

fn check_dims(g: &Dag, lecam: &LeCamConfig) -> Result<()> {
    if g.n_vertices() != lecam.d {
        return Err(Error::VertexCountMismatch(g.n_vertices(), lecam.d));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_dag;

    #[test]
    fn empty_two_vertex_graph() {
        let cfg = ModelPriorConfig::default();
        let g = Dag::empty(2);
        let p4 = log_model_prior(&g, &cfg, &LeCamConfig::new(1.0, 4, 2).unwrap()).unwrap();
        assert!((p4 + 4.0).abs() < 1e-9, "{p4}");
        let p32 = log_model_prior(&g, &cfg, &LeCamConfig::new(1.0, 32, 2).unwrap()).unwrap();
        assert!((p32 + 8.0).abs() < 1e-9, "{p32}");
    }

    #[test]
    fn unit_weight_contributes_nothing() {
        let lecam = LeCamConfig::new(1.0, 100, 3).unwrap();
        let g = parse_dag("[∅|1|2]").unwrap();
        let unit = log_model_prior(&g, &ModelPriorConfig::default(), &lecam).unwrap();
        let doubled = ModelPriorConfig {
            gamma_g: 2.0,
            ..Default::default()
        };
        let two = log_model_prior(&g, &doubled, &lecam).unwrap();
        assert!((two - unit - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn forms_agree_on_homogeneous_sequences() {
        let cfg = ModelPriorConfig::default();
        // an acyclic graph has a source, so only the empty graph is homogeneous
        for n in [4, 32, 1000] {
            for d in [2, 3, 6] {
                let lecam = LeCamConfig::new(1.0, n, d).unwrap();
                let g = Dag::empty(d);
                let a = log_model_prior(&g, &cfg, &lecam).unwrap();
                let b = log_structural_prior(&g, &cfg, &lecam).unwrap();
                assert!((a - b).abs() <= 1e-9 * a.abs(), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn denser_graphs_are_penalized_in_both_forms() {
        let cfg = ModelPriorConfig::default();
        let lecam = LeCamConfig::new(1.0, 1000, 3).unwrap();
        let sparse = parse_dag("[∅|1|∅]").unwrap();
        let dense = parse_dag("[∅|1|2]").unwrap();
        assert!(log_model_prior(&dense, &cfg, &lecam).unwrap() < log_model_prior(&sparse, &cfg, &lecam).unwrap());
        assert!(
            log_structural_prior(&dense, &cfg, &lecam).unwrap()
                < log_structural_prior(&sparse, &cfg, &lecam).unwrap()
        );
    }

    #[test]
    fn rejects_nonpositive_constants() {
        let lecam = LeCamConfig::new(1.0, 10, 2).unwrap();
        let bad = ModelPriorConfig {
            penalty: 0.0,
            ..Default::default()
        };
        assert!(log_model_prior(&Dag::empty(2), &bad, &lecam).is_err());
    }
}
