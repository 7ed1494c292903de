//! Finite-sample posterior-odds comparison test.

mod cache;
pub mod dpm;
mod evidence;
pub mod lecam;
mod odds;
pub mod prior;

pub use cache::EvidenceCache;
pub use dpm::DpmConfig;
pub use evidence::{bic_score, conjugate_log_evidence, EvidenceBackend, EvidenceKey, GaussianHyper};
pub use lecam::{relative_residual, solve_epsilon, LeCamConfig};
pub use odds::{OddsConfig, OddsTest};
pub use prior::{log_model_prior, log_structural_prior, log_vertex_prior, ModelPriorConfig, PriorForm};
