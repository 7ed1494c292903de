//! Synthetic data, structure metrics and density distances.

mod dataset;
pub mod hellinger;
mod metrics;
pub mod quadrature;
mod seeds;
mod sem;

pub use dataset::{default_names, Dataset, Domain};
pub use hellinger::{
    hellinger, integrated_hellinger, separation_diagnostic, separation_report, ConditionalDensity, Density,
    Gaussian, MechanismDensity, Method, SeparationReport,
};
pub use metrics::shd_cpdag;
pub use seeds::{mix_seed, split_seed, splitmix64};
pub use sem::{random_additive_sem, random_dag, random_linear_sem, sample, Link, Mechanism, SemSpec};
