//! Greedy equivalence search over DAG models where candidate models are
//! compared by pluggable two-model tests: a population d-separation oracle or
//! a finite-sample posterior-odds test with structural priors. Includes a
//! synthetic-data harness with structure and density metrics.

pub mod bayes;
pub mod error;
pub mod graph;
pub mod oracle;
pub mod search;
pub mod sim;

pub use error::{Error, Result};
pub use graph::{cpdag_of, format_dag, parse_dag, Cpdag, Dag, VertexSet};
pub use oracle::{CiOracle, DsepOracle, PopulationTest};
pub use bayes::{OddsConfig, OddsTest};
pub use search::{ges, ComparisonTest, Decision, SearchTrace};
pub use sim::{Dataset, SemSpec};
