//! Greedy equivalence search driven by a two-model comparison test.
//!
//! Each phase scans the neighbourhood of the current DAG in a fixed order and
//! moves to the first neighbour the test prefers over the incumbent. The
//! forward phase only adds edges, the backward phase only removes them, and
//! each runs once.

mod trace;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::{cpdag_of, nb_minus, nb_plus, Cpdag, Dag, Neighbour};

pub use trace::{ComparisonRecord, Iterate, Phase, SearchTrace};

/// Outcome of comparing a challenger `g` with an incumbent `h`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    PreferG,
    PreferH,
}

impl Decision {
    pub fn prefers_g(self) -> bool {
        self == Decision::PreferG
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Comparison {
    pub decision: Decision,
    /// Log posterior odds of `g` against `h`, for tests that compute one.
    pub log_odds: Option<f64>,
}

/// A deterministic, total test choosing between two DAG models.
pub trait ComparisonTest {
    fn n_vertices(&self) -> usize;

    fn compare(&self, g: &Dag, h: &Dag) -> Result<Comparison>;
}

impl<T: ComparisonTest + ?Sized> ComparisonTest for &T {
    fn n_vertices(&self) -> usize {
        (**self).n_vertices()
    }

    fn compare(&self, g: &Dag, h: &Dag) -> Result<Comparison> {
        (**self).compare(g, h)
    }
}

/// How a phase picks among preferred neighbours.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Move to the first preferred neighbour in scan order.
    #[default]
    FirstAccept,
    /// Move to the preferred neighbour with the largest log odds (classical
    /// score-based update). Requires a test that reports log odds.
    BestImprovement,
}

/// Run the forward phase from `start`, recording into a fresh trace.
pub fn forward_phase<T: ComparisonTest + ?Sized>(test: &T, start: &Dag) -> Result<(Dag, SearchTrace)> {
    let mut trace = SearchTrace::starting_at(start.clone());
    let g = run_phase(test, start.clone(), Phase::Forward, Strategy::FirstAccept, &mut trace)?;
    trace.t0 = trace.last_index();
    trace.r = trace.t0;
    Ok((g, trace))
}

/// Run the backward phase from `start`, recording into a fresh trace.
pub fn backward_phase<T: ComparisonTest + ?Sized>(test: &T, start: &Dag) -> Result<(Dag, SearchTrace)> {
    let mut trace = SearchTrace::starting_at(start.clone());
    trace.iterates[0].phase = Phase::Backward;
    let g = run_phase(test, start.clone(), Phase::Backward, Strategy::FirstAccept, &mut trace)?;
    trace.r = trace.last_index();
    Ok((g, trace))
}

/// Forward then backward phase from the empty graph.
pub fn ges<T: ComparisonTest + ?Sized>(test: &T) -> Result<(Cpdag, SearchTrace)> {
    ges_with(test, Strategy::FirstAccept)
}

pub fn ges_with<T: ComparisonTest + ?Sized>(test: &T, strategy: Strategy) -> Result<(Cpdag, SearchTrace)> {
    let start = Dag::empty(test.n_vertices());
    let mut trace = SearchTrace::starting_at(start.clone());
    let g = run_phase(test, start, Phase::Forward, strategy, &mut trace)?;
    trace.t0 = trace.last_index();
    let g = run_phase(test, g, Phase::Backward, strategy, &mut trace)?;
    trace.r = trace.last_index();
    Ok((cpdag_of(&g), trace))
}

fn run_phase<T: ComparisonTest + ?Sized>(
    test: &T,
    mut current: Dag,
    phase: Phase,
    strategy: Strategy,
    trace: &mut SearchTrace,
) -> Result<Dag> {
    loop {
        let t = trace.last_index();
        let candidates = match phase {
            Phase::Forward => nb_plus(&current),
            Phase::Backward => nb_minus(&current),
        };
        let accepted = match strategy {
            Strategy::FirstAccept => first_preferred(test, &current, candidates, t, phase, trace)?,
            Strategy::BestImprovement => best_preferred(test, &current, candidates, t, phase, trace)?,
        };
        match accepted {
            Some(next) => {
                trace.push_iterate(next.clone(), phase);
                current = next;
            }
            None => return Ok(current),
        }
    }
}

fn first_preferred<T: ComparisonTest + ?Sized>(
    test: &T,
    incumbent: &Dag,
    candidates: Vec<Neighbour>,
    t: usize,
    phase: Phase,
    trace: &mut SearchTrace,
) -> Result<Option<Dag>> {
    for nb in candidates {
        let cmp = test.compare(&nb.dag, incumbent)?;
        trace.push_comparison(t, phase, &nb, incumbent, cmp);
        if cmp.decision.prefers_g() {
            return Ok(Some(nb.dag));
        }
    }
    Ok(None)
}

fn best_preferred<T: ComparisonTest + ?Sized>(
    test: &T,
    incumbent: &Dag,
    candidates: Vec<Neighbour>,
    t: usize,
    phase: Phase,
    trace: &mut SearchTrace,
) -> Result<Option<Dag>> {
    let mut best: Option<(f64, Dag)> = None;
    for nb in candidates {
        let cmp = test.compare(&nb.dag, incumbent)?;
        trace.push_comparison(t, phase, &nb, incumbent, cmp);
        if !cmp.decision.prefers_g() {
            continue;
        }
        let score = cmp.log_odds.unwrap_or(f64::NEG_INFINITY);
        if best.as_ref().map_or(true, |(s, _)| score > *s) {
            best = Some((score, nb.dag));
        }
    }
    Ok(best.map(|(_, g)| g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{markov_equivalent, parse_dag};
    use crate::oracle::{DsepOracle, PopulationTest};

    fn oracle_test(truth: &str) -> PopulationTest<DsepOracle> {
        PopulationTest::new(DsepOracle::new(parse_dag(truth).unwrap()))
    }

    #[test]
    fn forward_on_empty_truth_stays_empty() {
        let test = oracle_test("[∅|∅|∅]");
        let (g, trace) = forward_phase(&test, &Dag::empty(3)).unwrap();
        assert_eq!(g, Dag::empty(3));
        assert_eq!(trace.t0, 0);
    }

    #[test]
    fn forward_reaches_an_imap_of_the_collider() {
        let truth = parse_dag("[∅|13|∅]").unwrap();
        let oracle = DsepOracle::new(truth.clone());
        let test = PopulationTest::new(oracle.clone());
        let (g, _) = forward_phase(&test, &Dag::empty(3)).unwrap();
        assert!(crate::oracle::is_markov(&g, &oracle), "{g}");
        let (h, _) = backward_phase(&test, &g).unwrap();
        assert!(markov_equivalent(&h, &truth).unwrap(), "{h}");
    }

    #[test]
    fn forward_on_complete_truth_ends_complete() {
        let test = oracle_test("[∅|1|12]");
        let (g, _) = forward_phase(&test, &Dag::empty(3)).unwrap();
        assert_eq!(g.n_edges(), 3);
    }

    #[test]
    fn backward_strips_extra_edge() {
        let truth = parse_dag("[∅|1|2]").unwrap();
        let test = PopulationTest::new(DsepOracle::new(truth.clone()));
        let (g, trace) = backward_phase(&test, &parse_dag("[∅|1|12]").unwrap()).unwrap();
        assert!(markov_equivalent(&g, &truth).unwrap());
        assert_eq!(trace.r, 1);
    }

    #[test]
    fn backward_identity_cases() {
        let test = oracle_test("[∅|∅|∅]");
        let (g, _) = backward_phase(&test, &Dag::empty(3)).unwrap();
        assert_eq!(g, Dag::empty(3));
        let v = parse_dag("[∅|13|∅]").unwrap();
        let test = PopulationTest::new(DsepOracle::new(v.clone()));
        let (g, _) = backward_phase(&test, &v).unwrap();
        assert_eq!(g, v);
    }

    #[test]
    fn ges_recovers_every_three_node_class() {
        for truth in crate::graph::all_dags(3) {
            let test = PopulationTest::new(DsepOracle::new(truth.clone()));
            let (c, trace) = ges(&test).unwrap();
            assert_eq!(c, cpdag_of(&truth), "truth {truth}");
            assert!(trace.r <= 3 * 2);
        }
    }
}
