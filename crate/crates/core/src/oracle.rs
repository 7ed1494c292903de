//! Conditional-independence oracles and the population-level comparison test.

use crate::graph::{d_separated_unchecked, CiStatement, Dag, VertexSet};
use crate::search::{Comparison, ComparisonTest, Decision};

/// Answers conditional-independence queries about a fixed distribution.
pub trait CiOracle {
    fn n_vertices(&self) -> usize;

    /// Whether `stmt.a ⫫ stmt.b | stmt.c` holds.
    fn indep(&self, stmt: &CiStatement) -> bool;
}

/// Independence as read off a ground-truth DAG by d-separation.
#[derive(Clone, Debug)]
pub struct DsepOracle {
    truth: Dag,
}

impl DsepOracle {
    pub fn new(truth: Dag) -> Self {
        DsepOracle { truth }
    }

    pub fn truth(&self) -> &Dag {
        &self.truth
    }
}

impl CiOracle for DsepOracle {
    fn n_vertices(&self) -> usize {
        self.truth.n_vertices()
    }

    fn indep(&self, stmt: &CiStatement) -> bool {
        d_separated_unchecked(&self.truth, stmt)
    }
}

impl<O: CiOracle + ?Sized> CiOracle for &O {
    fn n_vertices(&self) -> usize {
        (**self).n_vertices()
    }

    fn indep(&self, stmt: &CiStatement) -> bool {
        (**self).indep(stmt)
    }
}

/// Local Markov check: every vertex is independent of its non-descendants
/// (other than its parents) given its parents.
pub fn is_markov<O: CiOracle + ?Sized>(g: &Dag, oracle: &O) -> bool {
    (0..g.n_vertices()).all(|j| {
        let pa = g.parents(j);
        let rest = g.non_descendants(j).difference(pa);
        rest.is_empty()
            || oracle.indep(
                &CiStatement::new(VertexSet::singleton(j), rest, pa).expect("disjoint by construction"),
            )
    })
}

/// Whether the d-separation statements of `g` coincide with the oracle's,
/// over all vertex pairs and all conditioning sets.
pub fn is_perfect_map<O: CiOracle + ?Sized>(g: &Dag, oracle: &O) -> bool {
    pairwise_statements(g.n_vertices())
        .all(|stmt| d_separated_unchecked(g, &stmt) == oracle.indep(&stmt))
}

/// All statements `i ⫫ j | C` with `i < j` and `C` ranging over subsets of the rest.
pub fn pairwise_statements(d: usize) -> impl Iterator<Item = CiStatement> {
    (0..d).flat_map(move |i| {
        (i + 1..d).flat_map(move |j| {
            VertexSet::full(d)
                .without(i)
                .without(j)
                .subsets()
                .map(move |c| CiStatement::pair(i, j, c).expect("disjoint by construction"))
        })
    })
}

/// Population comparison of two DAG models given a CI oracle.
///
/// For pairs that differ in exactly one edge `k -> j` the decision is the
/// local one: keep the edge iff `k` and `j` are dependent given the other
/// parents of `j`. All other pairs follow the global rules: prefer the first
/// model if it is Markov and the second is not, or if both are Markov and the
/// first has fewer edges. Remaining cases retain the second (incumbent) model.
#[derive(Clone, Debug)]
pub struct PopulationTest<O> {
    oracle: O,
}

impl<O: CiOracle> PopulationTest<O> {
    pub fn new(oracle: O) -> Self {
        PopulationTest { oracle }
    }

    pub fn oracle(&self) -> &O {
        &self.oracle
    }

    pub fn decide(&self, g: &Dag, h: &Dag) -> Decision {
        if let Some(decision) = self.single_edge_decision(g, h) {
            return decision;
        }
        let g_markov = is_markov(g, &self.oracle);
        let h_markov = is_markov(h, &self.oracle);
        let prefer_g = (g_markov && !h_markov) || (g_markov && h_markov && g.n_edges() < h.n_edges());
        if prefer_g {
            Decision::PreferG
        } else {
            Decision::PreferH
        }
    }

    fn single_edge_decision(&self, g: &Dag, h: &Dag) -> Option<Decision> {
        let diff = single_edge_difference(g, h)?;
        let stmt = CiStatement::pair(diff.tail, diff.head, diff.other_parents).ok()?;
        let keep_edge = !self.oracle.indep(&stmt);
        Some(if keep_edge == diff.first_has_edge {
            Decision::PreferG
        } else {
            Decision::PreferH
        })
    }
}

struct EdgeDifference {
    tail: usize,
    head: usize,
    other_parents: VertexSet,
    first_has_edge: bool,
}

/// The single directed edge by which `g` and `h` differ, if there is exactly one.
fn single_edge_difference(g: &Dag, h: &Dag) -> Option<EdgeDifference> {
    if g.n_vertices() != h.n_vertices() {
        return None;
    }
    let mut diff = None;
    for j in 0..g.n_vertices() {
        let (pg, ph) = (g.parents(j), h.parents(j));
        if pg == ph {
            continue;
        }
        if diff.is_some() {
            return None;
        }
        let (extra_g, extra_h) = (pg.difference(ph), ph.difference(pg));
        diff = match (extra_g.len(), extra_h.len()) {
            (1, 0) => Some(EdgeDifference {
                tail: extra_g.iter().next()?,
                head: j,
                other_parents: ph,
                first_has_edge: true,
            }),
            (0, 1) => Some(EdgeDifference {
                tail: extra_h.iter().next()?,
                head: j,
                other_parents: pg,
                first_has_edge: false,
            }),
            _ => return None,
        };
    }
    diff
}

impl<O: CiOracle> ComparisonTest for PopulationTest<O> {
    fn n_vertices(&self) -> usize {
        self.oracle.n_vertices()
    }

    fn compare(&self, g: &Dag, h: &Dag) -> crate::Result<Comparison> {
        Ok(Comparison {
            decision: self.decide(g, h),
            log_odds: None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_dag;

    fn dag(s: &str) -> Dag {
        parse_dag(s).unwrap()
    }

    #[test]
    fn markov_examples() {
        let oracle = DsepOracle::new(dag("[∅|1|2]"));
        assert!(is_markov(&dag("[∅|1|12]"), &oracle));
        assert!(!is_markov(&Dag::empty(3), &oracle));
        assert!(is_markov(&dag("[∅|1|2]"), &oracle));
    }

    #[test]
    fn perfect_map_examples() {
        let chain = DsepOracle::new(dag("[∅|1|2]"));
        assert!(is_perfect_map(&dag("[∅|1|2]"), &chain));
        assert!(!is_perfect_map(&dag("[∅|1|12]"), &chain));
        let collider = DsepOracle::new(dag("[∅|13|∅]"));
        assert!(!is_perfect_map(&dag("[∅|1|2]"), &collider));
    }

    #[test]
    fn population_test_examples() {
        let pt = PopulationTest::new(DsepOracle::new(dag("[∅|1|2]")));
        assert_eq!(pt.decide(&dag("[∅|1|2]"), &Dag::empty(3)), Decision::PreferG);
        assert_eq!(pt.decide(&dag("[∅|1|2]"), &dag("[∅|1|12]")), Decision::PreferG);
        assert_eq!(pt.decide(&dag("[∅|13|∅]"), &dag("[∅|1|2]")), Decision::PreferH);
    }

    #[test]
    fn ties_retain_incumbent() {
        let pt = PopulationTest::new(DsepOracle::new(dag("[∅|1|12]")));
        // neither Markov, two edges apart
        assert_eq!(pt.decide(&dag("[∅|1|∅]"), &dag("[∅|∅|2]")), Decision::PreferH);
        // both Markov, equal edge counts
        assert_eq!(pt.decide(&dag("[∅|1|12]"), &dag("[23|3|∅]")), Decision::PreferH);
    }

    #[test]
    fn single_edge_pairs_use_the_local_statement() {
        // truth complete: neither 1->2 nor the empty graph is Markov, but the
        // edge is locally supported
        let pt = PopulationTest::new(DsepOracle::new(dag("[∅|1|12]")));
        assert_eq!(pt.decide(&dag("[∅|1|∅]"), &Dag::empty(3)), Decision::PreferG);
        assert_eq!(pt.decide(&Dag::empty(3), &dag("[∅|1|∅]")), Decision::PreferH);
    }

    #[test]
    fn statement_count() {
        // pairs * 2^(d-2)
        assert_eq!(pairwise_statements(4).count(), 6 * 4);
    }
}
