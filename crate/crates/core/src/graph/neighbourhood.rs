use std::collections::BTreeSet;

use super::dag::{Dag, Edge};
use super::mec::mec_members;
use super::notation::format_dag;
use super::pdag::{cpdag_of, Cpdag};

/// A neighbouring DAG together with the edge that was added or removed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Neighbour {
    pub dag: Dag,
    pub edge: Edge,
}

/// One representative per equivalence class reachable by adding a single edge
/// to some member of the class of `g`.
///
/// Representatives are the first candidates in scan order: by the modified
/// edge `(j, k)` (head first), then by the serialized parent sets.
pub fn nb_plus(g: &Dag) -> Vec<Neighbour> {
    neighbours(g, |h, out| {
        let d = h.n_vertices();
        for j in 0..d {
            for k in 0..d {
                if k != j && !h.has_edge(k, j) {
                    if let Ok(next) = h.add_edge(k, j) {
                        out.push(Neighbour {
                            dag: next,
                            edge: (k, j),
                        });
                    }
                }
            }
        }
    })
}

/// One representative per equivalence class reachable by removing a single
/// edge from some member of the class of `g`. Same ordering as [`nb_plus`].
pub fn nb_minus(g: &Dag) -> Vec<Neighbour> {
    neighbours(g, |h, out| {
        for (k, j) in h.edges() {
            let next = h.remove_edge(k, j).expect("edge endpoints are valid");
            out.push(Neighbour {
                dag: next,
                edge: (k, j),
            });
        }
    })
}

fn neighbours(g: &Dag, expand: impl Fn(&Dag, &mut Vec<Neighbour>)) -> Vec<Neighbour> {
    let members = mec_members(&cpdag_of(g)).expect("completed pattern of a DAG has members");
    let mut candidates = Vec::new();
    for h in &members {
        expand(h, &mut candidates);
    }
    let mut keyed: Vec<((usize, usize), String, Neighbour)> = candidates
        .into_iter()
        .map(|nb| ((nb.edge.1, nb.edge.0), format_dag(&nb.dag), nb))
        .collect();
    keyed.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));

    let mut seen: BTreeSet<Cpdag> = BTreeSet::new();
    keyed
        .into_iter()
        .filter_map(|(_, _, nb)| seen.insert(cpdag_of(&nb.dag)).then_some(nb))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{markov_equivalent, parse_dag};

    #[test]
    fn two_node_empty_graph_has_one_addition_class() {
        let nbs = nb_plus(&Dag::empty(2));
        assert_eq!(nbs.len(), 1);
        // head-first scan order picks 2 -> 1 as the representative
        assert_eq!(nbs[0].dag, parse_dag("[2|∅]").unwrap());
        assert!(markov_equivalent(&nbs[0].dag, &parse_dag("[∅|1]").unwrap()).unwrap());
    }

    #[test]
    fn single_edge_neighbourhood_contains_collider() {
        let g = parse_dag("[∅|1|∅]").unwrap();
        let v = parse_dag("[∅|13|∅]").unwrap();
        let nbs = nb_plus(&g);
        assert!(nbs.iter().any(|nb| markov_equivalent(&nb.dag, &v).unwrap()));
        // skeletons {12, 23} and {12, 13}, each with and without a collider
        assert_eq!(nbs.len(), 4);
        assert!(nbs.iter().all(|nb| nb.dag.n_edges() == 2));
    }

    #[test]
    fn complete_graph_has_no_additions() {
        assert!(nb_plus(&parse_dag("[∅|1|12]").unwrap()).is_empty());
    }

    #[test]
    fn removals_from_chain() {
        let nbs = nb_minus(&parse_dag("[∅|1|2]").unwrap());
        assert_eq!(nbs.len(), 2);
        assert!(nbs.iter().all(|nb| nb.dag.n_edges() == 1));
        assert!(nb_minus(&Dag::empty(3)).is_empty());
    }
}
