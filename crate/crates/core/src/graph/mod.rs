//! DAGs, partially directed graphs, d-separation and Markov equivalence.

mod dag;
mod dsep;
mod mec;
mod neighbourhood;
mod notation;
mod pdag;
mod vertex_set;

pub use dag::{markov_equivalent, Dag, Edge};
pub use dsep::{d_separated, CiStatement};
pub(crate) use dsep::d_separated_unchecked;
pub use mec::mec_members;
pub use neighbourhood::{nb_minus, nb_plus, Neighbour};
pub use notation::{format_dag, parse_dag};
pub use pdag::{apply_meek_rules, cpdag_of, Cpdag, EdgeStatus, Pdag};
pub use vertex_set::{VertexSet, MAX_VERTICES};

/// Every DAG on `d` vertices, in increasing order of parent-set masks.
///
/// Intended for exhaustive checks; the count grows super-exponentially
/// (1, 3, 25, 543, 29281 for d = 1..5).
pub fn all_dags(d: usize) -> Vec<Dag> {
    let mut out = Vec::new();
    let mut parents = vec![VertexSet::EMPTY; d];
    fill_parents(0, d, &mut parents, &mut out);
    out.sort();
    out
}

fn fill_parents(j: usize, d: usize, parents: &mut Vec<VertexSet>, out: &mut Vec<Dag>) {
    if j == d {
        if let Ok(g) = Dag::from_parents(parents.clone()) {
            out.push(g);
        }
        return;
    }
    for pa in VertexSet::full(d).without(j).subsets() {
        parents[j] = pa;
        fill_parents(j + 1, d, parents, out);
    }
    parents[j] = VertexSet::EMPTY;
}
