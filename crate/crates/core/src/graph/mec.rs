use super::dag::Dag;
use super::pdag::{cpdag_of, Cpdag, Pdag};
use super::vertex_set::VertexSet;
use crate::error::{Error, Result};

/// All DAGs whose completed PDAG is `c`, sorted by parent sets.
pub fn mec_members(c: &Cpdag) -> Result<Vec<Dag>> {
    let members = enumerate_extensions(c.as_pdag(), None);
    if members.is_empty() {
        return Err(Error::InvalidCpdag("no consistent DAG extension".into()));
    }
    Ok(members)
}

/// DAGs obtained by orienting the undirected edges of `p` whose completed PDAG
/// equals `p` itself. Stops after `limit` members when given.
pub(crate) fn enumerate_extensions(p: &Pdag, limit: Option<usize>) -> Vec<Dag> {
    let d = p.n_vertices();
    let mut parents = vec![VertexSet::EMPTY; d];
    for &(k, j) in p.directed() {
        parents[j].insert(k);
    }
    let undirected: Vec<(usize, usize)> = p.undirected().iter().copied().collect();
    let mut out = Vec::new();
    let mut search = Extension {
        pdag: p,
        undirected: &undirected,
        limit: limit.unwrap_or(usize::MAX),
        out: &mut out,
    };
    if search.consistent(&parents) {
        search.recurse(0, &mut parents);
    }
    out.sort();
    out
}

struct Extension<'a> {
    pdag: &'a Pdag,
    undirected: &'a [(usize, usize)],
    limit: usize,
    out: &'a mut Vec<Dag>,
}

impl Extension<'_> {
    fn recurse(&mut self, idx: usize, parents: &mut Vec<VertexSet>) {
        if self.out.len() >= self.limit {
            return;
        }
        if idx == self.undirected.len() {
            if let Ok(g) = Dag::from_parents(parents.clone()) {
                if cpdag_of(&g).as_pdag() == self.pdag {
                    self.out.push(g);
                }
            }
            return;
        }
        let (a, b) = self.undirected[idx];
        for (k, j) in [(a, b), (b, a)] {
            parents[j].insert(k);
            if self.introduces_no_collider(parents, k, j) && !reaches(parents, j, k) {
                self.recurse(idx + 1, parents);
            }
            parents[j].remove(k);
        }
    }

    fn adjacent(&self, a: usize, b: usize) -> bool {
        self.pdag.adjacent(a, b)
    }

    fn consistent(&self, parents: &[VertexSet]) -> bool {
        (0..parents.len()).all(|j| {
            parents[j]
                .iter()
                .all(|k| !reaches(parents, j, k))
        })
    }

    /// Adding `k -> j` must not form an unshielded collider absent from the pattern.
    fn introduces_no_collider(&self, parents: &[VertexSet], k: usize, j: usize) -> bool {
        parents[j]
            .without(k)
            .iter()
            .all(|m| self.adjacent(k, m) || (self.pdag.has_directed(k, j) && self.pdag.has_directed(m, j)))
    }
}

/// Whether a directed path `from ~> to` exists.
fn reaches(parents: &[VertexSet], from: usize, to: usize) -> bool {
    // walk backwards from `to` through parents looking for `from`
    let mut seen = VertexSet::singleton(to);
    let mut stack = vec![to];
    while let Some(v) = stack.pop() {
        for p in parents[v] {
            if p == from {
                return true;
            }
            if !seen.contains(p) {
                seen.insert(p);
                stack.push(p);
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_dag;

    #[test]
    fn chain_class_has_three_members() {
        let c = cpdag_of(&parse_dag("[∅|1|2]").unwrap());
        let members = mec_members(&c).unwrap();
        assert_eq!(members.len(), 3);
        assert!(!members.contains(&parse_dag("[∅|13|∅]").unwrap()));
    }

    #[test]
    fn collider_class_is_singleton() {
        let g = parse_dag("[∅|13|∅]").unwrap();
        assert_eq!(mec_members(&cpdag_of(&g)).unwrap(), vec![g]);
    }

    #[test]
    fn complete_class_has_one_member_per_order() {
        let c = cpdag_of(&parse_dag("[∅|1|12]").unwrap());
        assert_eq!(mec_members(&c).unwrap().len(), 6);
    }

    #[test]
    fn empty_graph_class() {
        let c = cpdag_of(&Dag::empty(4));
        assert_eq!(mec_members(&c).unwrap(), vec![Dag::empty(4)]);
    }
}
