use std::collections::BTreeSet;
use std::fmt;

use super::vertex_set::{VertexSet, MAX_VERTICES};
use crate::error::{Error, Result};

/// A directed edge `from -> to` (0-based).
pub type Edge = (usize, usize);

/// A directed acyclic graph stored as one parent set per vertex.
///
/// Construction validates acyclicity, so every value of this type is a DAG.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dag {
    parents: Vec<VertexSet>,
}

impl Dag {
    /// The graph on `d` vertices with no edges.
    ///
    /// Panics if `d` exceeds [`MAX_VERTICES`].
    pub fn empty(d: usize) -> Dag {
        assert!(d <= MAX_VERTICES, "at most {MAX_VERTICES} vertices supported");
        Dag {
            parents: vec![VertexSet::EMPTY; d],
        }
    }

    /// The complete DAG consistent with `order` (earlier vertices point to later ones).
    pub fn complete(order: &[usize]) -> Result<Dag> {
        let d = order.len();
        let mut parents = vec![VertexSet::EMPTY; d];
        let mut seen = VertexSet::EMPTY;
        for &v in order {
            if v >= d {
                return Err(Error::VertexOutOfRange { vertex: v, d });
            }
            parents[v] = seen;
            seen.insert(v);
        }
        Dag::from_parents(parents)
    }

    pub fn from_parents(parents: Vec<VertexSet>) -> Result<Dag> {
        let d = parents.len();
        if d > MAX_VERTICES {
            return Err(Error::TooManyVertices {
                d,
                max: MAX_VERTICES,
            });
        }
        for (j, &pa) in parents.iter().enumerate() {
            if pa.contains(j) {
                return Err(Error::SelfLoop(j));
            }
            if pa.bound() > d {
                return Err(Error::VertexOutOfRange {
                    vertex: pa.bound() - 1,
                    d,
                });
            }
        }
        let g = Dag { parents };
        if g.try_topological_order().is_none() {
            return Err(Error::Cyclic);
        }
        Ok(g)
    }

    pub fn from_edges(d: usize, edges: &[Edge]) -> Result<Dag> {
        let mut parents = vec![VertexSet::EMPTY; d];
        for &(k, j) in edges {
            if k >= d || j >= d {
                return Err(Error::VertexOutOfRange { vertex: k.max(j), d });
            }
            parents[j].insert(k);
        }
        Dag::from_parents(parents)
    }

    pub fn n_vertices(&self) -> usize {
        self.parents.len()
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n_vertices())
    }

    pub fn parents(&self, j: usize) -> VertexSet {
        self.parents[j]
    }

    pub fn parent_sets(&self) -> &[VertexSet] {
        &self.parents
    }

    pub fn children(&self, k: usize) -> VertexSet {
        (0..self.n_vertices())
            .filter(|&j| self.parents[j].contains(k))
            .collect()
    }

    pub fn has_edge(&self, k: usize, j: usize) -> bool {
        self.parents[j].contains(k)
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.has_edge(a, b) || self.has_edge(b, a)
    }

    pub fn n_edges(&self) -> usize {
        self.parents.iter().map(|p| p.len()).sum()
    }

    /// Edges sorted lexicographically by `(from, to)`.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out: Vec<Edge> = self
            .parents
            .iter()
            .enumerate()
            .flat_map(|(j, pa)| pa.iter().map(move |k| (k, j)))
            .collect();
        out.sort_unstable();
        out
    }

    /// Per-vertex parent counts.
    pub fn sparsity(&self) -> Vec<usize> {
        self.parents.iter().map(|p| p.len()).collect()
    }

    /// Topological order with the smallest available index first.
    pub fn topological_order(&self) -> Vec<usize> {
        self.try_topological_order()
            .expect("Dag invariant: graph is acyclic")
    }

    fn try_topological_order(&self) -> Option<Vec<usize>> {
        let d = self.n_vertices();
        let mut placed = VertexSet::EMPTY;
        let mut order = Vec::with_capacity(d);
        while order.len() < d {
            let next = (0..d).find(|&j| !placed.contains(j) && self.parents[j].is_subset(placed))?;
            placed.insert(next);
            order.push(next);
        }
        Some(order)
    }

    /// `set` together with all its ancestors.
    pub fn ancestral_closure(&self, set: VertexSet) -> VertexSet {
        let mut closure = set;
        let mut frontier = set;
        while !frontier.is_empty() {
            let mut next = VertexSet::EMPTY;
            for v in frontier {
                next = next.union(self.parents[v]);
            }
            frontier = next.difference(closure);
            closure = closure.union(frontier);
        }
        closure
    }

    /// Strict descendants of `v`.
    pub fn descendants(&self, v: usize) -> VertexSet {
        let d = self.n_vertices();
        let mut desc = VertexSet::EMPTY;
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            for c in 0..d {
                if self.parents[c].contains(u) && !desc.contains(c) {
                    desc.insert(c);
                    stack.push(c);
                }
            }
        }
        desc
    }

    /// Vertices that are neither `v` nor descendants of `v`.
    pub fn non_descendants(&self, v: usize) -> VertexSet {
        self.vertices().difference(self.descendants(v)).without(v)
    }

    fn check_pair(&self, k: usize, j: usize) -> Result<()> {
        let d = self.n_vertices();
        for v in [k, j] {
            if v >= d {
                return Err(Error::VertexOutOfRange { vertex: v, d });
            }
        }
        if k == j {
            return Err(Error::SelfLoop(k));
        }
        Ok(())
    }

    /// The graph with `k -> j` added; unchanged if the edge is present.
    pub fn add_edge(&self, k: usize, j: usize) -> Result<Dag> {
        self.check_pair(k, j)?;
        if self.has_edge(k, j) {
            return Ok(self.clone());
        }
        if self.has_edge(j, k) || self.descendants(j).contains(k) {
            return Err(Error::Cycle { from: k, to: j });
        }
        let mut g = self.clone();
        g.parents[j].insert(k);
        Ok(g)
    }

    /// The graph with `k -> j` removed; unchanged if the edge is absent.
    pub fn remove_edge(&self, k: usize, j: usize) -> Result<Dag> {
        self.check_pair(k, j)?;
        let mut g = self.clone();
        g.parents[j].remove(k);
        Ok(g)
    }

    /// Replace the parent set of `j`, validating acyclicity.
    pub fn with_parents(&self, j: usize, parents: VertexSet) -> Result<Dag> {
        let mut ps = self.parents.clone();
        ps[j] = parents;
        Dag::from_parents(ps)
    }

    /// Unordered adjacencies as `(a, b)` pairs with `a < b`.
    pub fn skeleton(&self) -> BTreeSet<(usize, usize)> {
        self.edges()
            .into_iter()
            .map(|(k, j)| (k.min(j), k.max(j)))
            .collect()
    }

    /// Triples `(k, j, m)` with `k -> j <- m`, `k < m` and `k`, `m` non-adjacent.
    pub fn unshielded_colliders(&self) -> BTreeSet<(usize, usize, usize)> {
        let mut out = BTreeSet::new();
        for (j, &pa) in self.parents.iter().enumerate() {
            let pv = pa.to_vec();
            for (i, &k) in pv.iter().enumerate() {
                for &m in &pv[i + 1..] {
                    if !self.adjacent(k, m) {
                        out.insert((k, j, m));
                    }
                }
            }
        }
        out
    }
}

impl fmt::Debug for Dag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dag{}", super::notation::format_dag(self))
    }
}

impl fmt::Display for Dag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::notation::format_dag(self))
    }
}

/// Same skeleton and same unshielded colliders.
pub fn markov_equivalent(g: &Dag, h: &Dag) -> Result<bool> {
    if g.n_vertices() != h.n_vertices() {
        return Err(Error::VertexCountMismatch(g.n_vertices(), h.n_vertices()));
    }
    Ok(g.skeleton() == h.skeleton() && g.unshielded_colliders() == h.unshielded_colliders())
}
