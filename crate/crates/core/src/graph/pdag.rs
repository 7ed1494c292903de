use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::dag::{Dag, Edge};
use super::vertex_set::{VertexSet, MAX_VERTICES};
use crate::error::{Error, Result};

/// A partially directed graph.
///
/// Undirected pairs are stored as `(a, b)` with `a < b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pdag {
    d: usize,
    directed: BTreeSet<Edge>,
    undirected: BTreeSet<(usize, usize)>,
}

impl Pdag {
    pub fn new(
        d: usize,
        directed: impl IntoIterator<Item = Edge>,
        undirected: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Pdag> {
        if d > MAX_VERTICES {
            return Err(Error::TooManyVertices {
                d,
                max: MAX_VERTICES,
            });
        }
        let directed: BTreeSet<Edge> = directed.into_iter().collect();
        let undirected: BTreeSet<(usize, usize)> = undirected
            .into_iter()
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        let mut adj = BTreeSet::new();
        for &(a, b) in directed.iter().chain(undirected.iter()) {
            if a >= d || b >= d {
                return Err(Error::VertexOutOfRange { vertex: a.max(b), d });
            }
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            if !adj.insert((a.min(b), a.max(b))) {
                return Err(Error::InvalidCpdag(format!(
                    "vertices {} and {} carry more than one edge",
                    a + 1,
                    b + 1
                )));
            }
        }
        Ok(Pdag {
            d,
            directed,
            undirected,
        })
    }

    /// The pattern with every edge of `g` directed.
    pub fn from_dag(g: &Dag) -> Pdag {
        Pdag {
            d: g.n_vertices(),
            directed: g.edges().into_iter().collect(),
            undirected: BTreeSet::new(),
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.d
    }

    pub fn directed(&self) -> &BTreeSet<Edge> {
        &self.directed
    }

    pub fn undirected(&self) -> &BTreeSet<(usize, usize)> {
        &self.undirected
    }

    pub fn n_edges(&self) -> usize {
        self.directed.len() + self.undirected.len()
    }

    pub fn has_directed(&self, k: usize, j: usize) -> bool {
        self.directed.contains(&(k, j))
    }

    pub fn has_undirected(&self, a: usize, b: usize) -> bool {
        self.undirected.contains(&(a.min(b), a.max(b)))
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.has_undirected(a, b) || self.has_directed(a, b) || self.has_directed(b, a)
    }

    pub fn skeleton(&self) -> BTreeSet<(usize, usize)> {
        self.directed
            .iter()
            .map(|&(a, b)| (a.min(b), a.max(b)))
            .chain(self.undirected.iter().copied())
            .collect()
    }

    /// Status of the pair `(a, b)` with `a < b`.
    pub fn pair_status(&self, a: usize, b: usize) -> EdgeStatus {
        let (a, b) = (a.min(b), a.max(b));
        if self.has_undirected(a, b) {
            EdgeStatus::Undirected
        } else if self.has_directed(a, b) {
            EdgeStatus::Forward
        } else if self.has_directed(b, a) {
            EdgeStatus::Backward
        } else {
            EdgeStatus::Absent
        }
    }

    fn orient(&mut self, k: usize, j: usize) {
        self.undirected.remove(&(k.min(j), k.max(j)));
        self.directed.insert((k, j));
    }

    fn parents_directed(&self, j: usize) -> VertexSet {
        self.directed
            .iter()
            .filter(|&&(_, t)| t == j)
            .map(|&(s, _)| s)
            .collect()
    }

    fn undirected_neighbours(&self, v: usize) -> VertexSet {
        self.undirected
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }
}

/// Edge status of an unordered vertex pair `(a, b)`, `a < b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeStatus {
    Absent,
    Undirected,
    /// `a -> b`
    Forward,
    /// `b -> a`
    Backward,
}

/// A completed PDAG: the canonical representative of a Markov equivalence class.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cpdag(Pdag);

impl Cpdag {
    /// Validate that `pdag` is the completed PDAG of some DAG.
    pub fn try_from_pdag(pdag: Pdag) -> Result<Cpdag> {
        let members = super::mec::enumerate_extensions(&pdag, Some(1));
        if members.is_empty() {
            return Err(Error::InvalidCpdag(
                "no DAG in any equivalence class has this completed pattern".into(),
            ));
        }
        Ok(Cpdag(pdag))
    }

    pub fn as_pdag(&self) -> &Pdag {
        &self.0
    }

    pub fn n_vertices(&self) -> usize {
        self.0.d
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&CpdagJson::from(self)).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Cpdag> {
        let raw: CpdagJson = serde_json::from_str(text)?;
        raw.try_into()
    }
}

impl std::ops::Deref for Cpdag {
    type Target = Pdag;

    fn deref(&self) -> &Pdag {
        &self.0
    }
}

/// Wire form: `{d, directed: [[k,j]...], undirected: [[a,b]...]}`, 1-based,
/// `a < b` within undirected pairs, both lists sorted.
#[derive(Serialize, Deserialize)]
struct CpdagJson {
    d: usize,
    directed: Vec<[usize; 2]>,
    undirected: Vec<[usize; 2]>,
}

impl From<&Cpdag> for CpdagJson {
    fn from(c: &Cpdag) -> Self {
        CpdagJson {
            d: c.0.d,
            directed: c.0.directed.iter().map(|&(k, j)| [k + 1, j + 1]).collect(),
            undirected: c.0.undirected.iter().map(|&(a, b)| [a + 1, b + 1]).collect(),
        }
    }
}

impl TryFrom<CpdagJson> for Cpdag {
    type Error = Error;

    fn try_from(raw: CpdagJson) -> Result<Cpdag> {
        let d = raw.d;
        let conv = |pairs: Vec<[usize; 2]>| -> Result<Vec<Edge>> {
            pairs
                .into_iter()
                .map(|[a, b]| {
                    if a == 0 || b == 0 || a > d || b > d {
                        Err(Error::VertexOutOfRange { vertex: a.max(b), d })
                    } else {
                        Ok((a - 1, b - 1))
                    }
                })
                .collect()
        };
        let pdag = Pdag::new(d, conv(raw.directed)?, conv(raw.undirected)?)?;
        Cpdag::try_from_pdag(pdag)
    }
}

/// The completed PDAG of the equivalence class of `g`.
///
/// Colliders are oriented from the unshielded colliders of `g`; the remaining
/// edges start undirected and Meek's rules R1-R4 run to a fixpoint.
pub fn cpdag_of(g: &Dag) -> Cpdag {
    let mut directed = BTreeSet::new();
    for (k, j, m) in g.unshielded_colliders() {
        directed.insert((k, j));
        directed.insert((m, j));
    }
    let undirected: BTreeSet<(usize, usize)> = g
        .skeleton()
        .into_iter()
        .filter(|&(a, b)| !directed.contains(&(a, b)) && !directed.contains(&(b, a)))
        .collect();
    let mut p = Pdag {
        d: g.n_vertices(),
        directed,
        undirected,
    };
    apply_meek_rules(&mut p);
    Cpdag(p)
}

/// Orient undirected edges by Meek's rules until nothing changes.
pub fn apply_meek_rules(p: &mut Pdag) {
    loop {
        let Some((k, j)) = find_orientable(p) else {
            break;
        };
        p.orient(k, j);
    }
}

fn find_orientable(p: &Pdag) -> Option<Edge> {
    for &(a, b) in &p.undirected {
        for (x, y) in [(a, b), (b, a)] {
            if meek_orients(p, x, y) {
                return Some((x, y));
            }
        }
    }
    None
}

/// Whether some rule forces the undirected edge `x - y` into `x -> y`.
fn meek_orients(p: &Pdag, x: usize, y: usize) -> bool {
    let pa_x = p.parents_directed(x);
    // R1: w -> x - y with w, y non-adjacent
    if pa_x.iter().any(|w| !p.adjacent(w, y)) {
        return true;
    }
    // R2: x -> w -> y
    let pa_y = p.parents_directed(y);
    if pa_y.iter().any(|w| p.has_directed(x, w)) {
        return true;
    }
    let und_x = p.undirected_neighbours(x);
    // R3: x - u -> y, x - v -> y, u and v non-adjacent
    let cand: Vec<usize> = und_x.intersection(pa_y).to_vec();
    for (i, &u) in cand.iter().enumerate() {
        for &v in &cand[i + 1..] {
            if !p.adjacent(u, v) {
                return true;
            }
        }
    }
    // R4: x - v -> u -> y, x adjacent to u, v and y non-adjacent
    for u in pa_y {
        if u == x || !p.adjacent(x, u) {
            continue;
        }
        for v in p.parents_directed(u) {
            if und_x.contains(v) && !p.adjacent(v, y) {
                return true;
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
    fn collider_is_fully_directed() {
        let c = cpdag_of(&parse_dag("[∅|13|∅]").unwrap());
        assert_eq!(c.directed().len(), 2);
        assert!(c.undirected().is_empty());
    }

    #[test]
    fn chain_is_fully_undirected() {
        let c = cpdag_of(&parse_dag("[∅|1|2]").unwrap());
        assert!(c.directed().is_empty());
        assert_eq!(c.undirected(), &BTreeSet::from([(0, 1), (1, 2)]));
    }

    #[test]
    fn complete_graph_is_fully_undirected() {
        let c = cpdag_of(&parse_dag("[∅|1|12]").unwrap());
        assert!(c.directed().is_empty());
        assert_eq!(c.undirected().len(), 3);
    }

    #[test]
    fn rule_one_propagates_below_collider() {
        // 1 -> 3 <- 2, 3 -> 4: the edge 3 -> 4 is compelled
        let c = cpdag_of(&parse_dag("[∅|∅|12|3]").unwrap());
        assert!(c.has_directed(2, 3));
        assert!(c.undirected().is_empty());
    }

    #[test]
    fn json_is_one_based_and_sorted() {
        let c = cpdag_of(&parse_dag("[∅|13|∅|2]").unwrap());
        assert_eq!(
            c.to_json(),
            r#"{"d":4,"directed":[[1,2],[2,4],[3,2]],"undirected":[]}"#
        );
        assert_eq!(Cpdag::from_json(&c.to_json()).unwrap(), c);
        let chain = cpdag_of(&parse_dag("[∅|1|2]").unwrap());
        assert_eq!(chain.to_json(), r#"{"d":3,"directed":[],"undirected":[[1,2],[2,3]]}"#);
    }

    #[test]
    fn invalid_cpdag_rejected() {
        // 1 -> 2 - 3 with 1, 3 non-adjacent: R1 would orient 2 -> 3
        let bad = r#"{"d":3,"directed":[[1,2]],"undirected":[[2,3]]}"#;
        assert!(matches!(Cpdag::from_json(bad), Err(Error::InvalidCpdag(_))));
        let out_of_range = r#"{"d":2,"directed":[[1,3]],"undirected":[]}"#;
        assert!(Cpdag::from_json(out_of_range).is_err());
    }
}
