use serde::{Deserialize, Serialize};

use super::dag::Dag;
use super::vertex_set::VertexSet;
use crate::error::{Error, Result};

/// A conditional-independence statement `a ⫫ b | c` over disjoint vertex sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CiStatement {
    a: VertexSet,
    b: VertexSet,
    c: VertexSet,
}

impl CiStatement {
    pub fn new(a: VertexSet, b: VertexSet, c: VertexSet) -> Result<Self> {
        if !a.is_disjoint(b) || !a.is_disjoint(c) || !b.is_disjoint(c) {
            return Err(Error::OverlappingSets);
        }
        Ok(CiStatement { a, b, c })
    }

    /// `i ⫫ j | c` for single vertices.
    pub fn pair(i: usize, j: usize, c: VertexSet) -> Result<Self> {
        CiStatement::new(VertexSet::singleton(i), VertexSet::singleton(j), c)
    }

    pub fn a(&self) -> VertexSet {
        self.a
    }

    pub fn b(&self) -> VertexSet {
        self.b
    }

    pub fn c(&self) -> VertexSet {
        self.c
    }

    pub fn swapped(&self) -> Self {
        CiStatement {
            a: self.b,
            b: self.a,
            c: self.c,
        }
    }
}

/// Whether `a` and `b` are d-separated by `c` in `g`.
pub fn d_separated(g: &Dag, a: VertexSet, b: VertexSet, c: VertexSet) -> Result<bool> {
    let stmt = CiStatement::new(a, b, c)?;
    let bound = a.union(b).union(c).bound();
    if bound > g.n_vertices() {
        return Err(Error::VertexOutOfRange {
            vertex: bound - 1,
            d: g.n_vertices(),
        });
    }
    Ok(d_separated_unchecked(g, &stmt))
}

/// Reachability over active trails; the statement is assumed valid for `g`.
pub(crate) fn d_separated_unchecked(g: &Dag, stmt: &CiStatement) -> bool {
    let reach = active_reachable(g, stmt.a, stmt.c);
    reach.is_disjoint(stmt.b)
}

/// Vertices connected to `sources` by an active trail given `cond`.
fn active_reachable(g: &Dag, sources: VertexSet, cond: VertexSet) -> VertexSet {
    let d = g.n_vertices();
    // colliders are open when they are in `cond` or have a descendant there
    let opens_collider = g.ancestral_closure(cond);
    let children: Vec<VertexSet> = (0..d).map(|v| g.children(v)).collect();

    // visited[v][0]: reached travelling up (from a child); [1]: travelling down
    let mut visited = vec![[false; 2]; d];
    let mut stack: Vec<(usize, usize)> = sources.iter().map(|v| (v, 0)).collect();
    let mut reachable = VertexSet::EMPTY;

    while let Some((v, dir)) = stack.pop() {
        if visited[v][dir] {
            continue;
        }
        visited[v][dir] = true;
        if !cond.contains(v) {
            reachable.insert(v);
        }
        let blocked = cond.contains(v);
        if dir == 0 {
            if !blocked {
                stack.extend(g.parents(v).iter().map(|p| (p, 0)));
                stack.extend(children[v].iter().map(|c| (c, 1)));
            }
        } else {
            if !blocked {
                stack.extend(children[v].iter().map(|c| (c, 1)));
            }
            if opens_collider.contains(v) {
                stack.extend(g.parents(v).iter().map(|p| (p, 0)));
            }
        }
    }
    reachable
}
