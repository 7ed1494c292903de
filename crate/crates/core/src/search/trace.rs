use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{Comparison, Decision};
use crate::graph::{format_dag, Dag, Edge, Neighbour};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Forward,
    Backward,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Iterate {
    pub t: usize,
    pub dag: Dag,
    pub phase: Phase,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonRecord {
    /// Index of the incumbent iterate.
    pub t: usize,
    pub phase: Phase,
    pub challenger: Dag,
    pub incumbent: Dag,
    /// Edge added (forward) or removed (backward) to form the challenger.
    pub edge: Edge,
    pub decision: Decision,
    pub log_odds: Option<f64>,
}

/// Ordered record of the search path and every comparison made along it.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchTrace {
    pub iterates: Vec<Iterate>,
    pub comparisons: Vec<ComparisonRecord>,
    /// Index of the last forward iterate.
    pub t0: usize,
    /// Index of the final iterate.
    pub r: usize,
}

impl SearchTrace {
    pub(crate) fn starting_at(g: Dag) -> SearchTrace {
        SearchTrace {
            iterates: vec![Iterate {
                t: 0,
                dag: g,
                phase: Phase::Forward,
            }],
            comparisons: Vec::new(),
            t0: 0,
            r: 0,
        }
    }

    pub(crate) fn last_index(&self) -> usize {
        self.iterates.len() - 1
    }

    pub(crate) fn push_iterate(&mut self, dag: Dag, phase: Phase) {
        let t = self.iterates.len();
        self.iterates.push(Iterate { t, dag, phase });
    }

    pub(crate) fn push_comparison(
        &mut self,
        t: usize,
        phase: Phase,
        nb: &Neighbour,
        incumbent: &Dag,
        cmp: Comparison,
    ) {
        self.comparisons.push(ComparisonRecord {
            t,
            phase,
            challenger: nb.dag.clone(),
            incumbent: incumbent.clone(),
            edge: nb.edge,
            decision: cmp.decision,
            log_odds: cmp.log_odds,
        });
    }

    /// The final DAG.
    pub fn result(&self) -> &Dag {
        &self.iterates[self.r].dag
    }

    /// Comparisons whose challenger became the next iterate.
    pub fn accepted(&self) -> impl Iterator<Item = &ComparisonRecord> {
        self.comparisons.iter().filter(move |c| {
            c.decision.prefers_g()
                && self
                    .iterates
                    .get(c.t + 1)
                    .is_some_and(|next| next.dag == c.challenger)
        })
    }

    /// One JSON object per line: the starting graph and every accepted move
    /// (`"record": "iterate"`), every comparison (`"record": "comparison"`),
    /// in the order they happened, then a closing `"summary"` line.
    /// Vertex indices and graphs use the 1-based text notation.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        let mut line = |v: serde_json::Value| {
            writeln!(out, "{v}").expect("writing to a String");
        };
        let iterate = |it: &Iterate| {
            json!({
                "record": "iterate",
                "t": it.t,
                "phase": it.phase,
                "dag": format_dag(&it.dag),
            })
        };
        line(iterate(&self.iterates[0]));
        let mut next_iterate = 1;
        for c in &self.comparisons {
            // iterates produced before this comparison's round
            while next_iterate < self.iterates.len() && next_iterate <= c.t {
                line(iterate(&self.iterates[next_iterate]));
                next_iterate += 1;
            }
            line(json!({
                "record": "comparison",
                "t": c.t,
                "phase": c.phase,
                "challenger": format_dag(&c.challenger),
                "incumbent": format_dag(&c.incumbent),
                "edge": [c.edge.0 + 1, c.edge.1 + 1],
                "decision": c.decision,
                "log_odds": c.log_odds,
            }));
        }
        for it in &self.iterates[next_iterate..] {
            line(iterate(it));
        }
        line(json!({
            "record": "summary",
            "t0": self.t0,
            "r": self.r,
            "result": format_dag(self.result()),
        }));
        out
    }
}
