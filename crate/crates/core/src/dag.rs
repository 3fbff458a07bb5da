//! Prerequisite DAG export. An edge `p -> d` means `p` is a prerequisite
//! of `d`.

use std::fmt::Write as _;

use petgraph::algo::toposort;
use petgraph::graph::DiGraph;
use serde::Serialize;
use thiserror::Error;

use crate::corpus::ConceptSet;
use crate::matrix::PrereqMatrix;

#[derive(Debug, Error)]
pub enum DagError {
    /// Cannot happen for an ordering-filtered matrix.
    #[error("internal invariant violated: prerequisite graph has a cycle through {0:?}")]
    Cycle(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DagEdge {
    pub from: String,
    pub to: String,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Dag {
    pub theta: f64,
    pub nodes: Vec<String>,
    pub edges: Vec<DagEdge>,
    /// Node names in a valid teaching order.
    pub topological_order: Vec<String>,
}

/// Edges `c_j -> c_i` for every entry `(i, j)` above `theta`, verified
/// acyclic by topological sort.
pub fn export_dag(m: &PrereqMatrix, theta: f64, concepts: &ConceptSet) -> Result<Dag, DagError> {
    let n = m.n();
    let mut graph = DiGraph::<usize, f64>::with_capacity(n, 0);
    let nodes: Vec<_> = (0..n).map(|i| graph.add_node(i)).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let w = m.get(i, j);
            if i != j && w > theta {
                graph.add_edge(nodes[j], nodes[i], w);
                edges.push(DagEdge {
                    from: concepts.id(j).to_string(),
                    to: concepts.id(i).to_string(),
                    weight: w,
                });
            }
        }
    }
    let order = toposort(&graph, None)
        .map_err(|c| DagError::Cycle(concepts.id(graph[c.node_id()]).to_string()))?;
    Ok(Dag {
        theta,
        nodes: concepts.ids().map(str::to_string).collect(),
        edges,
        topological_order: order.into_iter().map(|v| concepts.id(graph[v]).to_string()).collect(),
    })
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

impl Dag {
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph prerequisites {\n    rankdir=LR;\n");
        for n in &self.nodes {
            let _ = writeln!(out, "    {};", quote(n));
        }
        for e in &self.edges {
            let _ = writeln!(
                out,
                "    {} -> {} [label=\"{:.4}\"];",
                quote(&e.from),
                quote(&e.to),
                e.weight
            );
        }
        out.push_str("}\n");
        out
    }
}
