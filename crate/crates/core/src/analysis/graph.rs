use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use petgraph::algo::{is_cyclic_directed, tarjan_scc};
use petgraph::graph::{DiGraph, NodeIndex};
use serde::Serialize;

use crate::syntax::{program_atoms, Atom, Program};

/// Edge `(p, q)` when some rule has `p` in its head and `q` in a body expression.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DependencyGraph {
    pub vertices: BTreeSet<Atom>,
    pub edges: BTreeSet<(Atom, Atom)>,
}

pub fn dependency_graph(p: &Program) -> DependencyGraph {
    let mut edges = BTreeSet::new();
    for rule in p.rules() {
        for h in rule.head() {
            for a in rule.body() {
                for e in a.elements() {
                    edges.insert((h.clone(), e.atom.clone()));
                }
            }
        }
    }
    DependencyGraph {
        vertices: program_atoms(p),
        edges,
    }
}

impl DependencyGraph {
    fn to_petgraph(&self) -> (DiGraph<&Atom, ()>, BTreeMap<&Atom, NodeIndex>) {
        let mut g = DiGraph::new();
        let index: BTreeMap<&Atom, NodeIndex> = self.vertices.iter().map(|v| (v, g.add_node(v))).collect();
        for (from, to) in &self.edges {
            g.add_edge(index[from], index[to], ());
        }
        (g, index)
    }

    /// Strongly connected component id of every vertex.
    fn components(&self) -> BTreeMap<&Atom, usize> {
        let (g, _) = self.to_petgraph();
        tarjan_scc(&g)
            .into_iter()
            .enumerate()
            .flat_map(|(id, scc)| scc.into_iter().map(move |n| (n, id)))
            .map(|(n, id)| (g[n], id))
            .collect()
    }

    /// Graphviz source with atoms as node ids, vertices and edges sorted.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph dependencies {\n");
        for v in &self.vertices {
            let _ = writeln!(out, "  \"{v}\";");
        }
        for (from, to) in &self.edges {
            let _ = writeln!(out, "  \"{from}\" -> \"{to}\";");
        }
        out.push_str("}\n");
        out
    }
}

/// A self-loop counts as a cycle.
pub fn is_acyclic(g: &DependencyGraph) -> bool {
    !is_cyclic_directed(&g.to_petgraph().0)
}

/// No atom of a non-empty body expression shares a strongly connected
/// component with a head atom of its rule.
pub fn is_aggregate_stratified(p: &Program) -> bool {
    let g = dependency_graph(p);
    let component = g.components();
    p.rules().iter().all(|rule| {
        rule.body().iter().all(|a| {
            a.elements()
                .iter()
                .all(|e| rule.head().iter().all(|h| component[h] != component[&e.atom]))
        })
    })
}
