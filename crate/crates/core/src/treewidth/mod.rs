//! Tree decompositions and two independent exact treewidth algorithms.

mod bnb;
mod dp;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex, VertexSet};

pub use bnb::treewidth_bnb;
pub use dp::exact_treewidth;

/// Default vertex cap of the subset DP.
pub const DEFAULT_CAP: usize = 14;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeDecomposition {
    pub tree: Graph,
    pub bags: BTreeMap<Vertex, VertexSet>,
}

/// Outcome of each decomposition condition, plus whether `tree` is a tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub is_tree: bool,
    pub covers_vertices: bool,
    pub covers_edges: bool,
    pub subtrees_connected: bool,
}

impl DecompositionReport {
    pub fn ok(&self) -> bool {
        self.is_tree && self.covers_vertices && self.covers_edges && self.subtrees_connected
    }
}

impl TreeDecomposition {
    pub fn single_bag(g: &Graph) -> Self {
        TreeDecomposition {
            tree: Graph::with_vertices([0]),
            bags: BTreeMap::from([(0, g.vertex_set())]),
        }
    }

    /// Maximum bag size minus one; 0 for a decomposition with only empty bags.
    pub fn width(&self) -> usize {
        self.bags.values().map(|b| b.len()).max().unwrap_or(0).saturating_sub(1)
    }

    pub fn validate(&self, g: &Graph) -> DecompositionReport {
        let nodes = self.tree.vertex_set();
        let keys: VertexSet = self.bags.keys().copied().collect();
        let is_tree = !nodes.is_empty()
            && nodes == keys
            && self.tree.is_connected()
            && self.tree.m() + 1 == self.tree.n();
        let covered: VertexSet = self.bags.values().flatten().copied().collect();
        let covers_vertices = covered == g.vertex_set();
        let covers_edges = g
            .edges()
            .all(|(u, v)| self.bags.values().any(|b| b.contains(&u) && b.contains(&v)));
        let subtrees_connected = is_tree
            && covered.iter().all(|&v| {
                let holding: VertexSet = self.bags.iter().filter(|(_, b)| b.contains(&v)).map(|(&t, _)| t).collect();
                let start = *holding.iter().next().expect("covered vertex");
                self.tree.reach(start, |t| holding.contains(&t)).len() == holding.len()
            });
        DecompositionReport { is_tree, covers_vertices, covers_edges, subtrees_connected }
    }

    pub fn is_valid(&self, g: &Graph) -> bool {
        self.validate(g).ok()
    }

    /// PACE `.td` text; graph vertices are numbered by rank in sorted order, from 1.
    pub fn to_pace(&self, g: &Graph) -> String {
        let rank: BTreeMap<Vertex, usize> = g.vertices().enumerate().map(|(i, v)| (v, i + 1)).collect();
        let node: BTreeMap<Vertex, usize> = self.bags.keys().enumerate().map(|(i, &t)| (t, i + 1)).collect();
        let mut out = String::new();
        let max_bag = self.bags.values().map(|b| b.len()).max().unwrap_or(0);
        let _ = writeln!(out, "s td {} {} {}", self.bags.len(), max_bag, g.n());
        for (t, bag) in &self.bags {
            let _ = write!(out, "b {}", node[t]);
            for v in bag {
                let _ = write!(out, " {}", rank[v]);
            }
            out.push('\n');
        }
        for (a, b) in self.tree.edges() {
            let _ = writeln!(out, "{} {}", node[&a], node[&b]);
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("decompositions serialize")
    }
}

/// Decomposition from an elimination ordering covering V(g): bag of v is v
/// plus its later neighbours in the fill-in graph.
pub fn from_elimination_order(g: &Graph, order: &[Vertex]) -> TreeDecomposition {
    let pos: BTreeMap<Vertex, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    assert_eq!(pos.len(), g.n(), "order must list every vertex once");
    let mut fill: BTreeMap<Vertex, VertexSet> = g.vertices().map(|v| (v, g.neighbors(v).collect())).collect();
    let mut tree = Graph::new();
    let mut bags = BTreeMap::new();
    let mut roots = Vec::new();
    for (i, &v) in order.iter().enumerate() {
        let later: VertexSet = fill[&v].iter().copied().filter(|w| pos[w] > i).collect();
        for &a in &later {
            for &b in &later {
                if a != b {
                    fill.get_mut(&a).expect("vertex").insert(b);
                }
            }
        }
        let node = i as Vertex;
        tree.add_vertex(node);
        match later.iter().min_by_key(|w| pos[*w]) {
            Some(w) => tree.add_edge(node, pos[w] as Vertex),
            None => roots.push(node),
        }
        let mut bag = later;
        bag.insert(v);
        bags.insert(node, bag);
    }
    for w in roots.windows(2) {
        tree.add_edge(w[0], w[1]);
    }
    if bags.is_empty() {
        return TreeDecomposition { tree: Graph::with_vertices([0]), bags: BTreeMap::from([(0, VertexSet::new())]) };
    }
    TreeDecomposition { tree, bags }
}

/// Width of the elimination ordering without building the decomposition.
pub fn elimination_width(g: &Graph, order: &[Vertex]) -> usize {
    from_elimination_order(g, order).width()
}

/// Greedy min-fill ordering. Only ever used as an upper bound that an exact
/// search must then match or beat.
pub fn min_fill_order(g: &Graph) -> Vec<Vertex> {
    let mut fill: BTreeMap<Vertex, VertexSet> = g.vertices().map(|v| (v, g.neighbors(v).collect())).collect();
    let mut order = Vec::with_capacity(g.n());
    while !fill.is_empty() {
        let cost = |v: &Vertex| -> (usize, usize, Vertex) {
            let nb: Vec<Vertex> = fill[v].iter().copied().collect();
            let mut missing = 0;
            for i in 0..nb.len() {
                for j in i + 1..nb.len() {
                    if !fill[&nb[i]].contains(&nb[j]) {
                        missing += 1;
                    }
                }
            }
            (missing, nb.len(), *v)
        };
        let v = fill.keys().min_by_key(|v| cost(v)).copied().expect("nonempty");
        let nb = fill.remove(&v).expect("present");
        for &a in &nb {
            let set = fill.get_mut(&a).expect("neighbour");
            set.remove(&v);
            set.extend(nb.iter().copied().filter(|&b| b != a));
        }
        order.push(v);
    }
    order
}

/// A validated decomposition of width ≤ `bound`, `None` when the exact
/// treewidth exceeds it, or a cap error when neither can be established.
pub fn certify_width(g: &Graph, bound: usize, cap: usize) -> Result<Option<TreeDecomposition>> {
    if g.n() <= bound + 1 {
        return Ok(Some(TreeDecomposition::single_bag(g)));
    }
    let td = from_elimination_order(g, &min_fill_order(g));
    if td.width() <= bound {
        return Ok(Some(td));
    }
    let largest = g.components().iter().map(|c| c.len()).max().unwrap_or(0);
    if largest > cap {
        return Err(Error::cap(
            "treewidth vertices",
            cap as u64,
            format!("component of {largest} vertices; raise --cap-treewidth"),
        ));
    }
    let (tw, td) = exact_treewidth(g, cap)?;
    Ok((tw <= bound).then_some(td))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::grid::make_grid;

    #[test]
    fn path_decomposition_checks() {
        let g = Graph::path(4);
        let tree = Graph::path(3);
        let bags = BTreeMap::from([(0, VertexSet::from([0, 1])), (1, VertexSet::from([1, 2])), (2, VertexSet::from([2, 3]))]);
        let td = TreeDecomposition { tree: tree.clone(), bags: bags.clone() };
        assert!(td.is_valid(&g));
        assert_eq!(td.width(), 1);
        let mut broken = bags;
        broken.get_mut(&1).unwrap().remove(&1);
        let td = TreeDecomposition { tree, bags: broken };
        let rep = td.validate(&g);
        assert!(rep.covers_vertices && !rep.covers_edges);
        assert!(TreeDecomposition::single_bag(&Graph::petersen()).is_valid(&Graph::petersen()));
    }

    #[test]
    fn disconnected_bags_are_rejected() {
        let g = Graph::path(3);
        let td = TreeDecomposition {
            tree: Graph::path(3),
            bags: BTreeMap::from([(0, VertexSet::from([0, 1])), (1, VertexSet::from([1, 2])), (2, VertexSet::from([0]))]),
        };
        let rep = td.validate(&g);
        assert!(rep.covers_edges && !rep.subtrees_connected);
    }

    #[test]
    fn elimination_orders() {
        let g = make_grid(3, 3).unwrap().graph;
        let td = from_elimination_order(&g, &min_fill_order(&g));
        assert!(td.is_valid(&g));
        let forest = Graph::path(3).disjoint_union(&Graph::path(2), 10);
        let td = from_elimination_order(&forest, &forest.vertices().collect::<Vec<_>>());
        assert!(td.is_valid(&forest));
        assert_eq!(td.width(), 1);
    }

    #[test]
    fn pace_output() {
        let g = Graph::path(3);
        let td = from_elimination_order(&g, &[0, 1, 2]);
        let text = td.to_pace(&g);
        assert!(text.starts_with("s td 3 2 3\n"));
        assert_eq!(text.lines().filter(|l| l.starts_with('b')).count(), 3);
    }

    #[test]
    fn certification() {
        let g = make_grid(4, 4).unwrap().graph;
        assert!(certify_width(&g, 4, 16).unwrap().unwrap().width() <= 4);
        assert!(certify_width(&g, 3, 16).unwrap().is_none());
        assert!(certify_width(&Graph::complete(20), 3, 14).is_err());
    }
}
