//! Simple undirected graphs with stable vertex ids.

mod contraction;
mod dense;
pub mod grid;
mod io;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};

pub use contraction::{ContractionMap, ContractionViolation, MinorModel, Separation};
pub use dense::Dense;
pub use io::GraphJson;

pub type Vertex = u32;
pub type VertexSet = BTreeSet<Vertex>;
/// Unordered pair stored with `0 < 1`.
pub type Edge = (Vertex, Vertex);

pub fn edge(u: Vertex, v: Vertex) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Value semantics: every transforming operation returns a new graph and keeps
/// the ids of surviving vertices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: BTreeMap<Vertex, BTreeSet<Vertex>>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_vertices(vs: impl IntoIterator<Item = Vertex>) -> Self {
        let mut g = Graph::new();
        for v in vs {
            g.add_vertex(v);
        }
        g
    }

    /// Graph on the endpoints of `edges`.
    pub fn from_edges(edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Self {
        let mut g = Graph::new();
        for (u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    /// Checked constructor used for untrusted input.
    pub fn build(
        vertices: impl IntoIterator<Item = Vertex>,
        edges: impl IntoIterator<Item = (Vertex, Vertex)>,
    ) -> Result<Self> {
        let mut g = Graph::with_vertices(vertices);
        for (u, v) in edges {
            if u == v {
                return Err(Error::input(format!("loop at vertex {u}")));
            }
            for x in [u, v] {
                if !g.contains(x) {
                    return Err(Error::input(format!(
                        "edge ({u},{v}) uses undeclared vertex {x}"
                    )));
                }
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    pub fn complete(n: u32) -> Self {
        let mut g = Graph::with_vertices(0..n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn path(n: u32) -> Self {
        let mut g = Graph::with_vertices(0..n);
        for v in 1..n {
            g.add_edge(v - 1, v);
        }
        g
    }

    pub fn cycle(n: u32) -> Self {
        let mut g = Graph::path(n);
        if n >= 3 {
            g.add_edge(n - 1, 0);
        }
        g
    }

    pub fn complete_bipartite(a: u32, b: u32) -> Self {
        let mut g = Graph::with_vertices(0..a + b);
        for u in 0..a {
            for v in a..a + b {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn petersen() -> Self {
        let mut g = Graph::new();
        for i in 0..5 {
            g.add_edge(i, (i + 1) % 5);
            g.add_edge(i, i + 5);
            g.add_edge(5 + i, 5 + (i + 2) % 5);
        }
        g
    }

    pub fn add_vertex(&mut self, v: Vertex) {
        self.adj.entry(v).or_default();
    }

    /// Inserts missing endpoints. Panics on a loop.
    pub fn add_edge(&mut self, u: Vertex, v: Vertex) {
        assert_ne!(u, v, "loops are not allowed");
        self.adj.entry(u).or_default().insert(v);
        self.adj.entry(v).or_default().insert(u);
    }

    pub fn delete_edge(&mut self, u: Vertex, v: Vertex) {
        if let Some(s) = self.adj.get_mut(&u) {
            s.remove(&v);
        }
        if let Some(s) = self.adj.get_mut(&v) {
            s.remove(&u);
        }
    }

    pub fn delete_vertex(&mut self, v: Vertex) {
        if let Some(ns) = self.adj.remove(&v) {
            for u in ns {
                if let Some(s) = self.adj.get_mut(&u) {
                    s.remove(&v);
                }
            }
        }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.adj.values().map(|s| s.len()).sum::<usize>() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.adj.keys().copied()
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.adj.keys().copied().collect()
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adj
            .iter()
            .flat_map(|(&u, ns)| ns.range(u + 1..).map(move |&v| (u, v)))
    }

    pub fn edge_set(&self) -> BTreeSet<Edge> {
        self.edges().collect()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj.get(&u).is_some_and(|s| s.contains(&v))
    }

    /// Panics if `v` is not a vertex.
    pub fn nbrs(&self, v: Vertex) -> &BTreeSet<Vertex> {
        &self.adj[&v]
    }

    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.adj.get(&v).into_iter().flatten().copied()
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj.get(&v).map_or(0, |s| s.len())
    }

    pub fn max_degree(&self) -> usize {
        self.adj.values().map(|s| s.len()).max().unwrap_or(0)
    }

    pub fn max_id(&self) -> Option<Vertex> {
        self.adj.keys().next_back().copied()
    }

    /// One past the largest id, for allocating fresh vertices.
    pub fn fresh_id(&self) -> Vertex {
        self.max_id().map_or(0, |m| m + 1)
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v))
        }
    }

    pub fn remove_vertex(&self, v: Vertex) -> Graph {
        let mut g = self.clone();
        g.delete_vertex(v);
        g
    }

    pub fn remove_vertices<'a>(&self, vs: impl IntoIterator<Item = &'a Vertex>) -> Graph {
        let mut g = self.clone();
        for &v in vs {
            g.delete_vertex(v);
        }
        g
    }

    pub fn remove_edges(&self, es: impl IntoIterator<Item = Edge>) -> Graph {
        let mut g = self.clone();
        for (u, v) in es {
            g.delete_edge(u, v);
        }
        g
    }

    pub fn add_edges(&self, es: impl IntoIterator<Item = Edge>) -> Graph {
        let mut g = self.clone();
        for (u, v) in es {
            g.add_edge(u, v);
        }
        g
    }

    /// G[S]; ids outside the graph are ignored.
    pub fn induced(&self, s: &VertexSet) -> Graph {
        let mut g = Graph::new();
        for &v in s {
            if let Some(ns) = self.adj.get(&v) {
                let kept: BTreeSet<Vertex> = ns.iter().copied().filter(|u| s.contains(u)).collect();
                g.adj.insert(v, kept);
            }
        }
        g
    }

    pub fn union(&self, other: &Graph) -> Graph {
        let mut g = self.clone();
        for v in other.vertices() {
            g.add_vertex(v);
        }
        for (u, v) in other.edges() {
            g.add_edge(u, v);
        }
        g
    }

    /// Copy of `other` with every id shifted by `offset`, added next to `self`.
    pub fn disjoint_union(&self, other: &Graph, offset: Vertex) -> Graph {
        let mut g = self.clone();
        for v in other.vertices() {
            assert!(!g.contains(v + offset), "ids collide in disjoint union");
            g.add_vertex(v + offset);
        }
        for (u, v) in other.edges() {
            g.add_edge(u + offset, v + offset);
        }
        g
    }

    pub fn relabel(&self, f: impl Fn(Vertex) -> Vertex) -> Graph {
        let mut g = Graph::new();
        for v in self.vertices() {
            g.add_vertex(f(v));
        }
        for (u, v) in self.edges() {
            g.add_edge(f(u), f(v));
        }
        g
    }

    pub fn is_subgraph_of(&self, host: &Graph) -> bool {
        self.vertices().all(|v| host.contains(v)) && self.edges().all(|(u, v)| host.has_edge(u, v))
    }

    /// Components in order of their least vertex.
    pub fn components(&self) -> Vec<VertexSet> {
        let mut seen = VertexSet::new();
        let mut out = Vec::new();
        for v in self.vertices() {
            if seen.contains(&v) {
                continue;
            }
            let comp = self.reach(v, |_| true);
            seen.extend(comp.iter().copied());
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        match self.vertices().next() {
            None => true,
            Some(v) => self.reach(v, |_| true).len() == self.n(),
        }
    }

    /// Vertices reachable from `start` through vertices accepted by `allow`
    /// (`start` itself is always included).
    pub fn reach(&self, start: Vertex, allow: impl Fn(Vertex) -> bool) -> VertexSet {
        let mut seen = VertexSet::new();
        seen.insert(start);
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for w in self.neighbors(u) {
                if allow(w) && seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// BFS distances from `source`, optionally truncated at `limit`.
    pub fn bfs(&self, source: Vertex, limit: Option<usize>) -> BTreeMap<Vertex, usize> {
        let mut dist = BTreeMap::new();
        if !self.contains(source) {
            return dist;
        }
        dist.insert(source, 0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let d = dist[&u];
            if limit.is_some_and(|l| d >= l) {
                continue;
            }
            for w in self.neighbors(u) {
                if let std::collections::btree_map::Entry::Vacant(e) = dist.entry(w) {
                    e.insert(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Shortest-path length; `None` stands for infinity.
    pub fn distance(&self, u: Vertex, v: Vertex) -> Result<Option<usize>> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        Ok(self.bfs(u, None).get(&v).copied())
    }

    /// Closed ball of radius `r` around `v`.
    pub fn neighborhood(&self, v: Vertex, r: usize) -> Result<VertexSet> {
        self.check_vertex(v)?;
        Ok(self.bfs(v, Some(r)).into_keys().collect())
    }

    /// |x| = ell and distinct members are pairwise at distance > 2r.
    pub fn is_scattered(&self, x: &VertexSet, ell: usize, r: usize) -> bool {
        if x.len() != ell {
            return false;
        }
        x.iter().all(|&u| {
            let ball = self.bfs(u, Some(2 * r));
            x.iter().all(|w| *w == u || !ball.contains_key(w))
        })
    }

    /// Shortest path from `a` to `b` whose inner vertices satisfy `allow`.
    pub fn shortest_path(&self, a: Vertex, b: Vertex, allow: impl Fn(Vertex) -> bool) -> Option<Vec<Vertex>> {
        let mut parent = BTreeMap::new();
        parent.insert(a, a);
        let mut queue = VecDeque::from([a]);
        while let Some(u) = queue.pop_front() {
            if u == b {
                let mut path = vec![b];
                let mut x = b;
                while x != a {
                    x = parent[&x];
                    path.push(x);
                }
                path.reverse();
                return Some(path);
            }
            for w in self.neighbors(u) {
                if parent.contains_key(&w) || (w != b && !allow(w)) {
                    continue;
                }
                parent.insert(w, u);
                queue.push_back(w);
            }
        }
        None
    }

    /// Connected and 2-regular with at least three vertices.
    pub fn is_cycle(&self) -> bool {
        self.n() >= 3 && self.adj.values().all(|s| s.len() == 2) && self.is_connected()
    }

    /// The vertices of a cycle graph in traversal order starting at its least id.
    pub fn cycle_order(&self) -> Option<Vec<Vertex>> {
        if !self.is_cycle() {
            return None;
        }
        let start = self.vertices().next()?;
        let mut order = vec![start];
        let mut prev = start;
        let mut cur = *self.nbrs(start).iter().next()?;
        while cur != start {
            order.push(cur);
            let next = *self.nbrs(cur).iter().find(|&&w| w != prev)?;
            prev = cur;
            cur = next;
        }
        Some(order)
    }
}

/// Graph consisting of the consecutive edges of `cycle` (closing edge included).
pub fn cycle_graph(cycle: &[Vertex]) -> Graph {
    let mut g = Graph::with_vertices(cycle.iter().copied());
    for i in 0..cycle.len() {
        let (a, b) = (cycle[i], cycle[(i + 1) % cycle.len()]);
        if a != b && cycle.len() >= 3 {
            g.add_edge(a, b);
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vs(xs: &[Vertex]) -> VertexSet {
        xs.iter().copied().collect()
    }

    #[test]
    fn distance_examples() {
        let p = Graph::path(3);
        assert_eq!(p.distance(0, 2).unwrap(), Some(2));
        assert_eq!(p.distance(1, 1).unwrap(), Some(0));
        let iso = Graph::with_vertices([0, 1]);
        assert_eq!(iso.distance(0, 1).unwrap(), None);
        assert_eq!(p.distance(0, 9), Err(Error::UnknownVertex(9)));
    }

    #[test]
    fn neighborhood_examples() {
        let p = Graph::path(3);
        assert_eq!(p.neighborhood(1, 1).unwrap(), vs(&[0, 1, 2]));
        assert_eq!(p.neighborhood(0, 0).unwrap(), vs(&[0]));
        assert_eq!(Graph::cycle(5).neighborhood(3, 2).unwrap().len(), 5);
        assert!(p.neighborhood(7, 1).is_err());
    }

    #[test]
    fn scattered_examples() {
        let p = Graph::path(7);
        assert!(p.is_scattered(&vs(&[0, 6]), 2, 1));
        assert!(!p.is_scattered(&vs(&[0, 2]), 2, 1));
        assert!(p.is_scattered(&VertexSet::new(), 0, 5));
        assert!(!p.is_scattered(&vs(&[0]), 2, 1));
    }

    #[test]
    fn value_semantics_keep_ids() {
        let g = Graph::cycle(5);
        let h = g.remove_vertex(2);
        assert_eq!(h.vertex_set(), vs(&[0, 1, 3, 4]));
        assert_eq!(g.n(), 5);
        assert!(h.has_edge(3, 4) && !h.has_edge(1, 3));
    }

    #[test]
    fn build_rejects_bad_input() {
        assert!(Graph::build([0, 1], [(0, 0)]).is_err());
        assert!(Graph::build([0, 1], [(0, 2)]).is_err());
        let g = Graph::build([0, 1, 2], [(0, 1), (1, 0)]).unwrap();
        assert_eq!(g.m(), 1);
    }

    #[test]
    fn cycle_order_walks_the_cycle() {
        let c = Graph::cycle(6);
        assert_eq!(c.cycle_order().unwrap(), vec![0, 1, 2, 3, 4, 5]);
        assert!(Graph::path(4).cycle_order().is_none());
    }

    #[test]
    fn petersen_shape() {
        let p = Graph::petersen();
        assert_eq!((p.n(), p.m()), (10, 15));
        assert!(p.vertices().all(|v| p.degree(v) == 3));
    }
}
