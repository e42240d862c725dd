use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{compass, elementary_edges, elementary_positions, Pos, Wall};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::treewidth::{certify_width, TreeDecomposition};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum WallOrDecomposition {
    /// A wall with a certificate that its compass has width ≤ the bound.
    Wall { wall: Wall, compass_td: TreeDecomposition },
    Decomposition(TreeDecomposition),
}

/// Either a q-wall of `g` whose compass has treewidth ≤ c1·q, or a tree
/// decomposition of `g` of width ≤ c1·q.
pub fn find_wall(
    g: &Graph,
    q: u32,
    c1: usize,
    max_subdivision: usize,
    node_budget: u64,
    tw_cap: usize,
) -> Result<WallOrDecomposition> {
    let bound = c1 * q as usize;
    if let Some(wall) = search_wall(g, q, max_subdivision, node_budget)? {
        let k = compass(g, &wall)?;
        if let Some(td) = certify_width(&k, bound, tw_cap)? {
            debug_assert!(td.is_valid(&k));
            return Ok(WallOrDecomposition::Wall { wall, compass_td: td });
        }
    }
    match certify_width(g, bound, tw_cap)? {
        Some(td) => Ok(WallOrDecomposition::Decomposition(td)),
        None => Err(Error::Resource(format!(
            "treewidth exceeds {bound} but no {q}-wall was found with subdivision paths of at most {max_subdivision} vertices"
        ))),
    }
}

/// Backtracking search for a subdivision of the elementary q-wall in which
/// every edge becomes a path with at most `max_subdivision` inner vertices.
/// Exhaustive within that bound; errors when `node_budget` runs out.
pub fn search_wall(g: &Graph, q: u32, max_subdivision: usize, node_budget: u64) -> Result<Option<Wall>> {
    super::check_height(q)?;
    let positions = elementary_positions(q);
    if g.n() < positions.len() {
        return Ok(None);
    }
    let mut earlier: BTreeMap<Pos, Vec<Pos>> = BTreeMap::new();
    let mut degree: BTreeMap<Pos, usize> = BTreeMap::new();
    let rank: BTreeMap<Pos, usize> = positions.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    for (a, b) in elementary_edges(q) {
        *degree.entry(a).or_default() += 1;
        *degree.entry(b).or_default() += 1;
        let (lo, hi) = if rank[&a] < rank[&b] { (a, b) } else { (b, a) };
        earlier.entry(hi).or_default().push(lo);
    }
    let mut s = State {
        g,
        positions: &positions,
        earlier: &earlier,
        degree: &degree,
        max_len: max_subdivision + 1,
        image: BTreeMap::new(),
        used: BTreeSet::new(),
        paths: Vec::new(),
        nodes: 0,
        budget: node_budget,
    };
    if !s.place(0)? {
        return Ok(None);
    }
    let mut graph = Graph::new();
    let mut branch = BTreeMap::new();
    for (&p, &v) in &s.image {
        graph.add_vertex(v);
        branch.insert(v, p);
    }
    for path in &s.paths {
        for w in path.windows(2) {
            graph.add_edge(w[0], w[1]);
        }
    }
    let wall = Wall { height: q, graph, branch };
    debug_assert!(wall.validate().is_ok());
    Ok(Some(wall))
}

struct State<'a> {
    g: &'a Graph,
    positions: &'a [Pos],
    earlier: &'a BTreeMap<Pos, Vec<Pos>>,
    degree: &'a BTreeMap<Pos, usize>,
    max_len: usize,
    image: BTreeMap<Pos, Vertex>,
    used: BTreeSet<Vertex>,
    paths: Vec<Vec<Vertex>>,
    nodes: u64,
    budget: u64,
}

impl State<'_> {
    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::cap("wall search nodes", self.budget, "raise --cap-wall-search"));
        }
        Ok(())
    }

    /// Simple paths from `from` of length 1..=max_len through unused vertices,
    /// ending at `to` if given, else at any unused vertex of degree ≥ `min_deg`.
    fn paths_from(&self, from: Vertex, to: Option<Vertex>, min_deg: usize) -> Vec<Vec<Vertex>> {
        let mut out = Vec::new();
        let mut path = vec![from];
        let mut on_path = BTreeSet::from([from]);
        self.extend(&mut path, &mut on_path, to, min_deg, &mut out);
        out.sort_by_key(|p| p.len());
        out
    }

    fn extend(
        &self,
        path: &mut Vec<Vertex>,
        on_path: &mut BTreeSet<Vertex>,
        to: Option<Vertex>,
        min_deg: usize,
        out: &mut Vec<Vec<Vertex>>,
    ) {
        if path.len() > self.max_len {
            return;
        }
        let last = *path.last().expect("nonempty");
        for w in self.g.neighbors(last) {
            if on_path.contains(&w) {
                continue;
            }
            let hit = match to {
                Some(t) => w == t,
                None => !self.used.contains(&w) && self.g.degree(w) >= min_deg,
            };
            if hit {
                let mut p = path.clone();
                p.push(w);
                out.push(p);
            }
            if self.used.contains(&w) || path.len() == self.max_len {
                continue;
            }
            path.push(w);
            on_path.insert(w);
            self.extend(path, on_path, to, min_deg, out);
            on_path.remove(&w);
            path.pop();
        }
    }

    fn place(&mut self, i: usize) -> Result<bool> {
        self.tick()?;
        if i == self.positions.len() {
            return Ok(true);
        }
        let p = self.positions[i];
        let deg = self.degree[&p];
        let preds = self.earlier.get(&p).cloned().unwrap_or_default();
        let candidates: Vec<Vec<Vertex>> = match preds.first() {
            None => self
                .g
                .vertices()
                .filter(|&v| !self.used.contains(&v) && self.g.degree(v) >= deg)
                .map(|v| vec![v])
                .collect(),
            Some(a) => self.paths_from(self.image[a], None, deg),
        };
        for first in candidates {
            let v = *first.last().expect("nonempty");
            if self.used.contains(&v) {
                continue;
            }
            let inner: Vec<Vertex> = first[..first.len() - 1].iter().skip(1).copied().collect();
            let mark: Vec<Vertex> = inner.iter().copied().chain([v]).collect();
            if mark.iter().any(|x| self.used.contains(x)) {
                continue;
            }
            self.used.extend(mark.iter().copied());
            self.image.insert(p, v);
            let pushed = first.len() > 1;
            if pushed {
                self.paths.push(first.clone());
            }
            if self.connect_rest(i, &preds[1.min(preds.len())..], v)? {
                return Ok(true);
            }
            if pushed {
                self.paths.pop();
            }
            self.image.remove(&p);
            for x in &mark {
                self.used.remove(x);
            }
        }
        Ok(false)
    }

    /// Routes paths from `v` to the images of the remaining predecessors, then
    /// continues with position i+1.
    fn connect_rest(&mut self, i: usize, preds: &[Pos], v: Vertex) -> Result<bool> {
        let Some((&a, rest)) = preds.split_first() else {
            return self.place(i + 1);
        };
        self.tick()?;
        let target = self.image[&a];
        for path in self.paths_from(v, Some(target), 0) {
            let inner: Vec<Vertex> = path[1..path.len() - 1].to_vec();
            if inner.iter().any(|x| self.used.contains(x)) {
                continue;
            }
            self.used.extend(inner.iter().copied());
            self.paths.push(path);
            if self.connect_rest(i, rest, v)? {
                return Ok(true);
            }
            self.paths.pop();
            for x in &inner {
                self.used.remove(x);
            }
        }
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::grid::make_grid;
    use crate::walls::make_elementary_wall;

    #[test]
    fn grids_contain_walls() {
        let g = make_grid(8, 5).unwrap().graph;
        let w = search_wall(&g, 3, 1, 1 << 20).unwrap().unwrap();
        assert!(w.validate().is_ok());
        assert!(w.graph.is_subgraph_of(&g));
        match find_wall(&g, 3, 9, 1, 1 << 20, 14).unwrap() {
            WallOrDecomposition::Wall { wall, compass_td } => {
                assert!(compass_td.is_valid(&compass(&g, &wall).unwrap()));
                assert!(compass_td.width() <= 27);
            }
            WallOrDecomposition::Decomposition(_) => panic!("expected a wall"),
        }
    }

    #[test]
    fn subdivided_wall_is_found() {
        let w = make_elementary_wall(3).unwrap();
        let extra: Vec<u32> = (0..w.graph.m() as u32).map(|i| i % 2).collect();
        let s = w.subdivide(&extra);
        let found = search_wall(&s.graph, 3, 1, 1 << 20).unwrap().unwrap();
        assert!(found.validate().is_ok());
        assert_eq!(found.graph, s.graph);
        assert!(search_wall(&s.graph, 3, 0, 1 << 20).unwrap().is_none());
    }

    #[test]
    fn small_graphs_have_no_wall() {
        let k4 = Graph::complete(4);
        assert!(search_wall(&k4, 3, 3, 1000).unwrap().is_none());
        match find_wall(&k4, 3, 9, 3, 1000, 14).unwrap() {
            WallOrDecomposition::Decomposition(td) => {
                assert!(td.is_valid(&k4));
                assert_eq!(td.width(), 3);
            }
            WallOrDecomposition::Wall { .. } => panic!("K4 has no wall"),
        }
    }
}
