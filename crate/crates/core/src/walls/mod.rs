//! Walls: construction, layers, central subwalls, wall-annuli, compasses and
//! a search for walls in planar graphs.

mod layout;
mod search;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex, VertexSet};

pub use layout::{elementary_edges, elementary_positions, Layout, Pos};
pub use search::{find_wall, search_wall, WallOrDecomposition};

/// A subdivision of the elementary `height`-wall. `branch` maps every vertex of
/// the elementary wall's image to its elementary position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Wall {
    pub height: u32,
    pub graph: Graph,
    pub branch: BTreeMap<Vertex, Pos>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallAnalysis {
    pub perimeter: Vec<Vertex>,
    /// Outermost first; each a cycle in traversal order.
    pub layers: Vec<Vec<Vertex>>,
    pub center: [Vertex; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallAnnulus {
    pub graph: Graph,
    pub c_in: Vec<Vertex>,
    pub c_out: Vec<Vertex>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExtendedCompass {
    pub k: Graph,
    /// Entry t−1 holds (K^(t), V(P^(t))) with K^(t) the compass of W^(2t+1).
    pub tower: Vec<(Graph, VertexSet)>,
}

impl ExtendedCompass {
    pub fn rho(&self) -> usize {
        self.tower.len()
    }

    /// K^(t) for 1 ≤ t ≤ ρ.
    pub fn level(&self, t: usize) -> &(Graph, VertexSet) {
        &self.tower[t - 1]
    }
}

fn check_height(r: u32) -> Result<()> {
    if r < 3 || r.is_multiple_of(2) {
        return Err(Error::input(format!("wall height must be odd and at least 3, got {r}")));
    }
    Ok(())
}

pub fn elementary_id(r: u32, (x, y): Pos) -> Vertex {
    (y - 1) * 2 * r + (x - 1)
}

pub fn make_elementary_wall(r: u32) -> Result<Wall> {
    check_height(r)?;
    let mut graph = Graph::new();
    let mut branch = BTreeMap::new();
    for p in elementary_positions(r) {
        graph.add_vertex(elementary_id(r, p));
        branch.insert(elementary_id(r, p), p);
    }
    for (a, b) in elementary_edges(r) {
        graph.add_edge(elementary_id(r, a), elementary_id(r, b));
    }
    Ok(Wall { height: r, graph, branch })
}

impl Wall {
    pub fn position_map(&self) -> BTreeMap<Pos, Vertex> {
        self.branch.iter().map(|(&v, &p)| (p, v)).collect()
    }

    pub fn vertex_at(&self, p: Pos) -> Option<Vertex> {
        self.branch.iter().find(|(_, &q)| q == p).map(|(&v, _)| v)
    }

    /// Subdivision path of every elementary edge, keyed by (smaller, larger) position.
    pub fn paths(&self) -> BTreeMap<(Pos, Pos), Vec<Vertex>> {
        let mut out = BTreeMap::new();
        for (&v, &p) in &self.branch {
            for start in self.graph.neighbors(v) {
                let mut path = vec![v];
                let (mut prev, mut cur) = (v, start);
                while !self.branch.contains_key(&cur) {
                    path.push(cur);
                    let Some(next) = self.graph.neighbors(cur).find(|&w| w != prev) else {
                        break;
                    };
                    prev = cur;
                    cur = next;
                }
                path.push(cur);
                if let Some(&q) = self.branch.get(&cur) {
                    if p < q {
                        out.insert((p, q), path);
                    }
                }
            }
        }
        out
    }

    /// Expands a cyclic sequence of positions into the cycle of wall vertices.
    fn expand_cycle(&self, cycle: &[Pos], paths: &BTreeMap<(Pos, Pos), Vec<Vertex>>) -> Vec<Vertex> {
        let mut out = Vec::new();
        for i in 0..cycle.len() {
            let (a, b) = (cycle[i], cycle[(i + 1) % cycle.len()]);
            let seg = if a < b {
                paths[&(a, b)].clone()
            } else {
                let mut s = paths[&(b, a)].clone();
                s.reverse();
                s
            };
            out.extend_from_slice(&seg[..seg.len() - 1]);
        }
        out
    }

    /// The wall spanned by the elementary edges among `positions`, with
    /// positions renamed by `rename` into a `height`-wall frame.
    pub fn restrict(&self, positions: &BTreeSet<Pos>, rename: impl Fn(Pos) -> Pos, height: u32) -> Wall {
        let paths = self.paths();
        let mut graph = Graph::new();
        let mut branch = BTreeMap::new();
        for (&v, p) in &self.branch {
            if positions.contains(p) {
                graph.add_vertex(v);
                branch.insert(v, rename(*p));
            }
        }
        for ((a, b), path) in &paths {
            if positions.contains(a) && positions.contains(b) {
                for w in path.windows(2) {
                    graph.add_edge(w[0], w[1]);
                }
            }
        }
        Wall { height, graph, branch }
    }

    pub fn analyze(&self) -> WallAnalysis {
        let layout = Layout::get(self.height);
        let paths = self.paths();
        let at = self.position_map();
        let layers: Vec<Vec<Vertex>> = layout.layers.iter().map(|c| self.expand_cycle(c, &paths)).collect();
        WallAnalysis {
            perimeter: layers[0].clone(),
            center: [at[&layout.center[0]], at[&layout.center[1]]],
            layers,
        }
    }

    pub fn perimeter(&self) -> Vec<Vertex> {
        let layout = Layout::get(self.height);
        self.expand_cycle(&layout.layers[0], &self.paths())
    }

    pub fn center(&self) -> [Vertex; 2] {
        let layout = Layout::get(self.height);
        let at = self.position_map();
        [at[&layout.center[0]], at[&layout.center[1]]]
    }

    /// W^(q); shares its center with `self`.
    pub fn central_subwall(&self, q: u32) -> Result<Wall> {
        check_height(q)?;
        if q > self.height {
            return Err(Error::input(format!("subwall height {q} exceeds wall height {}", self.height)));
        }
        let layout = Layout::get(self.height);
        let peels = ((self.height - q) / 2) as usize;
        let positions = &layout.subwalls[peels];
        let h = self.height;
        let wall = self.restrict(positions, |p| layout::mirror_times(h, p, peels), q);
        debug_assert!(wall.validate().is_ok());
        Ok(wall)
    }

    /// W^(1): the path joining the two center vertices.
    pub fn center_path(&self) -> Graph {
        let layout = Layout::get(self.height);
        let [a, b] = layout.center;
        let path = &self.paths()[&(a.min(b), a.max(b))];
        let mut g = Graph::with_vertices(path.iter().copied());
        for w in path.windows(2) {
            g.add_edge(w[0], w[1]);
        }
        g
    }

    /// Central subwall of height `h` as a plain graph, with `h = 1` the center path.
    fn central_graph(&self, h: u32) -> Result<Graph> {
        if h == 1 {
            Ok(self.center_path())
        } else {
            Ok(self.central_subwall(h)?.graph)
        }
    }

    /// A_p^(ℓ): W^(2p+1) minus V(W^(2(p−ℓ)+1)) and degree-one debris.
    pub fn annulus(&self, p: u32, ell: u32) -> Result<WallAnnulus> {
        if self.height < 7 || p < 3 || 2 * p + 1 > self.height || ell < 3 || ell > p {
            return Err(Error::input(format!(
                "wall-annulus ({p},{ell}) out of range for a {}-wall",
                self.height
            )));
        }
        let outer = self.central_subwall(2 * p + 1)?;
        let inner = self.central_graph(2 * (p - ell) + 1)?;
        let mut g = outer.graph.remove_vertices(&inner.vertex_set());
        strip_debris(&mut g);
        let c_out = outer.perimeter();
        let c_in = self.central_subwall(2 * (p - ell) + 3)?.perimeter();
        Ok(WallAnnulus { graph: g, c_in, c_out })
    }

    /// Independent structural check that `graph` subdivides the elementary wall.
    pub fn validate(&self) -> std::result::Result<(), String> {
        check_height(self.height).map_err(|e| e.to_string())?;
        let expected: BTreeSet<Pos> = elementary_positions(self.height).into_iter().collect();
        let got: BTreeSet<Pos> = self.branch.values().copied().collect();
        if got != expected || got.len() != self.branch.len() {
            return Err("branch coordinates are not a bijection onto the elementary positions".into());
        }
        if let Some(v) = self.branch.keys().find(|&&v| !self.graph.contains(v)) {
            return Err(format!("branch vertex {v} missing from graph"));
        }
        for v in self.graph.vertices() {
            if !self.branch.contains_key(&v) && self.graph.degree(v) != 2 {
                return Err(format!("subdivision vertex {v} has degree {}", self.graph.degree(v)));
            }
        }
        let mut walked = 0;
        let mut found: BTreeSet<(Pos, Pos)> = BTreeSet::new();
        for (&v, &p) in &self.branch {
            for start in self.graph.neighbors(v) {
                let (mut prev, mut cur) = (v, start);
                walked += 1;
                while !self.branch.contains_key(&cur) {
                    let next = self
                        .graph
                        .neighbors(cur)
                        .find(|&w| w != prev)
                        .ok_or("dangling subdivision path")?;
                    prev = cur;
                    cur = next;
                    walked += 1;
                    if walked > 2 * self.graph.m() {
                        return Err("subdivision path does not end at a branch vertex".into());
                    }
                }
                let q = self.branch[&cur];
                found.insert((p.min(q), p.max(q)));
            }
        }
        let edges: BTreeSet<(Pos, Pos)> = elementary_edges(self.height)
            .into_iter()
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        if found != edges {
            return Err("subdivision paths do not realise the elementary edges".into());
        }
        if walked != 2 * self.graph.m() || !self.graph.is_connected() {
            return Err("graph has edges outside the subdivision paths".into());
        }
        let paths = self.paths();
        if paths.len() != edges.len() {
            return Err("parallel subdivision paths".into());
        }
        Ok(())
    }

    /// Replace each edge by a path through `extra[i]` fresh vertices (i over
    /// edges in lexicographic order).
    pub fn subdivide(&self, extra: &[u32]) -> Wall {
        let mut next = self.graph.fresh_id();
        let mut g = Graph::with_vertices(self.graph.vertices());
        for (i, (u, v)) in self.graph.edges().enumerate() {
            let mut prev = u;
            for _ in 0..extra.get(i).copied().unwrap_or(0) {
                g.add_edge(prev, next);
                prev = next;
                next += 1;
            }
            g.add_edge(prev, v);
        }
        Wall { height: self.height, graph: g, branch: self.branch.clone() }
    }

    /// h'-subwall occupying positions [x0, x0+2h'−1] × [y0, y0+h'−1]; needs x0+y0 even.
    pub fn block_subwall(&self, x0: u32, y0: u32, h: u32) -> Result<Wall> {
        check_height(h)?;
        if !(x0 + y0).is_multiple_of(2) || x0 == 0 || y0 == 0 {
            return Err(Error::input("block offset must be positive with even coordinate sum"));
        }
        let present: BTreeSet<Pos> = self.branch.values().copied().collect();
        let mut positions = BTreeSet::new();
        for (x, y) in elementary_positions(h) {
            let p = (x + x0 - 1, y + y0 - 1);
            if !present.contains(&p) {
                return Err(Error::input("block leaves the wall"));
            }
            positions.insert(p);
        }
        let sub = self.restrict(&positions, |(x, y)| (x + 1 - x0, y + 1 - y0), h);
        sub.validate().map_err(Error::Input)?;
        Ok(sub)
    }
}

/// Removes degree-one vertices until none remain.
pub fn strip_debris(g: &mut Graph) {
    loop {
        let debris: Vec<Vertex> = g.vertices().filter(|&v| g.degree(v) <= 1).collect();
        if debris.is_empty() {
            return;
        }
        for v in debris {
            g.delete_vertex(v);
        }
    }
}

/// Perimeter plus the component of `g` minus the perimeter that contains the
/// wall's interior, induced in `g`.
pub fn compass(g: &Graph, w: &Wall) -> Result<Graph> {
    if !w.graph.is_subgraph_of(g) {
        return Err(Error::input("wall is not a subgraph of the graph"));
    }
    let perim: VertexSet = w.perimeter().into_iter().collect();
    let seed = w.center()[0];
    let inside = g.reach(seed, |x| !perim.contains(&x));
    if w.graph.vertices().any(|v| !perim.contains(&v) && !inside.contains(&v)) {
        return Err(Error::input("wall interior is split by its perimeter"));
    }
    let mut keep = inside;
    keep.extend(perim);
    Ok(g.induced(&keep))
}

pub fn extended_compass(g: &Graph, w: &Wall, rho: usize) -> Result<ExtendedCompass> {
    if 2 * rho as u32 + 1 > w.height || rho == 0 {
        return Err(Error::input(format!("a {}-wall has no {rho}-level tower", w.height)));
    }
    let k = compass(g, w)?;
    let mut tower = Vec::with_capacity(rho);
    for t in 1..=rho as u32 {
        let sub = w.central_subwall(2 * t + 1)?;
        tower.push((compass(g, &sub)?, sub.perimeter().into_iter().collect()));
    }
    Ok(ExtendedCompass { k, tower })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planarity::{embed, is_planar};

    #[test]
    fn elementary_three_wall() {
        let w = make_elementary_wall(3).unwrap();
        assert_eq!((w.graph.n(), w.graph.m()), (16, 19));
        assert!(is_planar(&w.graph));
        let faces = embed(&w.graph).unwrap().faces();
        let mut lens: Vec<usize> = faces.iter().map(|f| f.len()).collect();
        lens.sort();
        assert_eq!(lens, vec![6, 6, 6, 6, 14]);
        assert!(w.validate().is_ok());
        assert!(make_elementary_wall(4).is_err());
        assert!(make_elementary_wall(1).is_err());
    }

    #[test]
    fn sizes_follow_the_construction() {
        for r in [3u32, 5, 7, 9] {
            let w = make_elementary_wall(r).unwrap();
            assert_eq!(w.graph.n() as u32, 2 * r * r - 2);
        }
    }

    #[test]
    fn layers_and_center() {
        for h in [3u32, 5, 7, 9, 11, 13] {
            let w = make_elementary_wall(h).unwrap();
            let a = w.analyze();
            assert_eq!(a.layers.len() as u32, (h - 1) / 2);
            let mut seen = VertexSet::new();
            for layer in &a.layers {
                assert!(crate::graph::cycle_graph(layer).is_subgraph_of(&w.graph));
                for v in layer {
                    assert!(seen.insert(*v));
                }
            }
            assert!(a.center.iter().all(|c| !seen.contains(c)));
            assert!(w.graph.has_edge(a.center[0], a.center[1]));
        }
        let a3 = make_elementary_wall(3).unwrap().analyze();
        assert_eq!(a3.layers[0].len(), 14);
        assert_eq!(a3.center, [elementary_id(3, (3, 2)), elementary_id(3, (4, 2))]);
    }

    #[test]
    fn central_subwalls_nest() {
        let w = make_elementary_wall(9).unwrap();
        let a = w.analyze();
        for q in [3u32, 5, 7, 9] {
            let s = w.central_subwall(q).unwrap();
            assert_eq!(s.height, q);
            assert!(s.validate().is_ok());
            assert_eq!(s.center(), a.center);
            let inner = s.analyze().layers;
            let skip = ((9 - q) / 2) as usize;
            for (i, layer) in inner.iter().enumerate() {
                let x: VertexSet = layer.iter().copied().collect();
                let y: VertexSet = a.layers[skip + i].iter().copied().collect();
                assert_eq!(x, y);
            }
        }
        assert_eq!(w.central_subwall(9).unwrap(), w);
        assert!(w.central_subwall(11).is_err());
        assert!(w.central_subwall(4).is_err());
    }

    #[test]
    fn subdivided_walls_validate_and_peel() {
        let w = make_elementary_wall(7).unwrap();
        let extra: Vec<u32> = (0..w.graph.m() as u32).map(|i| i % 3).collect();
        let s = w.subdivide(&extra);
        assert!(s.validate().is_ok());
        let a = s.analyze();
        assert_eq!(a.layers.len(), 3);
        let sub = s.central_subwall(3).unwrap();
        assert!(sub.validate().is_ok());
        let mut broken = s.clone();
        broken.graph.add_edge(a.center[0], a.layers[0][0]);
        assert!(broken.validate().is_err());
    }

    #[test]
    fn annulus_cycles_are_layers() {
        let w = make_elementary_wall(13).unwrap();
        let a = w.analyze();
        let ann = w.annulus(5, 3).unwrap();
        // Layers counted from the center: layer j is the perimeter of W^(2j+1).
        let from_center = |j: usize| -> VertexSet { a.layers[a.layers.len() - j].iter().copied().collect() };
        assert_eq!(ann.c_out.iter().copied().collect::<VertexSet>(), from_center(5));
        assert_eq!(ann.c_in.iter().copied().collect::<VertexSet>(), from_center(3));
        let union: VertexSet = (3..=5).flat_map(from_center).collect();
        assert!(union.is_subset(&ann.graph.vertex_set()));
        assert!(ann.graph.vertices().all(|v| ann.graph.degree(v) >= 2));
        assert!(w.annulus(6, 3).is_ok());
        assert!(w.annulus(7, 3).is_err());
        assert!(w.annulus(3, 4).is_err());
        let full = w.annulus(3, 3).unwrap();
        assert!(!full.graph.contains(a.center[0]));
    }

    #[test]
    fn annuli_at_spaced_indices_are_disjoint() {
        let w = make_elementary_wall(13).unwrap();
        let a3 = w.annulus(3, 3).unwrap().graph.vertex_set();
        let a6 = w.annulus(6, 3).unwrap().graph.vertex_set();
        assert!(a3.is_disjoint(&a6));
    }

    #[test]
    fn compass_examples() {
        let w = make_elementary_wall(5).unwrap();
        assert_eq!(compass(&w.graph, &w).unwrap(), w.graph);
        let inner = w.center()[0];
        let mut g = w.graph.clone();
        g.add_edge(inner, 1000);
        g.add_edge(2000, 2001);
        g.add_edge(2001, 2002);
        g.add_edge(2000, 2002);
        let c = compass(&g, &w).unwrap();
        assert!(c.contains(1000) && !c.contains(2000));
        assert!(c.is_connected());
        assert!(compass(&Graph::path(3), &w).is_err());
    }

    #[test]
    fn extended_compass_nests() {
        let w = make_elementary_wall(7).unwrap();
        let ec = extended_compass(&w.graph, &w, 3).unwrap();
        assert_eq!(ec.rho(), 3);
        for t in 1..3 {
            assert!(ec.level(t).0.is_subgraph_of(&ec.level(t + 1).0));
        }
        assert!(ec.level(3).0.is_subgraph_of(&ec.k));
        assert!(extended_compass(&w.graph, &w, 4).is_err());
    }

    #[test]
    fn block_subwalls() {
        let w = make_elementary_wall(11).unwrap();
        let blocks: Vec<Wall> = [(1, 1), (13, 1), (1, 7), (13, 7)]
            .iter()
            .map(|&(x, y)| w.block_subwall(x, y, 5).unwrap())
            .collect();
        for i in 0..4 {
            for j in i + 1..4 {
                assert!(blocks[i].graph.vertex_set().is_disjoint(&blocks[j].graph.vertex_set()));
            }
        }
        assert!(w.block_subwall(2, 1, 5).is_err());
        assert!(w.block_subwall(15, 1, 5).is_err());
    }
}
