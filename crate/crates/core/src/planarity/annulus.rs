use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{embed, is_planar, with_apex};
use crate::error::{Error, Result};
use crate::graph::{cycle_graph, Edge, Graph, Separation, Vertex, VertexSet};

/// (G, K, Y, 𝔸) with the annulus data given by its two extremal cycles.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AnnulusBoundariedGraph {
    pub graph: Graph,
    pub k: Graph,
    pub y: Graph,
    pub c_in: Vec<Vertex>,
    pub c_out: Vec<Vertex>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnnulusViolation {
    KNotConnectedSubgraph,
    YNotSubgraphOfK,
    BadExtremalCycles,
    ComponentOutsideBricks(VertexSet),
    BrickNotPlanar(usize),
    EdgeLeavesAnnulus(Vertex, Vertex),
}

/// A piece of K hanging on Y: a chord (`inner` empty) or a component of K \ V(Y).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallComponent {
    pub inner: VertexSet,
    pub edges: Vec<Edge>,
    pub attach: VertexSet,
}

impl AnnulusBoundariedGraph {
    pub fn rev(&self) -> Self {
        AnnulusBoundariedGraph { c_in: self.c_out.clone(), c_out: self.c_in.clone(), ..self.clone() }
    }

    fn extremal(&self) -> VertexSet {
        self.c_in.iter().chain(&self.c_out).copied().collect()
    }

    /// Bricks: the faces of Y other than the two extremal ones.
    pub fn bricks(&self) -> Option<Vec<Vec<Vertex>>> {
        let (h, a_in) = with_apex(&self.y, &self.c_in);
        let (h, a_out) = with_apex(&h, &self.c_out);
        let emb = embed(&h)?;
        Some(
            emb.faces()
                .into_iter()
                .filter(|f| !f.contains(&a_in) && !f.contains(&a_out))
                .collect(),
        )
    }

    /// The inner compass: everything of `graph` reachable from C_in without
    /// passing through K minus C_in, together with K.
    pub fn side_vertices(&self, inner: bool) -> VertexSet {
        let cyc: VertexSet = if inner { &self.c_in } else { &self.c_out }.iter().copied().collect();
        let k = self.k.vertex_set();
        let mut out = k.clone();
        for &c in &cyc {
            for w in self.graph.neighbors(c) {
                if !k.contains(&w) {
                    out.extend(self.graph.reach(w, |x| !k.contains(&x)));
                }
            }
        }
        out
    }
}

pub fn wall_components(abg: &AnnulusBoundariedGraph) -> Vec<WallComponent> {
    let yv = abg.y.vertex_set();
    let mut out = Vec::new();
    for (u, v) in abg.k.edges() {
        if yv.contains(&u) && yv.contains(&v) && !abg.y.has_edge(u, v) {
            out.push(WallComponent { inner: VertexSet::new(), edges: vec![(u, v)], attach: [u, v].into() });
        }
    }
    let rest: VertexSet = abg.k.vertices().filter(|v| !yv.contains(v)).collect();
    let mut seen = VertexSet::new();
    for &s in &rest {
        if seen.contains(&s) {
            continue;
        }
        let inner = abg.k.reach(s, |x| rest.contains(&x));
        seen.extend(inner.iter().copied());
        let mut edges = BTreeSet::new();
        let mut attach = VertexSet::new();
        for &u in &inner {
            for w in abg.k.neighbors(u) {
                edges.insert(crate::graph::edge(u, w));
                if yv.contains(&w) {
                    attach.insert(w);
                }
            }
        }
        out.push(WallComponent { inner, edges: edges.into_iter().collect(), attach });
    }
    out
}

/// K restricted to V(H) plus the wall-components attached only to V(H).
pub fn att(abg: &AnnulusBoundariedGraph, h: &Graph) -> Graph {
    let hv = h.vertex_set();
    let mut keep = hv.clone();
    let mut extra: Vec<Edge> = Vec::new();
    for c in wall_components(abg) {
        if c.attach.is_subset(&hv) {
            keep.extend(c.inner.iter().copied());
            extra.extend(c.edges.iter().copied());
        }
    }
    let mut g = abg.k.induced(&hv).union(h);
    for v in keep {
        g.add_vertex(v);
    }
    g.add_edges(extra)
}

/// Brick index containing all attachments of `c`, if any.
fn brick_of(bricks: &[Vec<Vertex>], c: &WallComponent) -> Option<usize> {
    bricks.iter().position(|b| c.attach.iter().all(|a| b.contains(a)))
}

pub fn validate_annulus_boundaried(abg: &AnnulusBoundariedGraph) -> std::result::Result<(), AnnulusViolation> {
    if !abg.k.is_subgraph_of(&abg.graph) || !abg.k.is_connected() || abg.k.is_empty() {
        return Err(AnnulusViolation::KNotConnectedSubgraph);
    }
    if !abg.y.is_subgraph_of(&abg.k) {
        return Err(AnnulusViolation::YNotSubgraphOfK);
    }
    let cin: VertexSet = abg.c_in.iter().copied().collect();
    let cout: VertexSet = abg.c_out.iter().copied().collect();
    let cycles_ok = cin.len() == abg.c_in.len()
        && cout.len() == abg.c_out.len()
        && cin.is_disjoint(&cout)
        && abg.c_in.len() >= 3
        && abg.c_out.len() >= 3
        && cycle_graph(&abg.c_in).is_subgraph_of(&abg.y)
        && cycle_graph(&abg.c_out).is_subgraph_of(&abg.y);
    if !cycles_ok {
        return Err(AnnulusViolation::BadExtremalCycles);
    }
    let Some(bricks) = abg.bricks() else {
        return Err(AnnulusViolation::BadExtremalCycles);
    };
    let mut per_brick: Vec<Vec<WallComponent>> = vec![Vec::new(); bricks.len()];
    for c in wall_components(abg) {
        match brick_of(&bricks, &c) {
            Some(b) => per_brick[b].push(c),
            None => return Err(AnnulusViolation::ComponentOutsideBricks(c.attach)),
        }
    }
    for (i, comps) in per_brick.iter().enumerate() {
        if comps.is_empty() {
            continue;
        }
        let mut g = cycle_graph(&bricks[i]);
        for c in comps {
            g = g.add_edges(c.edges.iter().copied());
        }
        let (g, _) = with_apex(&g, &bricks[i]);
        if !is_planar(&g) {
            return Err(AnnulusViolation::BrickNotPlanar(i));
        }
    }
    let extremal = abg.extremal();
    for (u, v) in abg.graph.edges() {
        for (a, b) in [(u, v), (v, u)] {
            if abg.k.contains(a) && !extremal.contains(&a) && !abg.k.has_edge(a, b) {
                return Err(AnnulusViolation::EdgeLeavesAnnulus(a, b));
            }
        }
    }
    Ok(())
}

/// Separator (K, Y, 𝔸) splitting G into an inner side and an outer side.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AnnulusEmbeddedSeparator {
    pub graph: Graph,
    pub k: Graph,
    pub y: Graph,
    pub c_in: Vec<Vertex>,
    pub c_out: Vec<Vertex>,
    pub g_in: Graph,
    pub g_out: Graph,
}

impl AnnulusEmbeddedSeparator {
    /// Splits `graph` along K: the inner side collects what hangs on C_in.
    pub fn split(graph: &Graph, k: &Graph, y: &Graph, c_in: &[Vertex], c_out: &[Vertex]) -> Self {
        let abg = AnnulusBoundariedGraph {
            graph: graph.clone(),
            k: k.clone(),
            y: y.clone(),
            c_in: c_in.to_vec(),
            c_out: c_out.to_vec(),
        };
        let inner = abg.side_vertices(true);
        let outer: VertexSet = graph
            .vertices()
            .filter(|v| !inner.contains(v) || k.contains(*v))
            .collect();
        AnnulusEmbeddedSeparator {
            graph: graph.clone(),
            k: k.clone(),
            y: y.clone(),
            c_in: c_in.to_vec(),
            c_out: c_out.to_vec(),
            g_in: side_graph(graph, k, &inner, c_in),
            g_out: side_graph(graph, k, &outer, c_out),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let vin = self.g_in.vertex_set();
        let vout = self.g_out.vertex_set();
        let all: VertexSet = vin.union(&vout).copied().collect();
        let shared: VertexSet = vin.intersection(&vout).copied().collect();
        if all != self.graph.vertex_set() || shared != self.k.vertex_set() {
            return Err(Error::input("sides do not cover the graph or overlap outside K"));
        }
        if !(Separation { a: vin, b: vout }).is_separation_of(&self.graph) {
            return Err(Error::input("sides are not a separation"));
        }
        if self.g_in.union(&self.g_out) != self.graph {
            return Err(Error::input("sides do not cover every edge"));
        }
        let inner = AnnulusBoundariedGraph {
            graph: self.g_in.clone(),
            k: self.k.clone(),
            y: self.y.clone(),
            c_in: self.c_in.clone(),
            c_out: self.c_out.clone(),
        };
        validate_annulus_boundaried(&inner).map_err(|e| Error::input(format!("inner side: {e:?}")))?;
        let outer = AnnulusBoundariedGraph { graph: self.g_out.clone(), ..inner }.rev();
        validate_annulus_boundaried(&outer).map_err(|e| Error::input(format!("outer side: {e:?}")))?;
        Ok(())
    }
}

/// G[side] where an edge between K-vertices outside E(K) is kept only when both
/// ends lie on this side's extremal cycle.
fn side_graph(graph: &Graph, k: &Graph, side: &VertexSet, cycle: &[Vertex]) -> Graph {
    let mut g = graph.induced(side);
    for (u, v) in g.clone().edges() {
        let foreign = k.contains(u) && k.contains(v) && !k.has_edge(u, v);
        if foreign && !(cycle.contains(&u) && cycle.contains(&v)) {
            g.delete_edge(u, v);
        }
    }
    g
}

/// (planar(G), planar(G_in), planar(G_out)) for a validated separator.
pub fn glue_equivalence(sep: &AnnulusEmbeddedSeparator) -> Result<(bool, bool, bool)> {
    sep.validate()?;
    Ok((is_planar(&sep.graph), is_planar(&sep.g_in), is_planar(&sep.g_out)))
}
