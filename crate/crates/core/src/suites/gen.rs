//! Seeded generators: random graphs, annulus-embedded separators, and the
//! crafted wall instances the batteries run on.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex, VertexSet};
use crate::logic::library::{fixed_sentences, local_formula};
use crate::logic::{BasicSentence, Comb, GaifmanSentence};
use crate::modification::Operation;
use crate::planarity::{embed, AnnulusBoundariedGraph, AnnulusEmbeddedSeparator};
use crate::solver::star::k5_star;
use crate::solver::PipelineConfig;
use crate::walls::{make_elementary_wall, Wall};

pub const OPS: [Operation; 4] = [Operation::Vr, Operation::Er, Operation::Ec, Operation::Ea];

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// G(n, p) on vertices 0..n.
pub fn random_graph(rng: &mut impl Rng, n: u32, p: f64) -> Graph {
    let mut g = Graph::with_vertices(0..n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// Uniform random recursive tree on 0..n.
pub fn random_tree(rng: &mut impl Rng, n: u32) -> Graph {
    let mut g = Graph::with_vertices(0..n);
    for v in 1..n {
        g.add_edge(rng.gen_range(0..v), v);
    }
    g
}

pub fn random_subset(rng: &mut impl Rng, vs: impl IntoIterator<Item = Vertex>, p: f64) -> VertexSet {
    vs.into_iter().filter(|_| rng.gen_bool(p)).collect()
}

/// The faces of a plane wall other than the one bounded by its perimeter,
/// each rotated to start at its least vertex and turned towards the smaller
/// neighbour, so translated walls give translated bricks.
pub fn bricks(w: &Wall) -> Vec<Vec<Vertex>> {
    let perim: VertexSet = w.perimeter().into_iter().collect();
    let emb = embed(&w.graph).expect("walls are planar");
    emb.faces()
        .into_iter()
        .filter(|f| f.iter().copied().collect::<VertexSet>() != perim)
        .map(|mut f| {
            let at = f.iter().enumerate().min_by_key(|(_, &v)| v).map_or(0, |(i, _)| i);
            f.rotate_left(at);
            if f.len() > 2 && f[1] > f[f.len() - 1] {
                f[1..].reverse();
            }
            f
        })
        .collect()
}

fn fresh(next: &mut Vertex) -> Vertex {
    *next += 1;
    *next - 1
}

/// A path from `a` to `b` through `len` new vertices.
fn add_path(g: &mut Graph, a: Vertex, b: Vertex, len: usize, next: &mut Vertex) {
    let mut prev = a;
    for _ in 0..len {
        let v = fresh(next);
        g.add_edge(prev, v);
        prev = v;
    }
    g.add_edge(prev, b);
}

/// Hangs one random piece on `cycle` (given in cyclic order). Some pieces are
/// planar, some are not, and some only fail when drawn inside one face.
fn attach_gadget<R: Rng>(rng: &mut R, g: &mut Graph, cycle: &[Vertex], next: &mut Vertex) {
    let pick = |rng: &mut R| cycle[rng.gen_range(0..cycle.len())];
    match rng.gen_range(0..7) {
        0 => {}
        1 => {
            let (a, b) = (pick(rng), pick(rng));
            let len = rng.gen_range(1..=3);
            add_path(g, a, b, len, next);
        }
        2 => {
            let hub = fresh(next);
            g.add_vertex(hub);
            for _ in 0..rng.gen_range(2..=5) {
                g.add_edge(hub, pick(rng));
            }
        }
        3 => {
            // Interleaved a < b < c < d around the cycle: a–c and b–d cross.
            let mut idx: Vec<usize> = (0..cycle.len()).collect();
            idx.shuffle(rng);
            let mut four = idx[..4].to_vec();
            four.sort_unstable();
            add_path(g, cycle[four[0]], cycle[four[2]], 1, next);
            add_path(g, cycle[four[1]], cycle[four[3]], 1, next);
        }
        4 => {
            let vs: Vec<Vertex> = (0..5).map(|_| fresh(next)).collect();
            for (i, &a) in vs.iter().enumerate() {
                for &b in &vs[i + 1..] {
                    g.add_edge(a, b);
                }
            }
            g.add_edge(vs[0], pick(rng));
        }
        5 => {
            let vs: Vec<Vertex> = (0..6).map(|_| fresh(next)).collect();
            for &a in &vs[..3] {
                for &b in &vs[3..] {
                    g.add_edge(a, b);
                }
            }
            g.add_edge(vs[0], pick(rng));
        }
        _ => {
            let vs: Vec<Vertex> = (0..rng.gen_range(3..=5)).map(|_| fresh(next)).collect();
            for (i, &a) in vs.iter().enumerate() {
                g.add_vertex(a);
                for &b in &vs[i + 1..] {
                    if rng.gen_bool(0.6) {
                        g.add_edge(a, b);
                    }
                }
            }
            g.add_edge(vs[0], pick(rng));
            for &a in &vs[1..] {
                if rng.gen_bool(0.4) {
                    g.add_edge(a, pick(rng));
                }
            }
        }
    }
}

/// A separator built on the (3,3)-annulus of a 7-wall: K adds brick chords and
/// brick-bound vertices to Y, and random pieces hang on both extremal cycles.
pub fn random_separator(rng: &mut impl Rng) -> Result<AnnulusEmbeddedSeparator> {
    let ann = make_elementary_wall(7)?.annulus(3, 3)?;
    let y = ann.graph.clone();
    let probe = AnnulusBoundariedGraph {
        graph: y.clone(),
        k: y.clone(),
        y: y.clone(),
        c_in: ann.c_in.clone(),
        c_out: ann.c_out.clone(),
    };
    let bricks = probe.bricks().ok_or_else(|| Error::input("annulus is not plane"))?;
    let mut k = y.clone();
    let mut next = y.max_id().map_or(0, |m| m + 1);
    for brick in &bricks {
        match rng.gen_range(0..4) {
            0 => {
                let a = rng.gen_range(0..brick.len());
                let b = rng.gen_range(0..brick.len());
                if a != b && !k.has_edge(brick[a], brick[b]) {
                    k.add_edge(brick[a], brick[b]);
                }
            }
            1 => {
                let v = fresh(&mut next);
                for _ in 0..rng.gen_range(1..=3) {
                    k.add_edge(v, brick[rng.gen_range(0..brick.len())]);
                }
            }
            _ => {}
        }
    }
    let mut graph = k.clone();
    for cycle in [&ann.c_in, &ann.c_out] {
        for _ in 0..rng.gen_range(1..=2) {
            attach_gadget(rng, &mut graph, cycle, &mut next);
        }
    }
    Ok(AnnulusEmbeddedSeparator::split(&graph, &k, &y, &ann.c_in, &ann.c_out))
}

/// The elementary wall with each edge subdivided 0..=max_extra times.
pub fn random_wall(height: u32, max_extra: u32, seed: u64) -> Result<Wall> {
    let w = make_elementary_wall(height)?;
    let mut rng = seeded(seed);
    let extra: Vec<u32> = (0..w.graph.m()).map(|_| rng.gen_range(0..=max_extra)).collect();
    Ok(w.subdivide(&extra))
}

pub fn single_basic(ell: usize, name: &str) -> GaifmanSentence {
    let f = local_formula(name).expect("known formula");
    let b = BasicSentence::new(ell, f.r, f.psi()).expect("valid basic");
    GaifmanSentence::new(vec![b], Comb::Basic(1), true).expect("valid sentence")
}

/// The fixed sentences followed by a few single basics.
pub fn sentence_pool() -> Vec<(String, GaifmanSentence)> {
    let mut out: Vec<(String, GaifmanSentence)> =
        fixed_sentences().into_iter().map(|(n, s)| (n.to_string(), s)).collect();
    for (ell, name) in [(2, "degree-at-least-three"), (1, "near-annotated"), (3, "degree-two")] {
        out.push((format!("{ell}x{name}"), single_basic(ell, name)));
    }
    out
}

/// A wall inside a host graph together with an annotated question about it.
#[derive(Clone, Debug)]
pub struct WallInstance {
    pub name: String,
    pub graph: Graph,
    pub wall: Wall,
    pub r_set: VertexSet,
    pub op: Operation,
    pub k: usize,
    pub phi: GaifmanSentence,
    pub cfg: PipelineConfig,
}

/// Configuration with one level and d = 1.
pub fn small_config() -> PipelineConfig {
    PipelineConfig { rho_hat: 1, d_hat: Some(1), ..PipelineConfig::default() }
}

/// Adds one decoration inside `brick`; returns the new vertices.
fn decorate_brick(g: &mut Graph, brick: &[Vertex], kind: usize, next: &mut Vertex) -> Vec<Vertex> {
    let n = brick.len();
    match kind {
        // chord across the brick
        0 => {
            g.add_edge(brick[0], brick[n / 2]);
            vec![]
        }
        // vertex on three brick vertices
        1 => {
            let v = fresh(next);
            for i in [0, n / 3, 2 * n / 3] {
                g.add_edge(v, brick[i]);
            }
            vec![v]
        }
        // pendant triangle
        2 => {
            let (a, b) = (fresh(next), fresh(next));
            g.add_edge(a, b);
            g.add_edge(a, brick[1]);
            g.add_edge(b, brick[1]);
            vec![a, b]
        }
        // K5 sharing one brick vertex
        3 => {
            let mut vs: Vec<Vertex> = (0..4).map(|_| fresh(next)).collect();
            vs.push(brick[2]);
            for (i, &a) in vs.iter().enumerate() {
                for &b in &vs[i + 1..] {
                    g.add_edge(a, b);
                }
            }
            vs[..4].to_vec()
        }
        // pendant path
        _ => {
            let (a, b) = (fresh(next), fresh(next));
            g.add_edge(brick[0], a);
            g.add_edge(a, b);
            vec![a, b]
        }
    }
}

/// Decorated 3-walls, each compass at most 40 vertices, across all operations,
/// budgets 0 and 1, and the sentence pool.
pub fn crafted_sig_instances(count: usize, seed: u64) -> Result<Vec<WallInstance>> {
    let mut rng = seeded(seed);
    let sentences = sentence_pool();
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let wall = make_elementary_wall(3)?;
        let mut g = wall.graph.clone();
        let mut next = 100;
        let mut kinds = Vec::new();
        for brick in bricks(&wall) {
            if rng.gen_bool(0.6) {
                let kind = rng.gen_range(0..5);
                decorate_brick(&mut g, &brick, kind, &mut next);
                kinds.push(kind);
            }
        }
        // Outside the compass: a pendant and sometimes a K5 on the perimeter.
        let perim = wall.perimeter();
        let out_v = fresh(&mut next);
        g.add_edge(out_v, perim[rng.gen_range(0..perim.len())]);
        if rng.gen_bool(0.3) {
            let vs: Vec<Vertex> = (0..5).map(|_| fresh(&mut next)).collect();
            for (j, &a) in vs.iter().enumerate() {
                for &b in &vs[j + 1..] {
                    g.add_edge(a, b);
                }
            }
            g.add_edge(vs[0], out_v);
        }
        let density = [0.3, 0.6, 1.0][i % 3];
        let r_set = random_subset(&mut rng, g.vertices().collect::<Vec<_>>(), density);
        let (name, phi) = sentences[i % sentences.len()].clone();
        let op = OPS[i % 4];
        let k = (i / 4) % 2;
        out.push(WallInstance {
            name: format!("crafted-{i}: {op:?} k={k} {name} bricks={kinds:?} R={density}"),
            graph: g,
            wall,
            r_set,
            op,
            k,
            phi,
            cfg: small_config(),
        });
    }
    Ok(out)
}

/// 7-walls in which two disjoint 3-blocks carry identical decorations, so at
/// least two subwalls share a characteristic.
pub fn symmetric_two_wall_instances() -> Result<Vec<WallInstance>> {
    let sentences = sentence_pool();
    let by_name = |n: &str| sentences.iter().find(|(m, _)| m == n).expect("pooled").1.clone();
    let specs: [(Operation, usize, &str, usize, bool); 4] = [
        (Operation::Vr, 1, "two-far-annotated", 1, true),
        (Operation::Er, 1, "no-annotated-triangle", 2, false),
        (Operation::Ec, 1, "path-vertex-without-far-isolated-pair", 4, true),
        (Operation::Vr, 1, "some-annotated-non-isolated", 3, false),
    ];
    let mut out = Vec::new();
    for (i, (op, k, phi_name, kind, k5_outside)) in specs.into_iter().enumerate() {
        let wall = make_elementary_wall(7)?;
        let mut g = wall.graph.clone();
        let mut next = 1000;
        for (x0, y0) in [(1, 1), (7, 1)] {
            let block = wall.block_subwall(x0, y0, 3)?;
            let brick = bricks(&block).into_iter().min().expect("3-walls have bricks");
            decorate_brick(&mut g, &brick, kind, &mut next);
        }
        if k5_outside {
            let vs: Vec<Vertex> = (0..5).map(|_| fresh(&mut next)).collect();
            for (j, &a) in vs.iter().enumerate() {
                for &b in &vs[j + 1..] {
                    g.add_edge(a, b);
                }
            }
            g.add_edge(vs[0], wall.perimeter()[0]);
        }
        // Symmetric annotation: everything except the top row of the wall.
        let top: VertexSet = wall.branch.iter().filter(|(_, p)| p.1 == 7).map(|(&v, _)| v).collect();
        let r_set: VertexSet = if i % 2 == 0 { g.vertex_set() } else { g.vertex_set().difference(&top).copied().collect() };
        out.push(WallInstance {
            name: format!("two-wall-{i}: {op:?} k={k} {phi_name}"),
            graph: g,
            wall,
            r_set,
            op,
            k,
            phi: by_name(phi_name),
            cfg: PipelineConfig { bucket: 2, cross_check: false, ..small_config() },
        });
    }
    Ok(out)
}

/// A random small annotated instance for the pipeline battery.
pub fn random_pipeline_graph(rng: &mut impl Rng) -> Graph {
    match rng.gen_range(0..10) {
        0 | 1 => k5_star(2),
        2 | 3 => {
            // K5 or K3,3 plus random extra vertices
            let base = if rng.gen_bool(0.5) { Graph::complete(5) } else { Graph::complete_bipartite(3, 3) };
            let extra = rng.gen_range(0..=(9 - base.n() as u32));
            let mut g = base.clone();
            for v in base.n() as u32..base.n() as u32 + extra {
                g.add_vertex(v);
                for u in 0..v {
                    if rng.gen_bool(0.3) {
                        g.add_edge(u, v);
                    }
                }
            }
            g
        }
        _ => {
            let n = rng.gen_range(4..=9);
            let p = rng.gen_range(0.2..0.8);
            random_graph(rng, n, p)
        }
    }
}
