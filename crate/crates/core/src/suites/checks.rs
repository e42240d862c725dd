//! Check batteries. Each compares a production routine with an independent
//! computation over a generated corpus and reports counts, not just a verdict.

use std::collections::BTreeMap;
use std::time::Instant;

use itertools::Itertools;
use rand::Rng;
use serde::Serialize;

use super::gen::{
    crafted_sig_instances, random_graph, random_pipeline_graph, random_separator, random_subset, random_tree, seeded,
    symmetric_two_wall_instances, OPS,
};
use crate::error::{Error, Result};
use crate::graph::grid::make_grid;
use crate::graph::{cycle_graph, Graph, Vertex, VertexSet};
use crate::logic::library::{fixed_sentences, LOCAL_FORMULAS};
use crate::logic::{check_fol, check_global, check_local, eval_gaifman, scattered_subset};
use crate::modification::{affected, application_domain, subsets, ModificationSet, Operation};
use crate::planarity::glue_equivalence;
use crate::signatures::oracle::{raw_char, raw_sig};
use crate::signatures::{bounded_compass, compute_char, compute_parameters, compute_sig, is_triple, ParamMode};
use crate::solver::{find_vertex, solve_oracle, solve_pipeline, Instance, PipelineConfig, Sentence};
use crate::treewidth::{exact_treewidth, treewidth_bnb, DEFAULT_CAP};
use crate::walls::{make_elementary_wall, strip_debris};

/// Failures beyond this many are counted but not described.
const MAX_LISTED: usize = 20;

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub passed: usize,
    pub total: usize,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
    pub millis: u128,
    /// Not started because the time budget ran out.
    pub skipped: bool,
}

impl CheckReport {
    fn new(name: &str) -> Self {
        CheckReport { name: name.into(), passed: 0, total: 0, failures: Vec::new(), notes: Vec::new(), millis: 0, skipped: false }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.total += 1;
        if ok {
            self.passed += 1;
        } else if self.failures.len() < MAX_LISTED {
            self.failures.push(what());
        }
    }

    fn fail(&mut self, what: String) {
        self.record(false, || what);
    }

    fn finish(mut self, start: Instant) -> Self {
        self.millis = start.elapsed().as_millis();
        self
    }

    /// Something ran and nothing failed.
    pub fn ok(&self) -> bool {
        self.total > 0 && self.passed == self.total
    }

    pub fn summary(&self) -> String {
        let mut s = format!("{}: {}/{} in {} ms", self.name, self.passed, self.total, self.millis);
        for n in &self.notes {
            s.push_str(&format!("; {n}"));
        }
        s
    }
}

fn top() -> Sentence {
    Sentence::Gaifman(crate::logic::GaifmanSentence::constant(true))
}

/// The four fixed oracle questions, each under one second.
pub fn oracle_examples() -> CheckReport {
    let start = Instant::now();
    let mut rep = CheckReport::new("oracle");
    let two_k5 = Graph::complete(5).disjoint_union(&Graph::complete(5), 5);
    let cases = [
        ("K5 vr", Graph::complete(5), Operation::Vr, true),
        ("K6 vr", Graph::complete(6), Operation::Vr, false),
        ("K5 er", Graph::complete(5), Operation::Er, true),
        ("2K5 vr", two_k5, Operation::Vr, false),
    ];
    for (name, g, op, expect) in cases {
        let t = Instant::now();
        let got = solve_oracle(&Instance::new(g, 1, op, top()), &PipelineConfig::default());
        let fast = t.elapsed().as_secs_f64() < 1.0;
        match got {
            Ok(a) => rep.record(a.answer == expect && fast, || format!("{name}: got {}, {:?}", a.answer, t.elapsed())),
            Err(e) => rep.fail(format!("{name}: {e}")),
        }
    }
    rep.finish(start)
}

/// Direct evaluation against first-order evaluation of the expansion.
pub fn gaifman_semantics(seed: u64, graphs: usize) -> CheckReport {
    let start = Instant::now();
    let mut rep = CheckReport::new("gaifman-semantics");
    let mut rng = seeded(seed);
    let sentences = fixed_sentences();
    let expanded: Vec<_> = sentences.iter().map(|(n, s)| (*n, s, s.expand())).collect();
    let mut yes = 0;
    for i in 0..graphs {
        let n = rng.gen_range(1..=7);
        let p = rng.gen_range(0.1..0.7);
        let g = random_graph(&mut rng, n, p);
        let r = random_subset(&mut rng, g.vertices().collect::<Vec<_>>(), 0.5);
        for (name, phi, f) in &expanded {
            match (eval_gaifman(&g, &r, phi), check_fol(&g, &r, f)) {
                (Ok(a), Ok(b)) => {
                    yes += a as usize;
                    rep.record(a == b, || format!("graph {i} ({name}): direct {a}, expanded {b}"));
                }
                (a, b) => rep.fail(format!("graph {i} ({name}): {a:?} / {b:?}")),
            }
        }
    }
    rep.notes.push(format!("{yes} true"));
    rep.finish(start)
}

/// check_global against check_local at the declared radius, per shipped ψ.
pub fn locality(seed: u64, pairs: usize) -> CheckReport {
    let start = Instant::now();
    let mut rep = CheckReport::new("locality");
    let mut rng = seeded(seed);
    for f in LOCAL_FORMULAS {
        let psi = f.psi();
        for i in 0..pairs {
            let n = rng.gen_range(2..=12);
            let p = rng.gen_range(0.1..0.5);
            let g = random_graph(&mut rng, n, p);
            let r = random_subset(&mut rng, g.vertices().collect::<Vec<_>>(), 0.5);
            let v: Vertex = rng.gen_range(0..n);
            match (check_global(&g, &r, v, &psi), check_local(&g, &r, v, &psi, f.r)) {
                (Ok(a), Ok(b)) => rep.record(a == b, || format!("{} pair {i}: global {a}, local {b}", f.name)),
                (a, b) => rep.fail(format!("{} pair {i}: {a:?} / {b:?}", f.name)),
            }
        }
    }
    rep.notes.push(format!("{} formulas", LOCAL_FORMULAS.len()));
    rep.finish(start)
}

/// planar(G) = planar(G_in) ∧ planar(G_out) on random separators.
pub fn gluing(seed: u64, count: usize) -> CheckReport {
    let start = Instant::now();
    let mut rep = CheckReport::new("gluing");
    let mut rng = seeded(seed);
    let mut nonplanar = 0;
    let mut one_side = 0;
    for i in 0..count {
        let res = random_separator(&mut rng).and_then(|sep| glue_equivalence(&sep));
        match res {
            Ok((g, a, b)) => {
                nonplanar += !g as usize;
                one_side += (a != b) as usize;
                rep.record(g == (a && b), || format!("separator {i}: G {g}, inner {a}, outer {b}"));
            }
            Err(e) => rep.fail(format!("separator {i}: {e}")),
        }
    }
    rep.notes.push(format!("{nonplanar} nonplanar, {one_side} with exactly one nonplanar side"));
    rep.finish(start)
}

/// Graph of the central q-subwall obtained by peeling outer layers.
fn peeled(wall: &crate::walls::Wall, layers: &[Vec<Vertex>], q: u32) -> Graph {
    let peel = ((wall.height - q) / 2) as usize;
    let outer: VertexSet = layers[..peel].iter().flatten().copied().collect();
    let mut g = wall.graph.remove_vertices(&outer);
    strip_debris(&mut g);
    g
}

/// Layer counts, plus central subwalls and the (5,3)-annulus of the 13-wall
/// against a re-derivation by peeling layers.
pub fn wall_combinatorics() -> CheckReport {
    let start = Instant::now();
    let mut rep = CheckReport::new("walls");
    let run = |rep: &mut CheckReport| -> Result<()> {
        for h in (3..=13).step_by(2) {
            let w = make_elementary_wall(h)?;
            let a = w.analyze();
            let cycles_ok = a.layers.iter().all(|c| cycle_graph(c).is_subgraph_of(&w.graph));
            let center_free = a.layers.iter().flatten().all(|v| !a.center.contains(v));
            rep.record(
                a.layers.len() == (h as usize - 1) / 2 && cycles_ok && center_free && w.validate().is_ok(),
                || format!("{h}-wall: {} layers", a.layers.len()),
            );
        }
        let w = make_elementary_wall(13)?;
        let layers = w.analyze().layers;
        for q in (3..=13).step_by(2) {
            let sub = w.central_subwall(q)?;
            rep.record(sub.graph == peeled(&w, &layers, q), || format!("central {q}-subwall differs"));
        }
        let ann = w.annulus(5, 3)?;
        // A_5^(3) = W^(11) minus V(W^(5)) minus debris, both subwalls by peeling.
        let hole = peeled(&w, &layers, 5).vertex_set();
        let mut expect = peeled(&w, &layers, 11).remove_vertices(&hole);
        strip_debris(&mut expect);
        let as_set = |c: &[Vertex]| c.iter().copied().collect::<VertexSet>();
        rep.record(ann.graph == expect, || "annulus (5,3) vertex or edge set differs".into());
        rep.record(
            as_set(&ann.c_out) == as_set(&layers[1]) && as_set(&ann.c_in) == as_set(&layers[3]),
            || "annulus (5,3) extremal cycles differ".into(),
        );
        rep.notes.push(format!("annulus has {} vertices", ann.graph.n()));
        Ok(())
    };
    if let Err(e) = run(&mut rep) {
        rep.fail(e.to_string());
    }
    rep.finish(start)
}

/// Known widths with validated witnesses, then subset DP against branch and
/// bound on random graphs.
pub fn treewidth(seed: u64, count: usize) -> CheckReport {
    let start = Instant::now();
    let mut rep = CheckReport::new("treewidth");
    let mut rng = seeded(seed);
    let mut known: Vec<(String, Graph, usize)> = Vec::new();
    for i in 0..10 {
        let n = rng.gen_range(2..=14);
        known.push((format!("tree {i} on {n}"), random_tree(&mut rng, n), 1));
    }
    for n in 1..=8 {
        known.push((format!("K{n}"), Graph::complete(n), n as usize - 1));
    }
    known.push(("4x4 grid".into(), make_grid(4, 4).expect("valid grid").graph, 4));
    for (name, g, tw) in known {
        match exact_treewidth(&g, DEFAULT_CAP.max(g.n())) {
            Ok((w, td)) => rep.record(w == tw && td.width() == w && td.is_valid(&g), || format!("{name}: width {w}")),
            Err(e) => rep.fail(format!("{name}: {e}")),
        }
    }
    for i in 0..count {
        let n = rng.gen_range(1..=12);
        let p = rng.gen_range(0.1..0.8);
        let g = random_graph(&mut rng, n, p);
        match (exact_treewidth(&g, DEFAULT_CAP), treewidth_bnb(&g, 50_000_000)) {
            (Ok((a, ta)), Ok((b, tb))) => rep.record(a == b && ta.is_valid(&g) && tb.is_valid(&g), || {
                format!("random graph {i}: dp {a}, bnb {b}")
            }),
            (a, b) => rep.fail(format!("random graph {i}: {:?} / {:?}", a.err(), b.err())),
        }
    }
    rep.finish(start)
}

/// scattered_subset against exhaustive search over candidate tuples.
pub fn scattered(seed: u64, count: usize) -> CheckReport {
    let start = Instant::now();
    let mut rep = CheckReport::new("scattered");
    let mut rng = seeded(seed);
    for i in 0..count {
        let n = rng.gen_range(1..=11);
        let p = rng.gen_range(0.05..0.5);
        let g = random_graph(&mut rng, n, p);
        let cands: Vec<Vertex> = random_subset(&mut rng, g.vertices().collect::<Vec<_>>(), 0.6).into_iter().collect();
        let ell = rng.gen_range(1..=3);
        let r = rng.gen_range(1..=2);
        let brute = cands.iter().copied().combinations(ell).any(|c| g.is_scattered(&c.into_iter().collect(), ell, r));
        let ok = match scattered_subset(&g, &cands, ell, r) {
            Some(x) => brute && x.iter().all(|v| cands.contains(v)) && g.is_scattered(&x.iter().copied().collect(), ell, r),
            None => !brute,
        };
        rep.record(ok, || format!("instance {i}: ell {ell}, r {r}, exhaustive {brute}"));
    }
    rep.finish(start)
}

/// compute_sig and compute_char against the literal comprehensions on the
/// crafted wall suite.
pub fn sig_oracle(seed: u64, count: usize) -> CheckReport {
    let start = Instant::now();
    let mut rep = CheckReport::new("sig-oracle");
    let instances = match crafted_sig_instances(count, seed) {
        Ok(v) => v,
        Err(e) => {
            rep.fail(e.to_string());
            return rep.finish(start);
        }
    };
    let mut sigs = 0;
    let mut largest = 0;
    for inst in &instances {
        let mut run = |rep: &mut CheckReport| -> Result<()> {
            let params = compute_parameters(inst.k, &inst.phi, ParamMode::Configured, &inst.cfg);
            let caps = &inst.cfg.caps;
            let ec = bounded_compass(&inst.graph, &inst.wall, &params, caps)?;
            largest = largest.max(ec.k.n());
            let r_k: VertexSet = inst.r_set.iter().copied().filter(|&v| ec.k.contains(v)).collect();
            let domain = application_domain(inst.op, &ec.k, &r_k);
            for z in params.z_range() {
                let level = ec.level(params.modification_level(z)).0.vertex_set();
                for set in subsets(&domain, 0..=inst.k) {
                    let s = ModificationSet::new(inst.op, set)?;
                    if !affected(&s).iter().all(|v| level.contains(v)) {
                        continue;
                    }
                    let fast = compute_sig(&ec, &r_k, z, &s, &inst.phi, &params)?;
                    let slow = raw_sig(&ec, &r_k, z, &s, &inst.phi, &params)?;
                    sigs += 1;
                    let same_json = serde_json::to_string(&fast).ok() == serde_json::to_string(&slow).ok();
                    if fast != slow || !same_json {
                        return Err(Error::CrossCheck(format!("sig differs at z={z}, S={}", s.to_json())));
                    }
                }
            }
            let fast = compute_char(&inst.graph, &inst.wall, &inst.r_set, inst.op, inst.k, &inst.phi, &params, caps)?;
            let slow = raw_char(&ec, &inst.r_set, inst.op, inst.k, &inst.phi, &params, caps)?;
            rep.record(fast == slow && fast.to_canonical_json() == slow.to_canonical_json(), || {
                format!("{}: char differs", inst.name)
            });
            Ok(())
        };
        if let Err(e) = run(&mut rep) {
            rep.fail(format!("{}: {e}", inst.name));
        }
    }
    rep.notes.push(format!("{sigs} signatures compared, largest compass {largest}"));
    rep.finish(start)
}

/// The parameter formulas at k = 1, ℓ = 2, r = 1.
pub fn parameters() -> CheckReport {
    let start = Instant::now();
    let mut rep = CheckReport::new("parameters");
    let phi = fixed_sentences().into_iter().find(|(n, _)| *n == "two-far-annotated").expect("fixed").1;
    let cfg = PipelineConfig { q_hat: 3, ..PipelineConfig::default() };
    let th = compute_parameters(1, &phi, ParamMode::Theoretical, &cfg);
    rep.record((th.r, th.ell, th.d, th.rho) == (1, 2, 10, 30), || format!("r, ℓ, d, ρ = {}, {}, {}, {}", th.r, th.ell, th.d, th.rho));
    rep.record(th.w.to_string() == "2^(60·2^120)·15", || format!("w renders as {}", th.w));
    rep.record(serde_json::to_string(&th).is_ok(), || "theoretical parameters do not serialise".into());
    let conf = compute_parameters(1, &phi, ParamMode::Configured, &cfg);
    match &conf.area {
        Some(a) => rep.record((a.m, a.r_area) == (9, 43), || format!("m {}, r_area {}", a.m, a.r_area)),
        None => rep.fail("configured run has no area constants".into()),
    }
    rep.notes.push(format!("w = {}, q = {}", th.w, th.q));
    rep.finish(start)
}

/// solve_pipeline against solve_oracle on small random instances with every
/// step cross-checked.
pub fn pipeline_vs_oracle(seed: u64, count: usize) -> CheckReport {
    let start = Instant::now();
    let mut rep = CheckReport::new("pipeline-vs-oracle");
    let mut rng = seeded(seed);
    let sentences = fixed_sentences();
    let cfg = PipelineConfig::default();
    let mut steps: BTreeMap<String, usize> = BTreeMap::new();
    let (mut incomplete, mut yes) = (0, 0);
    for i in 0..count {
        let g = random_pipeline_graph(&mut rng);
        let op = OPS[rng.gen_range(0..OPS.len())];
        let k = rng.gen_range(0..=2);
        let (name, phi) = sentences[rng.gen_range(0..sentences.len())].clone();
        let r = if rng.gen_bool(0.3) { g.vertex_set() } else { random_subset(&mut rng, g.vertices().collect::<Vec<_>>(), 0.7) };
        let label = format!("instance {i} ({op:?}, k={k}, {name}, n={}, m={})", g.n(), g.m());
        let inst = match Instance::new(g, k, op, Sentence::Gaifman(phi)).with_annotation(r) {
            Ok(inst) => inst,
            Err(e) => {
                rep.fail(format!("{label}: {e}"));
                continue;
            }
        };
        let oracle = match solve_oracle(&inst, &cfg) {
            Ok(a) => a.answer,
            Err(e) => {
                rep.fail(format!("{label}: oracle {e}"));
                continue;
            }
        };
        match solve_pipeline(&inst, &cfg) {
            Ok(run) => {
                for t in &run.trace {
                    *steps.entry(t.outcome.clone()).or_default() += 1;
                }
                yes += run.answer as usize;
                rep.record(run.answer == oracle, || format!("{label}: pipeline {}, oracle {oracle}", run.answer));
            }
            Err(f) if f.error.is_resource() => incomplete += 1,
            Err(f) => rep.fail(format!("{label}: {}", f.error)),
        }
    }
    rep.notes.push(format!("completed {}/{count}", count - incomplete));
    rep.notes.push(format!("{yes} yes"));
    rep.notes.push(format!("steps {steps:?}"));
    rep.finish(start)
}

/// find_vertex on the symmetric two-wall suite, each (X, v) checked by
/// exhaustive search before and after.
pub fn replacement() -> CheckReport {
    let start = Instant::now();
    let mut rep = CheckReport::new("replacement");
    let instances = match symmetric_two_wall_instances() {
        Ok(v) => v,
        Err(e) => {
            rep.fail(e.to_string());
            return rep.finish(start);
        }
    };
    for inst in &instances {
        let run = || -> Result<(bool, bool, usize, Vertex)> {
            let params = compute_parameters(inst.k, &inst.phi, ParamMode::Configured, &inst.cfg);
            let cfg = &inst.cfg;
            let (x, v) = find_vertex(inst.k, &inst.graph, &inst.r_set, &inst.wall, inst.op, &inst.phi, &params, cfg)?;
            let cap = cfg.caps.enumeration;
            let before = is_triple(&inst.graph, &inst.r_set, inst.k, inst.op, &inst.phi, cfg.size_mode, cap)?;
            let r_after: VertexSet = inst.r_set.difference(&x).copied().collect();
            let g_after = inst.graph.remove_vertex(v);
            let after = is_triple(&g_after, &r_after, inst.k, inst.op, &inst.phi, cfg.size_mode, cap)?;
            Ok((before.is_some(), after.is_some(), x.len(), v))
        };
        match run() {
            Ok((a, b, nx, v)) => {
                rep.record(a == b, || format!("{}: before {a}, after {b}", inst.name));
                rep.notes.push(format!("{}: |X| = {nx}, v = {v}, answer {a}", inst.name));
            }
            Err(e) => rep.fail(format!("{}: {e}", inst.name)),
        }
    }
    rep.finish(start)
}

pub const SUITES: &[&str] = &["locality", "gluing", "scattered", "decomposition", "sig-oracle", "pipeline-vs-oracle", "all"];

type Battery = Box<dyn Fn() -> CheckReport + Send + Sync>;

/// The batteries of a named suite; `n` overrides each corpus size.
fn batteries(name: &str, seed: u64, n: Option<usize>) -> Result<Vec<(&'static str, Battery)>> {
    let size = move |default: usize| n.unwrap_or(default);
    let all: Vec<(&'static str, Battery)> = vec![
        ("oracle", Box::new(oracle_examples)),
        ("gaifman-semantics", Box::new(move || gaifman_semantics(seed, size(200)))),
        ("locality", Box::new(move || locality(seed, size(300)))),
        ("gluing", Box::new(move || gluing(seed, size(100)))),
        ("walls", Box::new(wall_combinatorics)),
        ("decomposition", Box::new(move || treewidth(seed, size(100)))),
        ("scattered", Box::new(move || scattered(seed, size(300)))),
        ("sig-oracle", Box::new(move || sig_oracle(seed, size(24)))),
        ("parameters", Box::new(parameters)),
        ("pipeline-vs-oracle", Box::new(move || pipeline_vs_oracle(seed, size(500)))),
        ("replacement", Box::new(replacement)),
    ];
    if name == "all" {
        return Ok(all);
    }
    let picked: Vec<_> = all.into_iter().filter(|(b, _)| *b == name).collect();
    if picked.is_empty() || !SUITES.contains(&name) {
        return Err(Error::input(format!("unknown suite {name}; expected one of {}", SUITES.join(", "))));
    }
    Ok(picked)
}

/// Runs a named suite with its batteries in parallel; reports come back in
/// suite order. Batteries not yet started when `deadline` passes are skipped.
pub fn run_suite(name: &str, seed: u64, n: Option<usize>, deadline: Option<Instant>) -> Result<Vec<CheckReport>> {
    use rayon::prelude::*;
    let list = batteries(name, seed, n)?;
    Ok(list
        .par_iter()
        .map(|(b, run)| {
            if deadline.is_some_and(|d| Instant::now() >= d) {
                CheckReport { skipped: true, ..CheckReport::new(b) }
            } else {
                run()
            }
        })
        .collect())
}
