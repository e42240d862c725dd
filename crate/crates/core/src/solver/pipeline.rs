use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;

use super::config::PipelineConfig;
use super::oracle::{solve_oracle, Instance, Sentence};
use super::star::find_star_minor;
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex, VertexSet};
use crate::logic::{Formula, GaifmanSentence};
use crate::modification::{
    application_domain, count_subsets, find_vr_planarizer_within, is_planarization_irrelevant, is_planarizer, subsets,
    ModificationSet, Operation,
};
use crate::planarity::is_planar;
use crate::signatures::{
    bounded_compass, char_of_compass, compute_parameters, is_triple, AreaParameters, ParamMode, Parameters,
};
use crate::treewidth::{certify_width, TreeDecomposition};
use crate::walls::{compass, extended_compass, search_wall, Wall};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum StepOutcome {
    NoInstance,
    ObligatoryVertex { u: Vertex },
    IrrelevantRegion { x: VertexSet, v: Vertex },
    BoundedTreewidth { td: TreeDecomposition },
}

#[derive(Clone, Debug)]
pub enum AreaOutcome {
    NoInstance,
    ObligatoryVertex(Vertex),
    /// A wall whose compass passed every check of the area step.
    Wall { wall: Wall, compass: Graph },
    BoundedTreewidth(TreeDecomposition),
}

fn enumerable(n: usize, k: usize, cfg: &PipelineConfig) -> Result<()> {
    let count = count_subsets(n, 0..=k);
    if count > cfg.caps.enumeration {
        return Err(Error::cap(format!("{count} modification sets"), cfg.caps.enumeration, "--cap-enum"));
    }
    Ok(())
}

/// The area step. `s` is a vr-planarizer of size ≤ k. The star test runs
/// first, then the treewidth bound f1, then a wall search in G − N[S] whose
/// compass must avoid N[S], have treewidth ≤ f2 and be planarization
/// irrelevant; the last condition is checked by enumeration.
pub fn find_area(k: usize, q: usize, g: &Graph, s: &VertexSet, op: Operation, cfg: &PipelineConfig) -> Result<AreaOutcome> {
    if op == Operation::Ea && !is_planar(g) {
        return Ok(AreaOutcome::NoInstance);
    }
    if op != Operation::Ea {
        for &u in s {
            if find_star_minor(g, u, k + 1, cfg.caps.search_nodes).is_some() {
                return Ok(if op == Operation::Vr { AreaOutcome::ObligatoryVertex(u) } else { AreaOutcome::NoInstance });
            }
        }
    }
    let area = AreaParameters::new(k, q, cfg.c1, cfg.c2);
    let tw = certify_width(g, area.f1, cfg.caps.treewidth);
    if let Ok(Some(td)) = &tw {
        debug_assert!(td.is_valid(g));
        return Ok(AreaOutcome::BoundedTreewidth(td.clone()));
    }
    let mut closed = s.clone();
    for &v in s {
        closed.extend(g.neighbors(v));
    }
    let rest = g.remove_vertices(&closed);
    let Some(wall) = search_wall(&rest, q as u32, cfg.caps.max_subdivision, cfg.caps.search_nodes)? else {
        tw?;
        return Err(Error::Resource(format!(
            "treewidth exceeds f1 = {} but no {q}-wall avoids N[S] within the search limits",
            area.f1
        )));
    };
    let comp = compass(g, &wall)?;
    let vc = comp.vertex_set();
    if !vc.is_disjoint(&closed) {
        return Err(Error::Resource("the wall's compass meets N[S]".into()));
    }
    if certify_width(&comp, area.f2, cfg.caps.treewidth)?.is_none() {
        return Err(Error::Resource(format!("compass treewidth exceeds f2 = {}", area.f2)));
    }
    enumerable(application_domain(op, g, &g.vertex_set()).len(), k, cfg)?;
    if !is_planarization_irrelevant(g, op, k, &vc) {
        return Err(Error::Resource("the wall's compass is not planarization irrelevant".into()));
    }
    Ok(AreaOutcome::Wall { wall, compass: comp })
}

/// Disjoint (2ρ+1)-subwalls of `wall` with pairwise disjoint compasses in `g`,
/// scanned in row-major order of their lower-left corners.
pub fn disjoint_subwalls(g: &Graph, wall: &Wall, rho: usize) -> Result<Vec<Wall>> {
    let h = 2 * rho as u32 + 1;
    let q = wall.height;
    let mut taken = VertexSet::new();
    let mut out = Vec::new();
    if h > q {
        return Ok(out);
    }
    for y0 in 1..=q - h + 1 {
        for x0 in 1..=2 * (q - h) + 1 {
            if (x0 + y0) % 2 != 0 {
                continue;
            }
            let Ok(sub) = wall.block_subwall(x0, y0, h) else { continue };
            let comp = compass(g, &sub)?;
            if comp.vertices().any(|v| taken.contains(&v)) {
                continue;
            }
            taken.extend(comp.vertices());
            out.push(sub);
        }
    }
    Ok(out)
}

/// The vertex step on a wall from the area step: either the early exit on a
/// subwall whose compass misses R, or the first class of at least
/// `cfg.bucket` equivalent subwalls. With cross-checking on, the returned pair
/// is committed only if the triple status is unchanged.
#[allow(clippy::too_many_arguments)]
pub fn find_vertex(
    k: usize,
    g: &Graph,
    r_set: &VertexSet,
    wall: &Wall,
    op: Operation,
    phi: &GaifmanSentence,
    params: &Parameters,
    cfg: &PipelineConfig,
) -> Result<(VertexSet, Vertex)> {
    let subwalls = disjoint_subwalls(g, wall, params.rho)?;
    if subwalls.is_empty() {
        return Err(Error::Resource(format!(
            "a {}-wall holds no {}-subwall",
            wall.height,
            2 * params.rho + 1
        )));
    }
    let mut pick = None;
    for sub in &subwalls {
        let ec = extended_compass(g, sub, params.rho)?;
        if ec.k.vertices().all(|v| !r_set.contains(&v)) {
            let level = params.rho.saturating_sub(1).max(1);
            pick = Some((ec.level(level).0.vertex_set(), sub.center()[0]));
            break;
        }
    }
    if pick.is_none() {
        let mut buckets: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        let mut order = Vec::new();
        for (i, sub) in subwalls.iter().enumerate() {
            let ec = bounded_compass(g, sub, params, &cfg.caps)?;
            let r_k: VertexSet = r_set.iter().copied().filter(|&v| ec.k.contains(v)).collect();
            let key = char_of_compass(&ec, &r_k, op, k, phi, params, &cfg.caps)?.to_canonical_json();
            if !buckets.contains_key(&key) {
                order.push(key.clone());
            }
            buckets.entry(key).or_default().push(i);
        }
        let Some(first) = order.iter().map(|key| &buckets[key]).find(|b| b.len() >= cfg.bucket.max(1)) else {
            return Err(Error::Resource(format!(
                "{} subwalls fall into {} classes, none of size {}",
                subwalls.len(),
                buckets.len(),
                cfg.bucket
            )));
        };
        let w1 = &subwalls[first[0]];
        let ec = extended_compass(g, w1, params.rho)?;
        let level = params.r.clamp(1, params.rho);
        pick = Some((ec.level(level).0.vertex_set(), w1.center()[0]));
    }
    let (x, v) = pick.expect("chosen above");
    if cfg.cross_check {
        let before = is_triple(g, r_set, k, op, phi, cfg.size_mode, cfg.caps.enumeration)?.is_some();
        let r_after: VertexSet = r_set.difference(&x).copied().collect();
        let after = is_triple(&g.remove_vertex(v), &r_after, k, op, phi, cfg.size_mode, cfg.caps.enumeration)?.is_some();
        if before != after {
            return Err(Error::CrossCheck(format!(
                "removing {v} and unannotating {} vertices changes the answer from {before} to {after}",
                x.len()
            )));
        }
    }
    Ok((x, v))
}

fn check_obligatory(g: &Graph, u: Vertex, k: usize) -> Result<()> {
    let mut others = g.vertex_set();
    others.remove(&u);
    if find_vr_planarizer_within(g, k, &others).is_some() {
        return Err(Error::CrossCheck(format!("vertex {u} is avoided by some planarizer of size ≤ {k}")));
    }
    Ok(())
}

fn check_no_planarizer(g: &Graph, r_set: &VertexSet, op: Operation, k: usize, cfg: &PipelineConfig) -> Result<()> {
    let domain = application_domain(op, g, r_set);
    enumerable(domain.len(), k, cfg)?;
    for set in subsets(&domain, 0..=k) {
        if is_planarizer(g, &ModificationSet::new(op, set)?)? {
            return Err(Error::CrossCheck(format!("a {op}-planarizer of size ≤ {k} exists")));
        }
    }
    Ok(())
}

/// One reduction step for an instance with vr-planarizer `s` ⊆ R.
#[allow(clippy::too_many_arguments)]
pub fn reduce_instance(
    k: usize,
    g: &Graph,
    s: &VertexSet,
    r_set: &VertexSet,
    op: Operation,
    phi: &GaifmanSentence,
    params: &Parameters,
    cfg: &PipelineConfig,
) -> Result<StepOutcome> {
    let planarizes = op == Operation::Ea || is_planar(&g.remove_vertices(s));
    if s.len() > k || !s.is_subset(r_set) || !planarizes {
        return Err(Error::input("s must be a vr-planarizer inside R of size at most k"));
    }
    let q = params.q.as_usize().unwrap_or(usize::MAX);
    Ok(match find_area(k, q, g, s, op, cfg)? {
        AreaOutcome::NoInstance => {
            if cfg.cross_check {
                check_no_planarizer(g, r_set, op, k, cfg)?;
            }
            StepOutcome::NoInstance
        }
        AreaOutcome::ObligatoryVertex(u) => {
            if cfg.cross_check {
                check_obligatory(g, u, k)?;
            }
            StepOutcome::ObligatoryVertex { u }
        }
        AreaOutcome::BoundedTreewidth(td) => StepOutcome::BoundedTreewidth { td },
        AreaOutcome::Wall { wall, .. } => {
            let (x, v) = find_vertex(k, g, r_set, &wall, op, phi, params, cfg)?;
            if !x.contains(&v) || !s.is_disjoint(&x) {
                return Err(Error::CrossCheck("the region must contain v and avoid S".into()));
            }
            StepOutcome::IrrelevantRegion { x, v }
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub step: usize,
    pub outcome: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub removed: Option<Vertex>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub region: Option<VertexSet>,
    pub k: usize,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineRun {
    pub answer: bool,
    pub trace: Vec<TraceStep>,
    /// `None` when the oracle was skipped or exceeded its caps.
    pub oracle_agrees: Option<bool>,
    pub params: Parameters,
}

#[derive(Clone, Debug)]
pub struct PipelineFailure {
    pub error: Error,
    pub trace: Vec<TraceStep>,
}

/// φ̃ for the pipeline. Plain first-order input is accepted only as a constant.
pub fn pipeline_sentence(inst: &Instance) -> Result<GaifmanSentence> {
    match &inst.phi {
        Sentence::Fol(Formula::True) => Ok(GaifmanSentence::constant(true)),
        Sentence::Fol(Formula::False) => Ok(GaifmanSentence::constant(false)),
        Sentence::Fol(_) => Err(Error::input(
            "the pipeline takes Gaifman sentences; plain first-order sentences need --oracle",
        )),
        Sentence::Gaifman(phi) if phi.annotated => Ok(phi.clone()),
        Sentence::Gaifman(phi) => {
            if inst.r_set != inst.graph.vertex_set() {
                return Err(Error::input("an annotation needs an annotated sentence"));
            }
            Ok(phi.with_annotated(true))
        }
    }
}

pub fn solve_pipeline(inst: &Instance, cfg: &PipelineConfig) -> std::result::Result<PipelineRun, PipelineFailure> {
    let mut trace = Vec::new();
    match run(inst, cfg, &mut trace) {
        Ok(run) => Ok(run),
        Err(error) => Err(PipelineFailure { error, trace }),
    }
}

fn run(inst: &Instance, cfg: &PipelineConfig, trace: &mut Vec<TraceStep>) -> Result<PipelineRun> {
    let phi = pipeline_sentence(inst)?;
    let op = inst.op;
    let (mut g, mut r, mut k) = (inst.graph.clone(), inst.r_set.clone(), inst.k);
    let params = compute_parameters(k, &phi, ParamMode::Configured, cfg);
    let answer;
    loop {
        let started = Instant::now();
        let mut record = |outcome: &str, removed: Option<Vertex>, region: Option<VertexSet>, k: usize, n: usize| {
            trace.push(TraceStep {
                step: trace.len() + 1,
                outcome: outcome.into(),
                removed,
                region,
                k,
                n,
                millis: cfg.timings.then(|| started.elapsed().as_millis() as u64),
            })
        };
        let s = if op == Operation::Ea {
            VertexSet::new()
        } else {
            match find_vr_planarizer_within(&g, k, &r) {
                Some(s) => s,
                None => {
                    record("no-planarizer", None, None, k, g.n());
                    answer = false;
                    break;
                }
            }
        };
        let step_params = Parameters { k, ..params.clone() };
        match reduce_instance(k, &g, &s, &r, op, &phi, &step_params, cfg)? {
            StepOutcome::NoInstance => {
                record("no-instance", None, None, k, g.n());
                answer = false;
                break;
            }
            StepOutcome::ObligatoryVertex { u } => {
                record("obligatory-vertex", Some(u), None, k, g.n());
                g = g.remove_vertex(u);
                r.remove(&u);
                k -= 1;
            }
            StepOutcome::IrrelevantRegion { x, v } => {
                record("irrelevant-region", Some(v), Some(x.clone()), k, g.n());
                g = g.remove_vertex(v);
                r = r.difference(&x).copied().collect();
            }
            StepOutcome::BoundedTreewidth { td } => {
                record("bounded-treewidth", None, None, k, g.n());
                debug_assert!(td.is_valid(&g));
                answer = is_triple(&g, &r, k, op, &phi, cfg.size_mode, cfg.caps.enumeration)?.is_some();
                break;
            }
        }
    }
    let oracle_agrees = if cfg.cross_check {
        let tilde = Instance { phi: Sentence::Gaifman(phi.clone()), ..inst.clone() };
        match solve_oracle(&tilde, cfg) {
            Ok(o) if o.answer != answer => {
                return Err(Error::CrossCheck(format!("pipeline says {answer}, oracle says {}", o.answer)));
            }
            Ok(_) => Some(true),
            Err(e) if e.is_resource() => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    Ok(PipelineRun { answer, trace: std::mem::take(trace), oracle_agrees, params })
}
