//! Reference evaluator for sig and char that follows the set comprehensions
//! literally: every element of SIG, every candidate tuple of witnesses, every
//! modification set of the full application domain.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;

use super::params::Parameters;
use super::sig::{modified_levels, y_tuples, CharEntry, Characteristic, Level, SigEntry, Signature};
use crate::error::{Error, Result};
use crate::graph::{Vertex, VertexSet};
use crate::logic::eval_with;
use crate::logic::GaifmanSentence;
use crate::modification::{affected, application_domain, apply, count_subsets, ModificationSet, Operation};
use crate::planarity::is_planar;
use crate::solver::Caps;
use crate::walls::ExtendedCompass;

/// Does some |Y_h|-set of vertices of the host satisfy all three conditions?
fn witness_exists(host: &Level, low: &Level, psi: &crate::logic::Formula, r: usize, size: usize) -> Result<bool> {
    let x = psi.free_vars().into_iter().next().expect("one free variable");
    let dist: BTreeMap<Vertex, BTreeMap<Vertex, usize>> =
        host.graph.vertices().map(|v| (v, host.graph.bfs(v, None))).collect();
    let far = |a: Vertex, b: Vertex| dist[&a].get(&b).is_none_or(|&d| d > 2 * r);
    for tuple in host.graph.vertices().combinations(size) {
        let placed = tuple.iter().all(|v| low.inner.contains(v) && low.r_set.contains(v));
        if !placed || !tuple.iter().tuple_combinations().all(|(&a, &b)| far(a, b)) {
            continue;
        }
        let mut models = true;
        for &v in &tuple {
            if !eval_with(&host.graph, &host.r_set, psi, &BTreeMap::from([(x.clone(), v)]))? {
                models = false;
                break;
            }
        }
        if models {
            return Ok(true);
        }
    }
    Ok(false)
}

pub fn raw_sig(
    ec: &ExtendedCompass,
    r_set: &VertexSet,
    z: usize,
    s: &ModificationSet,
    phi: &GaifmanSentence,
    params: &Parameters,
) -> Result<Signature> {
    let levels = modified_levels(ec, r_set, s)?;
    let everything: Vec<usize> = phi.basics.iter().map(|b| b.ell).collect();
    let mut out = Signature::new();
    for t in 1..=params.rho {
        if t > z {
            continue;
        }
        let host = &levels[t - 1];
        let low = &levels[params.witness_level(t) - 1];
        let mut memo: BTreeMap<(usize, usize), bool> = BTreeMap::new();
        for y in y_tuples(phi, &everything) {
            let mut all = true;
            for (h, b) in phi.basics.iter().enumerate() {
                let key = (h, y[h].len());
                let ok = match memo.get(&key) {
                    Some(&ok) => ok,
                    None => {
                        let ok = witness_exists(host, low, &b.psi, b.r, y[h].len())?;
                        memo.insert(key, ok);
                        ok
                    }
                };
                if !ok {
                    all = false;
                    break;
                }
            }
            if all {
                out.insert(SigEntry { y, t });
            }
        }
    }
    Ok(out)
}

pub fn raw_char(
    ec: &ExtendedCompass,
    r_set: &VertexSet,
    op: Operation,
    k: usize,
    phi: &GaifmanSentence,
    params: &Parameters,
    caps: &Caps,
) -> Result<Characteristic> {
    let r_k: VertexSet = r_set.iter().copied().filter(|&v| ec.k.contains(v)).collect();
    let domain = application_domain(op, &ec.k, &r_k);
    let count = count_subsets(domain.len(), 0..=k);
    if count > caps.enumeration {
        return Err(Error::cap(format!("{count} modification sets"), caps.enumeration, "--cap-enum"));
    }
    let mut entries = BTreeSet::new();
    for size in 0..=k.min(domain.len()) {
        for set in domain.iter().copied().combinations(size) {
            let s = ModificationSet::new(op, set)?;
            if !is_planar(&apply(&ec.k, &s)?) {
                continue;
            }
            let touched = affected(&s);
            for z in params.z_range() {
                let inner = &ec.level(params.modification_level(z)).0;
                if touched.iter().all(|&v| inner.contains(v) && r_k.contains(&v)) {
                    let sig = raw_sig(ec, &r_k, z, &s, phi, params)?;
                    entries.insert(CharEntry { z, sig, s: size });
                }
            }
        }
    }
    Ok(Characteristic { entries })
}
