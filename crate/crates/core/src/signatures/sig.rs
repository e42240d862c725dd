use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::params::Parameters;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::logic::check_local;
use crate::logic::{scattered_subset, GaifmanSentence};
use crate::modification::{affected, application_domain, apply_with_map, count_subsets, subsets, ModificationSet, Operation};
use crate::planarity::is_planar;
use crate::solver::Caps;
use crate::walls::{extended_compass, ExtendedCompass, Wall};

/// One element of SIG: Y_h ⊆ [ℓ_h] (1-based) for every basic sentence, and t.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SigEntry {
    pub y: Vec<BTreeSet<usize>>,
    pub t: usize,
}

pub type Signature = BTreeSet<SigEntry>;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CharEntry {
    pub z: usize,
    pub sig: Signature,
    pub s: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Characteristic {
    pub entries: BTreeSet<CharEntry>,
}

impl Characteristic {
    /// Sorted entries, so equal characteristics give identical bytes.
    pub fn to_canonical_json(&self) -> String {
        serde_json::to_string(self).expect("characteristics serialize")
    }

    pub fn rows(&self, z: usize, s: usize) -> impl Iterator<Item = &Signature> {
        self.entries.iter().filter(move |e| e.z == z && e.s == s).map(|e| &e.sig)
    }
}

pub fn walls_equivalent(a: &Characteristic, b: &Characteristic) -> bool {
    a == b
}

/// K^(t) ⊠ S: the part of K ⊠ S spanned by the images of V(K^(t)), with its
/// annotation and the images lying off P^(t).
#[derive(Clone, Debug)]
pub struct Level {
    pub graph: Graph,
    pub r_set: VertexSet,
    pub inner: VertexSet,
}

/// Levels 1..=ρ of the extended compass after applying `s` to K.
pub fn modified_levels(ec: &ExtendedCompass, r_set: &VertexSet, s: &ModificationSet) -> Result<Vec<Level>> {
    let (h, rep) = apply_with_map(&ec.k, s)?;
    Ok(ec
        .tower
        .iter()
        .map(|(kt, perim)| {
            let image: VertexSet = kt.vertices().filter_map(|v| rep.get(&v).copied()).collect();
            Level {
                graph: h.induced(&image),
                r_set: image.iter().copied().filter(|v| r_set.contains(v)).collect(),
                inner: image.iter().copied().filter(|v| !perim.contains(v)).collect(),
            }
        })
        .collect())
}

/// Every (Y_1, …, Y_m) with |Y_h| ≤ sizes[h].
pub(crate) fn y_tuples(phi: &GaifmanSentence, sizes: &[usize]) -> Vec<Vec<BTreeSet<usize>>> {
    let mut out: Vec<Vec<BTreeSet<usize>>> = vec![Vec::new()];
    for (b, &max) in phi.basics.iter().zip(sizes) {
        let choices: Vec<BTreeSet<usize>> = (0..1usize << b.ell)
            .map(|mask| (1..=b.ell).filter(|i| mask >> (i - 1) & 1 == 1).collect::<BTreeSet<_>>())
            .filter(|y| y.len() <= max)
            .collect();
        out = out
            .into_iter()
            .flat_map(|prefix| {
                choices.iter().map(move |y| {
                    let mut next = prefix.clone();
                    next.push(y.clone());
                    next
                })
            })
            .collect();
    }
    out
}

fn check_sig_pre(ec: &ExtendedCompass, r_set: &VertexSet, z: usize, s: &ModificationSet, params: &Parameters) -> Result<()> {
    if !params.z_range().contains(&z) {
        return Err(Error::input(format!("z = {z} outside {:?}", params.z_range())));
    }
    if ec.rho() < params.rho {
        return Err(Error::input(format!("extended compass has {} levels, need {}", ec.rho(), params.rho)));
    }
    let allowed = &ec.level(params.modification_level(z)).0;
    if affected(s).iter().any(|v| !allowed.contains(*v) || !r_set.contains(v)) {
        return Err(Error::input("modification set reaches outside K^(z−d+1) ∩ R"));
    }
    Ok(())
}

/// sig(𝔎, R, z, S). Scattered sets are closed under subsets and the
/// witness sets of different basics are unconstrained by each other, so an
/// entry exists iff |Y_h| is at most the largest scattered witness set for
/// every h.
pub fn compute_sig(
    ec: &ExtendedCompass,
    r_set: &VertexSet,
    z: usize,
    s: &ModificationSet,
    phi: &GaifmanSentence,
    params: &Parameters,
) -> Result<Signature> {
    check_sig_pre(ec, r_set, z, s, params)?;
    let levels = modified_levels(ec, r_set, s)?;
    let mut out = Signature::new();
    for t in 1..=z.min(params.rho) {
        let host = &levels[t - 1];
        let low = &levels[params.witness_level(t) - 1];
        let mut sizes = Vec::with_capacity(phi.m());
        for b in &phi.basics {
            let mut cands = Vec::new();
            for &v in low.inner.intersection(&low.r_set) {
                if check_local(&host.graph, &host.r_set, v, &b.psi, b.r)? {
                    cands.push(v);
                }
            }
            let mut best = 0;
            while best < b.ell && scattered_subset(&host.graph, &cands, best + 1, b.r).is_some() {
                best += 1;
            }
            sizes.push(best);
        }
        out.extend(y_tuples(phi, &sizes).into_iter().map(|y| SigEntry { y, t }));
    }
    Ok(out)
}

/// The extended compass of `w` with ρ levels, refusing compasses over the cap.
pub fn bounded_compass(g: &Graph, w: &Wall, params: &Parameters, caps: &Caps) -> Result<ExtendedCompass> {
    let ec = extended_compass(g, w, params.rho)?;
    if ec.k.n() > caps.compass_vertices {
        return Err(Error::cap(
            format!("compass of {} vertices", ec.k.n()),
            caps.compass_vertices as u64,
            "--cap-compass",
        ));
    }
    Ok(ec)
}

/// (φ,⊠)-char(𝔎_W, R): for each z, every S over K^(z−d+1) ∩ R of size at
/// most k that leaves K planar contributes (z, sig, |S|).
#[allow(clippy::too_many_arguments)]
pub fn compute_char(
    g: &Graph,
    w: &Wall,
    r_set: &VertexSet,
    op: Operation,
    k: usize,
    phi: &GaifmanSentence,
    params: &Parameters,
    caps: &Caps,
) -> Result<Characteristic> {
    let ec = bounded_compass(g, w, params, caps)?;
    char_of_compass(&ec, r_set, op, k, phi, params, caps)
}

#[allow(clippy::too_many_arguments)]
pub fn char_of_compass(
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
    let mut entries = BTreeSet::new();
    for z in params.z_range() {
        let allowed = &ec.level(params.modification_level(z)).0;
        let dom_z: Vec<_> = domain.iter().copied().filter(|e| e.vertices().iter().all(|&v| allowed.contains(v))).collect();
        let count = count_subsets(dom_z.len(), 0..=k);
        if count > caps.enumeration {
            return Err(Error::cap(format!("{count} modification sets"), caps.enumeration, "--cap-enum"));
        }
        let sets: Vec<_> = subsets(&dom_z, 0..=k).collect();
        let rows: Vec<Option<CharEntry>> = sets
            .into_par_iter()
            .map(|set| -> Result<Option<CharEntry>> {
                let s = ModificationSet::new(op, set)?;
                let (h, _) = apply_with_map(&ec.k, &s)?;
                if !is_planar(&h) {
                    return Ok(None);
                }
                let sig = compute_sig(ec, &r_k, z, &s, phi, params)?;
                Ok(Some(CharEntry { z, sig, s: s.len() }))
            })
            .collect::<Result<_>>()?;
        entries.extend(rows.into_iter().flatten());
    }
    Ok(Characteristic { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::library::local_formula;
    use crate::logic::BasicSentence;
    use crate::signatures::oracle::{raw_char, raw_sig};
    use crate::signatures::{compute_parameters, ParamMode};
    use crate::solver::PipelineConfig;
    use crate::walls::make_elementary_wall;

    fn sentence(ell: usize, name: &str) -> GaifmanSentence {
        let f = local_formula(name).unwrap();
        let b = BasicSentence::new(ell, f.r, f.psi()).unwrap();
        GaifmanSentence::new(vec![b], crate::logic::Comb::Basic(1), true).unwrap()
    }

    fn setup(h: u32, rho: usize, d: usize, phi: &GaifmanSentence) -> (Graph, Wall, Parameters) {
        let w = make_elementary_wall(h).unwrap();
        let cfg = PipelineConfig { rho_hat: rho, d_hat: Some(d), ..PipelineConfig::default() };
        let p = compute_parameters(1, phi, ParamMode::Configured, &cfg);
        (w.graph.clone(), w, p)
    }

    #[test]
    fn seven_wall_matches_comprehension() {
        let phi = sentence(1, "has-neighbour");
        let (g, w, p) = setup(7, 3, 2, &phi);
        let ec = extended_compass(&g, &w, p.rho).unwrap();
        let all = g.vertex_set();
        let center = w.center();
        let inner = &ec.level(p.modification_level(3)).0;
        let sets = [
            ModificationSet::empty(Operation::Vr),
            ModificationSet::vertices([center[0]]),
            ModificationSet::vertices(center),
            ModificationSet::pairs(Operation::Ec, [(center[0], center[1])]).unwrap(),
            ModificationSet::pairs(Operation::Er, [(center[0], center[1])]).unwrap(),
        ];
        for s in &sets {
            assert!(affected(s).iter().all(|&v| inner.contains(v)));
            for z in p.z_range() {
                let fast = compute_sig(&ec, &all, z, s, &phi, &p).unwrap();
                assert_eq!(fast, raw_sig(&ec, &all, z, s, &phi, &p).unwrap());
                assert!(fast.iter().all(|e| e.t <= z));
            }
        }
        let full = compute_sig(&ec, &all, 3, &sets[0], &phi, &p).unwrap();
        assert_eq!(full.len(), 2 * 3);
    }

    #[test]
    fn empty_annotation_keeps_only_empty_witnesses() {
        let phi = sentence(2, "any");
        let (g, w, p) = setup(7, 3, 2, &phi);
        let ec = extended_compass(&g, &w, p.rho).unwrap();
        let none = VertexSet::new();
        let s = ModificationSet::empty(Operation::Vr);
        let sig = compute_sig(&ec, &none, 3, &s, &phi, &p).unwrap();
        assert_eq!(sig.len(), 3);
        assert!(sig.iter().all(|e| e.y.iter().all(|y| y.is_empty())));
        assert!(compute_sig(&ec, &none, 3, &ModificationSet::vertices([w.center()[0]]), &phi, &p).is_err());
        assert!(compute_sig(&ec, &none, 9, &s, &phi, &p).is_err());
    }

    #[test]
    fn sig_is_monotone_in_z() {
        let phi = sentence(2, "degree-two");
        let (g, w, p) = setup(7, 3, 1, &phi);
        let ec = extended_compass(&g, &w, p.rho).unwrap();
        let all = g.vertex_set();
        let s = ModificationSet::vertices([w.center()[1]]);
        let mut prev = Signature::new();
        for z in p.z_range() {
            let sig = compute_sig(&ec, &all, z, &s, &phi, &p).unwrap();
            assert!(prev.is_subset(&sig));
            assert_eq!(sig.iter().filter(|e| e.y[0].is_empty()).count(), z);
            prev = sig;
        }
    }

    #[test]
    fn char_matches_comprehension() {
        let phi = sentence(1, "degree-at-least-three");
        let mut g = make_elementary_wall(3).unwrap().graph;
        let w = make_elementary_wall(3).unwrap();
        let [a, b] = w.center();
        let hub = g.fresh_id();
        g.add_edge(hub, a);
        g.add_edge(hub, b);
        let cfg = PipelineConfig { rho_hat: 1, d_hat: Some(1), ..PipelineConfig::default() };
        let p = compute_parameters(1, &phi, ParamMode::Configured, &cfg);
        let r: VertexSet = [a, b, hub].into();
        let caps = Caps::default();
        for op in crate::modification::ALL_OPERATIONS {
            let fast = compute_char(&g, &w, &r, op, 1, &phi, &p, &caps).unwrap();
            let ec = extended_compass(&g, &w, p.rho).unwrap();
            let slow = raw_char(&ec, &r, op, 1, &phi, &p, &caps).unwrap();
            assert_eq!(fast.to_canonical_json(), slow.to_canonical_json(), "{op}");
            assert!(fast.rows(1, 0).count() == 1);
            assert!(walls_equivalent(&fast, &slow));
        }
        let none = compute_char(&g, &w, &VertexSet::new(), Operation::Vr, 1, &phi, &p, &caps).unwrap();
        assert!(none.entries.iter().all(|e| e.s == 0));
    }
}
