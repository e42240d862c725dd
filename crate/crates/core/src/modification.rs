//! The four modification operations, their application domains, and
//! planarizer enumeration.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{edge, Edge, Graph, Vertex, VertexSet};
use crate::planarity::{is_planar, kuratowski};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Operation {
    /// Vertex removal.
    Vr,
    /// Edge removal.
    Er,
    /// Edge contraction.
    Ec,
    /// Edge addition.
    Ea,
}

pub const ALL_OPERATIONS: [Operation; 4] = [Operation::Vr, Operation::Er, Operation::Ec, Operation::Ea];

impl fmt::Display for Operation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Operation::Vr => "vr",
            Operation::Er => "er",
            Operation::Ec => "ec",
            Operation::Ea => "ea",
        })
    }
}

impl FromStr for Operation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vr" => Ok(Operation::Vr),
            "er" => Ok(Operation::Er),
            "ec" => Ok(Operation::Ec),
            "ea" => Ok(Operation::Ea),
            _ => Err(Error::input(format!("unknown operation {s:?}; expected vr, er, ec or ea"))),
        }
    }
}

/// A vertex (for vr) or an unordered pair stored as (min, max).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Element {
    Vertex(Vertex),
    Pair(Vertex, Vertex),
}

impl Element {
    pub fn pair(u: Vertex, v: Vertex) -> Element {
        let (a, b) = edge(u, v);
        Element::Pair(a, b)
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        match *self {
            Element::Vertex(v) => vec![v],
            Element::Pair(a, b) => vec![a, b],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModificationSet {
    pub op: Operation,
    pub elements: BTreeSet<Element>,
}

impl ModificationSet {
    pub fn empty(op: Operation) -> Self {
        ModificationSet { op, elements: BTreeSet::new() }
    }

    /// Builds a set, checking that element kinds match the operation.
    pub fn new(op: Operation, elements: impl IntoIterator<Item = Element>) -> Result<Self> {
        let mut out = BTreeSet::new();
        for e in elements {
            let e = match (op, e) {
                (Operation::Vr, Element::Vertex(v)) => Element::Vertex(v),
                (Operation::Vr, _) => return Err(Error::input("vr sets hold vertices")),
                (_, Element::Pair(a, b)) if a != b => Element::pair(a, b),
                _ => return Err(Error::input(format!("{op} sets hold pairs of distinct vertices"))),
            };
            out.insert(e);
        }
        Ok(ModificationSet { op, elements: out })
    }

    pub fn vertices(vs: impl IntoIterator<Item = Vertex>) -> Self {
        ModificationSet { op: Operation::Vr, elements: vs.into_iter().map(Element::Vertex).collect() }
    }

    pub fn pairs(op: Operation, es: impl IntoIterator<Item = Edge>) -> Result<Self> {
        Self::new(op, es.into_iter().map(|(u, v)| Element::Pair(u, v)))
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: ModificationSet = serde_json::from_str(text)
            .map_err(|e| Error::Parse { pos: e.column(), msg: format!("modification set JSON: {e}") })?;
        Self::new(raw.op, raw.elements)
    }
}

/// ⊠⟨G,R⟩ in sorted order.
pub fn application_domain(op: Operation, g: &Graph, r_set: &VertexSet) -> Vec<Element> {
    let r: Vec<Vertex> = r_set.iter().copied().filter(|&v| g.contains(v)).collect();
    match op {
        Operation::Vr => r.into_iter().map(Element::Vertex).collect(),
        Operation::Er | Operation::Ec => g
            .edges()
            .filter(|(u, v)| r_set.contains(u) && r_set.contains(v))
            .map(|(u, v)| Element::Pair(u, v))
            .collect(),
        Operation::Ea => r
            .iter()
            .tuple_combinations()
            .filter(|&(&u, &v)| !g.has_edge(u, v))
            .map(|(&u, &v)| Element::Pair(u, v))
            .collect(),
    }
}

/// A(S): vertices touched by S.
pub fn affected(s: &ModificationSet) -> VertexSet {
    s.elements.iter().flat_map(|e| e.vertices()).collect()
}

fn check_domain(g: &Graph, s: &ModificationSet) -> Result<()> {
    for e in &s.elements {
        let ok = match (s.op, *e) {
            (Operation::Vr, Element::Vertex(v)) => g.contains(v),
            (Operation::Er | Operation::Ec, Element::Pair(u, v)) => g.has_edge(u, v),
            (Operation::Ea, Element::Pair(u, v)) => u != v && g.contains(u) && g.contains(v) && !g.has_edge(u, v),
            _ => false,
        };
        if !ok {
            return Err(Error::input(format!("{e:?} is outside the {} application domain", s.op)));
        }
    }
    Ok(())
}

/// G ⊠ S together with the representative of every host vertex that survives
/// (identity except under ec, where each merged class maps to its least id).
pub fn apply_with_map(g: &Graph, s: &ModificationSet) -> Result<(Graph, BTreeMap<Vertex, Vertex>)> {
    check_domain(g, s)?;
    let pairs = || {
        s.elements.iter().filter_map(|e| match *e {
            Element::Pair(u, v) => Some((u, v)),
            Element::Vertex(_) => None,
        })
    };
    let identity = |h: &Graph| h.vertices().map(|v| (v, v)).collect();
    Ok(match s.op {
        Operation::Vr => {
            let vs: VertexSet = affected(s);
            let h = g.remove_vertices(&vs);
            let map = identity(&h);
            (h, map)
        }
        Operation::Er => {
            let h = g.remove_edges(pairs());
            let map = identity(&h);
            (h, map)
        }
        Operation::Ea => {
            let h = g.add_edges(pairs());
            let map = identity(&h);
            (h, map)
        }
        Operation::Ec => {
            let sub = Graph::from_edges(pairs());
            let mut rep: BTreeMap<Vertex, Vertex> = g.vertices().map(|v| (v, v)).collect();
            for comp in sub.components() {
                let least = *comp.iter().next().expect("nonempty");
                for v in comp {
                    rep.insert(v, least);
                }
            }
            let mut h = Graph::with_vertices(rep.values().copied());
            for (u, v) in g.edges() {
                let (a, b) = (rep[&u], rep[&v]);
                if a != b {
                    h.add_edge(a, b);
                }
            }
            (h, rep)
        }
    })
}

pub fn apply(g: &Graph, s: &ModificationSet) -> Result<Graph> {
    Ok(apply_with_map(g, s)?.0)
}

/// (G ⊠ S, R') where R' keeps the annotated ids that survive.
pub fn apply_annotated(g: &Graph, r_set: &VertexSet, s: &ModificationSet) -> Result<(Graph, VertexSet)> {
    let h = apply(g, s)?;
    let r = r_set.iter().copied().filter(|&v| h.contains(v)).collect();
    Ok((h, r))
}

pub fn is_planarizer(g: &Graph, s: &ModificationSet) -> Result<bool> {
    Ok(is_planar(&apply(g, s)?))
}

/// All subsets of `domain` of size in `sizes`, smallest first, lexicographic.
pub fn subsets(domain: &[Element], sizes: std::ops::RangeInclusive<usize>) -> impl Iterator<Item = Vec<Element>> + '_ {
    sizes
        .into_iter()
        .filter(move |&s| s <= domain.len())
        .flat_map(move |size| domain.iter().copied().combinations(size))
}

/// Whether a budget k means |S| = k or |S| ≤ k.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SizeMode {
    Exact,
    #[default]
    AtMost,
}

impl SizeMode {
    pub fn sizes(self, k: usize) -> std::ops::RangeInclusive<usize> {
        match self {
            SizeMode::Exact => k..=k,
            SizeMode::AtMost => 0..=k,
        }
    }
}

impl FromStr for SizeMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(SizeMode::Exact),
            "at-most" => Ok(SizeMode::AtMost),
            _ => Err(Error::input(format!("unknown size mode {s:?}; expected exact or at-most"))),
        }
    }
}

/// Number of subsets `subsets` would yield, saturating.
pub fn count_subsets(n: usize, sizes: std::ops::RangeInclusive<usize>) -> u64 {
    let mut total: u64 = 0;
    for s in sizes.filter(|&s| s <= n) {
        let mut c: u64 = 1;
        for i in 0..s as u64 {
            c = c.saturating_mul(n as u64 - i) / (i + 1);
        }
        total = total.saturating_add(c);
    }
    total
}

/// Inclusion-minimal op-planarizers of size ≤ k, by exhaustive enumeration.
/// A set is kept iff it is a planarizer and contains no smaller one found.
pub fn minimal_planarizers(g: &Graph, op: Operation, k: usize) -> Vec<ModificationSet> {
    let domain = application_domain(op, g, &g.vertex_set());
    let mut found: Vec<BTreeSet<Element>> = Vec::new();
    for subset in subsets(&domain, 0..=k) {
        let set: BTreeSet<Element> = subset.into_iter().collect();
        if found.iter().any(|f| f.is_subset(&set)) {
            continue;
        }
        let s = ModificationSet { op, elements: set.clone() };
        if is_planarizer(g, &s).expect("domain elements") {
            found.push(set);
        }
    }
    found.into_iter().map(|elements| ModificationSet { op, elements }).collect()
}

/// A vr-planarizer of size ≤ k, branching on the vertices of a Kuratowski
/// subgraph (one of them must go).
pub fn find_vr_planarizer(g: &Graph, k: usize) -> Option<VertexSet> {
    find_vr_planarizer_within(g, k, &g.vertex_set())
}

/// As `find_vr_planarizer`, deleting only vertices of `allowed`.
pub fn find_vr_planarizer_within(g: &Graph, k: usize, allowed: &VertexSet) -> Option<VertexSet> {
    let Some(h) = kuratowski(g) else {
        return Some(VertexSet::new());
    };
    if k == 0 {
        return None;
    }
    for v in h.vertices().filter(|v| allowed.contains(v)) {
        if let Some(mut rest) = find_vr_planarizer_within(&g.remove_vertex(v), k - 1, allowed) {
            rest.insert(v);
            return Some(rest);
        }
    }
    None
}

/// Every inclusion-minimal op-planarizer of size ≤ k avoids `q` entirely.
pub fn is_planarization_irrelevant(g: &Graph, op: Operation, k: usize, q: &VertexSet) -> bool {
    minimal_planarizers(g, op, k).iter().all(|s| affected(s).is_disjoint(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn vs(xs: &[Vertex]) -> VertexSet {
        xs.iter().copied().collect()
    }

    #[test]
    fn domains() {
        let k3 = Graph::complete(3);
        assert_eq!(application_domain(Operation::Vr, &k3, &vs(&[0, 2])), vec![Element::Vertex(0), Element::Vertex(2)]);
        assert!(application_domain(Operation::Ea, &k3, &k3.vertex_set()).is_empty());
        assert_eq!(application_domain(Operation::Er, &k3, &vs(&[0, 1])), vec![Element::Pair(0, 1)]);
        assert_eq!(application_domain(Operation::Ea, &Graph::path(3), &vs(&[0, 1, 2])), vec![Element::Pair(0, 2)]);
    }

    #[test]
    fn affected_vertices() {
        assert_eq!(affected(&ModificationSet::vertices([4])), vs(&[4]));
        let s = ModificationSet::pairs(Operation::Ec, [(0, 1), (2, 1)]).unwrap();
        assert_eq!(affected(&s), vs(&[0, 1, 2]));
    }

    #[test]
    fn application() {
        let p3 = Graph::path(3);
        let add = ModificationSet::pairs(Operation::Ea, [(0, 2)]).unwrap();
        assert_eq!(apply(&p3, &add).unwrap(), Graph::complete(3));
        let c = ModificationSet::pairs(Operation::Ec, [(0, 1)]).unwrap();
        assert_eq!(apply(&p3, &c).unwrap(), Graph::from_edges([(0, 2)]));
        let both = ModificationSet::pairs(Operation::Ec, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(apply(&Graph::complete(3), &both).unwrap(), Graph::with_vertices([0]));
        let bad = ModificationSet::pairs(Operation::Er, [(0, 2)]).unwrap();
        assert!(apply(&p3, &bad).is_err());
        assert!(apply(&p3, &ModificationSet::vertices([7])).is_err());
        for op in ALL_OPERATIONS {
            assert_eq!(apply(&Graph::petersen(), &ModificationSet::empty(op)).unwrap(), Graph::petersen());
        }
    }

    #[test]
    fn annotations_follow_representatives() {
        let p3 = Graph::path(3);
        let c = ModificationSet::pairs(Operation::Ec, [(1, 2)]).unwrap();
        let (h, r) = apply_annotated(&p3, &vs(&[2]), &c).unwrap();
        assert_eq!(h.n(), 2);
        assert!(r.is_empty());
        let (_, r) = apply_annotated(&p3, &vs(&[1]), &c).unwrap();
        assert_eq!(r, vs(&[1]));
    }

    #[test]
    fn planarizers() {
        let k5 = Graph::complete(5);
        assert!(is_planarizer(&k5, &ModificationSet::vertices([3])).unwrap());
        assert!(is_planarizer(&k5, &ModificationSet::pairs(Operation::Er, [(0, 1)]).unwrap()).unwrap());
        assert!(is_planarizer(&Graph::path(4), &ModificationSet::empty(Operation::Ea)).unwrap());
        for op in ALL_OPERATIONS {
            let m = minimal_planarizers(&Graph::cycle(5), op, 2);
            assert_eq!(m, vec![ModificationSet::empty(op)]);
        }
        assert_eq!(minimal_planarizers(&k5, Operation::Vr, 1).len(), 5);
        assert_eq!(minimal_planarizers(&k5, Operation::Vr, 2).len(), 5);
        assert!(minimal_planarizers(&k5, Operation::Ea, 2).is_empty());
    }

    #[test]
    fn vr_branching() {
        assert_eq!(find_vr_planarizer(&Graph::cycle(4), 0), Some(VertexSet::new()));
        assert_eq!(find_vr_planarizer(&Graph::complete(5), 1).map(|s| s.len()), Some(1));
        let two = Graph::complete(5).disjoint_union(&Graph::complete(5), 10);
        assert!(find_vr_planarizer(&two, 1).is_none());
        assert_eq!(find_vr_planarizer(&two, 2).map(|s| s.len()), Some(2));
        assert!(find_vr_planarizer_within(&Graph::complete(5), 1, &VertexSet::new()).is_none());
    }

    #[test]
    fn irrelevance() {
        let k5 = Graph::complete(5);
        assert!(is_planarization_irrelevant(&Graph::cycle(6), Operation::Er, 2, &vs(&[0])));
        let mut pendant = k5.clone();
        pendant.add_edge(0, 9);
        assert!(is_planarization_irrelevant(&pendant, Operation::Vr, 1, &vs(&[9])));
        assert!(!is_planarization_irrelevant(&k5, Operation::Vr, 1, &vs(&[2])));
    }

    #[test]
    fn json() {
        let s = ModificationSet::pairs(Operation::Ea, [(3, 1)]).unwrap();
        assert_eq!(s.to_json(), r#"{"op":"ea","elements":[[1,3]]}"#);
        assert_eq!(ModificationSet::from_json(&s.to_json()).unwrap(), s);
        let v = ModificationSet::vertices([2, 5]);
        assert_eq!(v.to_json(), r#"{"op":"vr","elements":[2,5]}"#);
        assert!(ModificationSet::from_json(r#"{"op":"vr","elements":[[1,2]]}"#).is_err());
        assert!(ModificationSet::from_json(r#"{"op":"xx","elements":[]}"#).is_err());
        assert_eq!("ec".parse::<Operation>().unwrap(), Operation::Ec);
        assert!("cut".parse::<Operation>().is_err());
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (5u32..=8, proptest::collection::vec(proptest::bool::weighted(0.6), 28)).prop_map(|(n, mask)| {
            let mut g = Graph::with_vertices(0..n);
            let mut i = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if mask[i] {
                        g.add_edge(u, v);
                    }
                    i += 1;
                }
            }
            g
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(80))]

        #[test]
        fn branching_matches_enumeration(g in arb_graph(), k in 0usize..=2) {
            let found = find_vr_planarizer(&g, k);
            let exhaustive = !minimal_planarizers(&g, Operation::Vr, k).is_empty();
            prop_assert_eq!(found.is_some(), exhaustive);
            if let Some(s) = found {
                prop_assert!(s.len() <= k);
                prop_assert!(is_planar(&g.remove_vertices(&s)));
            }
        }

        #[test]
        fn er_and_ec_planarizers_imply_vr(g in arb_graph(), k in 0usize..=2) {
            for op in [Operation::Er, Operation::Ec] {
                if !minimal_planarizers(&g, op, k).is_empty() {
                    prop_assert!(find_vr_planarizer(&g, k).is_some());
                }
            }
        }

        #[test]
        fn contraction_order_is_irrelevant(g in arb_graph(), pick in any::<u64>()) {
            let es: Vec<Edge> = g.edges().collect();
            let chosen: Vec<Edge> = es.iter().enumerate().filter(|(i, _)| pick >> (i % 64) & 1 == 1).map(|(_, &e)| e).take(4).collect();
            let all = apply(&g, &ModificationSet::pairs(Operation::Ec, chosen.iter().copied()).unwrap()).unwrap();
            // Contract one edge at a time, following representatives.
            let mut h = g.clone();
            let mut rep: BTreeMap<Vertex, Vertex> = g.vertices().map(|v| (v, v)).collect();
            for &(u, v) in chosen.iter().rev() {
                let (a, b) = (rep[&u], rep[&v]);
                if a == b {
                    continue;
                }
                let s = ModificationSet::pairs(Operation::Ec, [(a, b)]).unwrap();
                let (next, map) = apply_with_map(&h, &s).unwrap();
                for r in rep.values_mut() {
                    *r = map[r];
                }
                h = next;
            }
            prop_assert_eq!(all, h);
        }
    }
}
