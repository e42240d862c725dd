use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Graph, Vertex, VertexSet};

/// A pair (A, B) with A ∪ B = V(G) and no edge between A\B and B\A.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Separation {
    pub a: VertexSet,
    pub b: VertexSet,
}

impl Separation {
    pub fn is_separation_of(&self, g: &Graph) -> bool {
        let covered = g.vertices().all(|v| self.a.contains(&v) || self.b.contains(&v));
        let inside = self.a.iter().chain(&self.b).all(|&v| g.contains(v));
        let only_a = |v: &Vertex| self.a.contains(v) && !self.b.contains(v);
        let only_b = |v: &Vertex| self.b.contains(v) && !self.a.contains(v);
        let crossing = g
            .edges()
            .any(|(u, v)| (only_a(&u) && only_b(&v)) || (only_b(&u) && only_a(&v)));
        covered && inside && !crossing
    }

    pub fn order(&self) -> usize {
        self.a.intersection(&self.b).count()
    }
}

/// Which contraction condition failed, with a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ContractionViolation {
    /// A host vertex has no image, or its image is not a vertex of the image graph.
    NotTotal(Vertex),
    NotSurjective(Vertex),
    ModelDisconnected(Vertex),
    EdgeModelDisconnected(Vertex, Vertex),
    EdgeNotPreserved(Vertex, Vertex),
}

#[derive(Clone, Debug)]
pub struct ContractionMap {
    pub host: Graph,
    pub image: Graph,
    pub rho: BTreeMap<Vertex, Vertex>,
}

impl ContractionMap {
    pub fn identity(g: &Graph) -> Self {
        ContractionMap {
            host: g.clone(),
            image: g.clone(),
            rho: g.vertices().map(|v| (v, v)).collect(),
        }
    }

    /// Contract the edge uv into its least endpoint.
    pub fn contract_edge(g: &Graph, u: Vertex, v: Vertex) -> Self {
        let (keep, gone) = (u.min(v), u.max(v));
        let rho: BTreeMap<Vertex, Vertex> = g
            .vertices()
            .map(|x| (x, if x == gone { keep } else { x }))
            .collect();
        let image = Self::image_of(g, &rho);
        ContractionMap { host: g.clone(), image, rho }
    }

    /// The simple graph induced by `rho` on `host`.
    pub fn image_of(host: &Graph, rho: &BTreeMap<Vertex, Vertex>) -> Graph {
        let mut image = Graph::with_vertices(rho.values().copied());
        for (a, b) in host.edges() {
            let (x, y) = (rho[&a], rho[&b]);
            if x != y {
                image.add_edge(x, y);
            }
        }
        image
    }

    pub fn model(&self, x: Vertex) -> VertexSet {
        self.rho.iter().filter(|(_, &y)| y == x).map(|(&v, _)| v).collect()
    }

    pub fn verify(&self) -> Result<(), ContractionViolation> {
        for v in self.host.vertices() {
            match self.rho.get(&v) {
                Some(x) if self.image.contains(*x) => {}
                _ => return Err(ContractionViolation::NotTotal(v)),
            }
        }
        let mut models: BTreeMap<Vertex, VertexSet> = BTreeMap::new();
        for (&v, &x) in &self.rho {
            models.entry(x).or_default().insert(v);
        }
        for x in self.image.vertices() {
            let Some(m) = models.get(&x) else {
                return Err(ContractionViolation::NotSurjective(x));
            };
            if !self.host.induced(m).is_connected() {
                return Err(ContractionViolation::ModelDisconnected(x));
            }
        }
        for (x, y) in self.image.edges() {
            let both: VertexSet = models[&x].union(&models[&y]).copied().collect();
            if !self.host.induced(&both).is_connected() {
                return Err(ContractionViolation::EdgeModelDisconnected(x, y));
            }
        }
        for (a, b) in self.host.edges() {
            let (x, y) = (self.rho[&a], self.rho[&b]);
            if x != y && !self.image.has_edge(x, y) {
                return Err(ContractionViolation::EdgeNotPreserved(a, b));
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.verify().is_ok()
    }
}

/// Branch sets witnessing `pattern` as a minor of `host`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MinorModel {
    pub branch: BTreeMap<Vertex, VertexSet>,
}

impl MinorModel {
    pub fn verify(&self, host: &Graph, pattern: &Graph) -> bool {
        let mut used = VertexSet::new();
        for p in pattern.vertices() {
            let Some(set) = self.branch.get(&p) else {
                return false;
            };
            if set.is_empty()
                || !set.iter().all(|&v| host.contains(v))
                || !host.induced(set).is_connected()
                || set.iter().any(|v| !used.insert(*v))
            {
                return false;
            }
        }
        pattern.edges().all(|(p, q)| {
            self.branch[&p]
                .iter()
                .any(|&a| host.neighbors(a).any(|b| self.branch[&q].contains(&b)))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_contraction() {
        assert!(ContractionMap::identity(&Graph::petersen()).is_valid());
    }

    #[test]
    fn triangle_to_edge() {
        let cm = ContractionMap::contract_edge(&Graph::complete(3), 0, 1);
        assert_eq!(cm.image.n(), 2);
        assert_eq!(cm.verify(), Ok(()));
    }

    #[test]
    fn merging_far_vertices_fails() {
        let g = Graph::path(3);
        let rho: BTreeMap<Vertex, Vertex> = [(0, 0), (1, 1), (2, 0)].into();
        let cm = ContractionMap { image: ContractionMap::image_of(&g, &rho), host: g, rho };
        assert_eq!(cm.verify(), Err(ContractionViolation::ModelDisconnected(0)));
    }

    #[test]
    fn missing_image_vertex_is_reported() {
        let g = Graph::path(2);
        let rho: BTreeMap<Vertex, Vertex> = [(0, 0), (1, 0)].into();
        let mut image = Graph::with_vertices([0, 5]);
        image.add_vertex(0);
        let cm = ContractionMap { host: g, image, rho };
        assert_eq!(cm.verify(), Err(ContractionViolation::NotSurjective(5)));
    }

    #[test]
    fn separation_check() {
        let g = Graph::path(4);
        let s = Separation { a: [0, 1, 2].into(), b: [2, 3].into() };
        assert!(s.is_separation_of(&g));
        assert_eq!(s.order(), 1);
        let bad = Separation { a: [0, 1].into(), b: [2, 3].into() };
        assert!(!bad.is_separation_of(&g));
    }

    #[test]
    fn k4_minor_in_wheel() {
        let mut w = Graph::cycle(5);
        for v in 0..5 {
            w.add_edge(5, v);
        }
        let model = MinorModel {
            branch: [
                (0, [5].into()),
                (1, [0, 1].into()),
                (2, [2].into()),
                (3, [3, 4].into()),
            ]
            .into(),
        };
        assert!(model.verify(&w, &Graph::complete(4)));
        let bad = MinorModel {
            branch: [(0, [5].into()), (1, [0, 2].into()), (2, [1].into()), (3, [3].into())].into(),
        };
        assert!(!bad.verify(&w, &Graph::complete(4)));
    }
}
