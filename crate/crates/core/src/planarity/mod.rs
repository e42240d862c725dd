//! Planarity testing, rotation systems, Kuratowski witnesses, partially
//! disk-embedded graphs and annulus-boundaried graphs.

mod annulus;
mod disk;
mod embed;
mod kuratowski;

use crate::graph::{Edge, Graph, Vertex};

pub use annulus::{
    att, glue_equivalence, validate_annulus_boundaried, wall_components, AnnulusBoundariedGraph,
    AnnulusEmbeddedSeparator, AnnulusViolation, WallComponent,
};
pub use disk::PartialDiskEmbedding;
pub use embed::{embed, Embedding};
pub use kuratowski::{classify_kuratowski, kuratowski, KuratowskiKind};


pub fn is_planar(g: &Graph) -> bool {
    embed(g).is_some()
}

/// Planarity of `g` after adding the non-edges in `s`.
pub fn planar_with_additions(g: &Graph, s: &[Edge]) -> bool {
    is_planar(&g.add_edges(s.iter().copied()))
}

/// `g` plus a fresh vertex adjacent to every vertex of `cycle`; planar iff `g`
/// has an embedding with all of `cycle` on one face.
pub(crate) fn with_apex(g: &Graph, cycle: &[Vertex]) -> (Graph, Vertex) {
    let apex = g.fresh_id();
    let mut h = g.clone();
    h.add_vertex(apex);
    for &v in cycle {
        h.add_edge(apex, v);
    }
    (h, apex)
}

/// Embedding of `g` in which `cycle` bounds a face, if one exists.
pub fn embed_with_face(g: &Graph, cycle: &[Vertex]) -> Option<Embedding> {
    let (h, apex) = with_apex(g, cycle);
    let mut emb = embed(&h)?;
    emb.rotation.remove(&apex);
    for rot in emb.rotation.values_mut() {
        rot.retain(|&x| x != apex);
    }
    let faces = emb.faces();
    let target: std::collections::BTreeSet<Vertex> = cycle.iter().copied().collect();
    emb.outer_face = faces
        .iter()
        .position(|f| f.len() == cycle.len() && f.iter().all(|v| target.contains(v)))
        .unwrap_or(0);
    Some(emb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::grid::make_grid;
    use proptest::prelude::*;

    #[test]
    fn small_examples() {
        assert!(is_planar(&Graph::complete(4)));
        assert!(!is_planar(&Graph::complete(5)));
        assert!(!is_planar(&Graph::complete_bipartite(3, 3)));
        assert!(is_planar(&Graph::complete(5).remove_edges([(0, 1)])));
        assert!(is_planar(&Graph::new()));
        assert!(is_planar(&make_grid(6, 6).unwrap().graph));
    }

    #[test]
    fn k5_witness_is_itself() {
        let k5 = Graph::complete(5);
        let h = kuratowski(&k5).unwrap();
        assert_eq!(h, k5);
        assert_eq!(classify_kuratowski(&h), Some(KuratowskiKind::K5));
        assert!(kuratowski(&Graph::complete(4)).is_none());
    }

    #[test]
    fn petersen_has_k33_subdivision() {
        let p = Graph::petersen();
        assert!(!is_planar(&p));
        let h = kuratowski(&p).unwrap();
        assert!(h.is_subgraph_of(&p));
        assert_eq!(classify_kuratowski(&h), Some(KuratowskiKind::K33));
    }

    #[test]
    fn additions() {
        let k5 = Graph::complete(5);
        assert!(!planar_with_additions(&k5.remove_edges([(1, 3)]), &[(1, 3)]));
        assert!(planar_with_additions(&Graph::path(3), &[(0, 2)]));
    }

    #[test]
    fn euler_on_disconnected_graphs() {
        let mut g = Graph::complete(4).disjoint_union(&Graph::cycle(5), 10);
        g.add_vertex(40);
        g.add_edge(41, 42);
        let emb = embed(&g).unwrap();
        assert!(emb.satisfies_euler(&g));
    }

    #[test]
    fn face_prescription() {
        let g = make_grid(4, 4).unwrap();
        let perim: Vec<Vertex> = vec![0, 1, 2, 3, 7, 11, 15, 14, 13, 12, 8, 4];
        let emb = embed_with_face(&g.graph, &perim).unwrap();
        assert!(emb.satisfies_euler(&g.graph));
        assert_eq!(emb.faces()[emb.outer_face].len(), 12);
        let mut k = Graph::complete(4);
        k.add_edge(0, 9);
        assert!(embed_with_face(&Graph::complete_bipartite(3, 3), &[0, 3, 1, 4]).is_none());
        assert!(embed_with_face(&k, &[0, 1, 2]).is_some());
    }

    fn arb_graph(max_n: u32) -> impl Strategy<Value = Graph> {
        (1..=max_n).prop_flat_map(|n| {
            let pairs: Vec<(u32, u32)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            let len = pairs.len();
            proptest::collection::vec(any::<bool>(), len).prop_map(move |mask| {
                let mut g = Graph::with_vertices(0..n);
                for (i, &(u, v)) in pairs.iter().enumerate() {
                    if mask[i] {
                        g.add_edge(u, v);
                    }
                }
                g
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn embedding_or_witness(g in arb_graph(9)) {
            match embed(&g) {
                Some(emb) => prop_assert!(emb.satisfies_euler(&g)),
                None => {
                    let h = kuratowski(&g).unwrap();
                    prop_assert!(h.is_subgraph_of(&g));
                    prop_assert!(classify_kuratowski(&h).is_some());
                }
            }
        }

        #[test]
        fn planarity_is_closed_under_deletion(g in arb_graph(9), pick in any::<u32>()) {
            if is_planar(&g) && g.m() > 0 {
                let es: Vec<_> = g.edges().collect();
                let e = es[pick as usize % es.len()];
                prop_assert!(is_planar(&g.remove_edges([e])));
            }
        }
    }
}
