use serde::{Deserialize, Serialize};

use super::{embed_with_face, Embedding};
use crate::error::{Error, Result};
use crate::graph::{cycle_graph, Graph, Vertex, VertexSet};

/// A graph whose subgraph `compass` is drawn in a closed disk with
/// `boundary` on the disk boundary; everything else lies outside.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PartialDiskEmbedding {
    pub graph: Graph,
    pub compass: Graph,
    pub boundary: Vec<Vertex>,
    pub embedding: Embedding,
}

impl PartialDiskEmbedding {
    pub fn new(graph: &Graph, compass: &Graph, boundary: &[Vertex]) -> Result<Self> {
        if !compass.is_subgraph_of(graph) {
            return Err(Error::input("compass is not a subgraph of the graph"));
        }
        let distinct: VertexSet = boundary.iter().copied().collect();
        if boundary.len() < 3
            || distinct.len() != boundary.len()
            || !cycle_graph(boundary).is_subgraph_of(compass)
        {
            return Err(Error::input("boundary is not a cycle of the compass"));
        }
        let interior: VertexSet = compass.vertices().filter(|v| !distinct.contains(v)).collect();
        if let Some((u, v)) = graph
            .edges()
            .find(|&(u, v)| (interior.contains(&u) && !compass.contains(v)) || (interior.contains(&v) && !compass.contains(u)))
        {
            return Err(Error::input(format!("edge ({u},{v}) leaves the disk through its interior")));
        }
        let embedding = embed_with_face(compass, boundary)
            .ok_or_else(|| Error::input("compass has no disk embedding with the given boundary"))?;
        Ok(PartialDiskEmbedding {
            graph: graph.clone(),
            compass: compass.clone(),
            boundary: boundary.to_vec(),
            embedding,
        })
    }

    /// Vertices of the compass not on the boundary.
    pub fn interior(&self) -> VertexSet {
        let b: VertexSet = self.boundary.iter().copied().collect();
        self.compass.vertices().filter(|v| !b.contains(v)).collect()
    }

    pub fn separation(&self) -> crate::graph::Separation {
        let interior = self.interior();
        crate::graph::Separation {
            a: self.compass.vertex_set(),
            b: self.graph.vertices().filter(|v| !interior.contains(v)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::grid::make_grid;

    #[test]
    fn grid_inside_its_perimeter() {
        let g = make_grid(4, 4).unwrap().graph;
        let perim = [0, 1, 2, 3, 7, 11, 15, 14, 13, 12, 8, 4];
        let mut host = g.clone();
        host.add_edge(0, 100);
        let d = PartialDiskEmbedding::new(&host, &g, &perim).unwrap();
        assert_eq!(d.interior(), [5, 6, 9, 10].into());
        assert!(d.separation().is_separation_of(&host));
    }

    #[test]
    fn interior_edge_escaping_is_rejected() {
        let g = make_grid(4, 4).unwrap().graph;
        let perim = [0, 1, 2, 3, 7, 11, 15, 14, 13, 12, 8, 4];
        let mut host = g.clone();
        host.add_edge(5, 100);
        assert!(PartialDiskEmbedding::new(&host, &g, &perim).is_err());
        assert!(PartialDiskEmbedding::new(&g, &g, &[0, 1, 2]).is_err());
    }
}
