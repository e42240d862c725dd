use serde::{Deserialize, Serialize};

use super::{Graph, Vertex};
use crate::error::{Error, Result};

/// Wire form: `{"vertices":[..],"edges":[[u,v],..]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<(Vertex, Vertex)>,
}

impl From<Graph> for GraphJson {
    fn from(g: Graph) -> Self {
        GraphJson {
            vertices: g.vertices().collect(),
            edges: g.edges().collect(),
        }
    }
}

impl TryFrom<GraphJson> for Graph {
    type Error = Error;

    fn try_from(j: GraphJson) -> Result<Self> {
        Graph::build(j.vertices, j.edges)
    }
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphJson::from(self.clone()).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = GraphJson::deserialize(d)?;
        Graph::try_from(j).map_err(serde::de::Error::custom)
    }
}

impl Graph {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph serializes")
    }

    pub fn from_json(text: &str) -> Result<Graph> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            pos: e.column(),
            msg: format!("line {}: {e}", e.line()),
        })
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph G {\n");
        for v in self.vertices() {
            if self.degree(v) == 0 {
                out.push_str(&format!("  {v};\n"));
            }
        }
        for (u, v) in self.edges() {
            out.push_str(&format!("  {u} -- {v};\n"));
        }
        out.push_str("}\n");
        out
    }

    /// Reads the subset of DOT written by [`Graph::to_dot`]: numeric node
    /// statements and `--` chains.
    pub fn from_dot(text: &str) -> Result<Graph> {
        let body_start = text
            .find('{')
            .ok_or(Error::Parse { pos: 0, msg: "missing '{'".into() })?;
        let body_end = text
            .rfind('}')
            .ok_or(Error::Parse { pos: text.len(), msg: "missing '}'".into() })?;
        let mut g = Graph::new();
        let mut offset = body_start + 1;
        for stmt in text[body_start + 1..body_end].split([';', '\n']) {
            let pos = offset;
            offset += stmt.len() + 1;
            let stmt = stmt.trim();
            if stmt.is_empty() {
                continue;
            }
            let mut prev = None;
            for tok in stmt.split("--") {
                let tok = tok.trim();
                let v: Vertex = tok.parse().map_err(|_| Error::Parse {
                    pos,
                    msg: format!("expected vertex id, found {tok:?}"),
                })?;
                g.add_vertex(v);
                if let Some(u) = prev {
                    if u == v {
                        return Err(Error::Parse { pos, msg: format!("loop at {v}") });
                    }
                    g.add_edge(u, v);
                }
                prev = Some(v);
            }
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let g = Graph::petersen().remove_vertex(3);
        let back = Graph::from_json(&g.to_json()).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn json_rejects_dangling_edge() {
        let err = Graph::from_json(r#"{"vertices":[0],"edges":[[0,1]]}"#).unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
    }

    #[test]
    fn dot_round_trip() {
        let mut g = Graph::cycle(4);
        g.add_vertex(9);
        assert_eq!(Graph::from_dot(&g.to_dot()).unwrap(), g);
        assert!(Graph::from_dot("graph { a -- b }").is_err());
    }
}
