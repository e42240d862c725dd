use std::collections::HashMap;

use super::{Graph, Vertex};

/// Index-compressed snapshot of a graph for hot loops.
#[derive(Clone, Debug)]
pub struct Dense {
    pub ids: Vec<Vertex>,
    pub adj: Vec<Vec<usize>>,
    index: HashMap<Vertex, usize>,
}

impl Dense {
    pub fn new(g: &Graph) -> Self {
        let ids: Vec<Vertex> = g.vertices().collect();
        let index: HashMap<Vertex, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let adj = ids
            .iter()
            .map(|&v| g.neighbors(v).map(|u| index[&u]).collect())
            .collect();
        Dense { ids, adj, index }
    }

    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn idx(&self, v: Vertex) -> Option<usize> {
        self.index.get(&v).copied()
    }

    /// Row-major adjacency matrix.
    pub fn matrix(&self) -> Vec<bool> {
        let n = self.n();
        let mut m = vec![false; n * n];
        for (u, ns) in self.adj.iter().enumerate() {
            for &w in ns {
                m[u * n + w] = true;
            }
        }
        m
    }

    /// BFS distances with `usize::MAX` for unreachable.
    pub fn bfs(&self, s: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n()];
        dist[s] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }
}
