use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::is_planar;
use crate::graph::{edge, Graph, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum KuratowskiKind {
    K5,
    K33,
}

/// An edge-minimal nonplanar subgraph of `g` without isolated vertices, which
/// by Kuratowski's theorem is a subdivision of K5 or K3,3.
pub fn kuratowski(g: &Graph) -> Option<Graph> {
    if is_planar(g) {
        return None;
    }
    let mut h = g.clone();
    for v in g.vertices() {
        let cand = h.remove_vertex(v);
        if !is_planar(&cand) {
            h = cand;
        }
    }
    for (u, v) in h.clone().edges() {
        let mut cand = h.clone();
        cand.delete_edge(u, v);
        if !is_planar(&cand) {
            h = cand;
        }
    }
    let isolated: Vec<Vertex> = h.vertices().filter(|&v| h.degree(v) == 0).collect();
    Some(h.remove_vertices(&isolated))
}

/// Recognises subdivisions of K5 and K3,3 by suppressing degree-2 vertices.
pub fn classify_kuratowski(h: &Graph) -> Option<KuratowskiKind> {
    if h.n() == 0 || !h.is_connected() || h.vertices().any(|v| h.degree(v) < 2) {
        return None;
    }
    let branch: Vec<Vertex> = h.vertices().filter(|&v| h.degree(v) >= 3).collect();
    let is_branch = |v: Vertex| h.degree(v) >= 3;
    let mut pairs: BTreeSet<(Vertex, Vertex)> = BTreeSet::new();
    let mut walked = 0usize;
    for &b in &branch {
        for start in h.neighbors(b) {
            let (mut prev, mut cur) = (b, start);
            let mut len = 1;
            while !is_branch(cur) {
                let next = h.neighbors(cur).find(|&w| w != prev)?;
                prev = cur;
                cur = next;
                len += 1;
            }
            if cur == b {
                return None;
            }
            walked += len;
            pairs.insert(edge(b, cur));
        }
    }
    // Every edge is walked once from each side.
    // Parallel branch paths collapse in `pairs`.
    let paths: usize = branch.iter().map(|&v| h.degree(v)).sum::<usize>() / 2;
    if walked != 2 * h.m() || pairs.len() != paths {
        return None;
    }
    let degs: Vec<usize> = branch.iter().map(|&v| h.degree(v)).collect();
    if branch.len() == 5 && degs.iter().all(|&d| d == 4) && pairs.len() == 10 {
        return Some(KuratowskiKind::K5);
    }
    if branch.len() == 6 && degs.iter().all(|&d| d == 3) && pairs.len() == 9 {
        let mut side = std::collections::BTreeMap::new();
        side.insert(branch[0], false);
        let mut changed = true;
        while changed {
            changed = false;
            for &(a, b) in &pairs {
                match (side.get(&a).copied(), side.get(&b).copied()) {
                    (Some(x), None) => {
                        side.insert(b, !x);
                        changed = true;
                    }
                    (None, Some(y)) => {
                        side.insert(a, !y);
                        changed = true;
                    }
                    (Some(x), Some(y)) if x == y => return None,
                    _ => {}
                }
            }
        }
        if side.len() == 6 && side.values().filter(|&&s| s).count() == 3 {
            return Some(KuratowskiKind::K33);
        }
    }
    None
}
