//! Path-addition embedding (Demoucron–Malgrange–Pertuiset) per biconnected block,
//! merged into a rotation system at cut vertices.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::graph::{Dense, Graph, Vertex};

/// Rotation system: for each vertex, its neighbours in cyclic order. Faces are
/// traced by `(u→v) ↦ (v→succ_v(u))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    pub rotation: BTreeMap<Vertex, Vec<Vertex>>,
    pub outer_face: usize,
}

impl Embedding {
    fn succ(&self, v: Vertex, u: Vertex) -> Vertex {
        let rot = &self.rotation[&v];
        let i = rot.iter().position(|&x| x == u).expect("dart in rotation");
        rot[(i + 1) % rot.len()]
    }

    /// Facial walks as sequences of dart tails, in a deterministic order.
    pub fn faces(&self) -> Vec<Vec<Vertex>> {
        let mut seen: HashSet<(Vertex, Vertex)> = HashSet::new();
        let mut faces = Vec::new();
        for (&u, rot) in &self.rotation {
            for &v in rot {
                if seen.contains(&(u, v)) {
                    continue;
                }
                let mut face = Vec::new();
                let (mut a, mut b) = (u, v);
                while seen.insert((a, b)) {
                    face.push(a);
                    let c = self.succ(b, a);
                    a = b;
                    b = c;
                }
                faces.push(face);
            }
        }
        faces
    }

    /// Rotation lists are permutations of the neighbourhoods of `g`.
    pub fn is_rotation_of(&self, g: &Graph) -> bool {
        g.n() == self.rotation.len()
            && g.vertices().all(|v| {
                let Some(rot) = self.rotation.get(&v) else {
                    return false;
                };
                let mut sorted = rot.clone();
                sorted.sort_unstable();
                sorted.dedup();
                sorted.len() == rot.len() && sorted.iter().copied().eq(g.neighbors(v))
            })
    }

    /// V − E + F = 1 + C with the unbounded face counted once.
    pub fn satisfies_euler(&self, g: &Graph) -> bool {
        if !self.is_rotation_of(g) {
            return false;
        }
        let comps = g.components();
        let traced = self.faces().len() as i64;
        let isolated = comps.iter().filter(|c| c.len() == 1).count() as i64;
        let c = comps.len() as i64;
        let faces = traced + isolated - (c - 1).max(0);
        g.n() as i64 - g.m() as i64 + faces == 1 + c
    }
}

/// Biconnected blocks as edge lists (bridges are single-edge blocks).
pub fn blocks(d: &Dense) -> Vec<Vec<(usize, usize)>> {
    let n = d.n();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut time = 0;
    let mut out = Vec::new();
    let mut estack: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        // (vertex, parent, next neighbour index)
        let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
        while let Some(&(u, p, i)) = stack.last() {
            if i < d.adj[u].len() {
                let w = d.adj[u][i];
                stack.last_mut().expect("nonempty").2 += 1;
                if disc[w] == usize::MAX {
                    estack.push((u, w));
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    stack.push((w, u, 0));
                } else if w != p && disc[w] < disc[u] {
                    estack.push((u, w));
                    low[u] = low[u].min(disc[w]);
                }
            } else {
                stack.pop();
                if p != usize::MAX {
                    low[p] = low[p].min(low[u]);
                    if low[u] >= disc[p] {
                        let mut block = Vec::new();
                        while let Some(e) = estack.pop() {
                            block.push(e);
                            if e == (p, u) {
                                break;
                            }
                        }
                        out.push(block);
                    }
                }
            }
        }
    }
    out
}

/// Faces of a planar embedding of a 2-connected graph given on local indices,
/// or `None` when it is not planar.
fn embed_block(n: usize, adj: &[Vec<usize>]) -> Option<Vec<Vec<usize>>> {
    let cycle = find_cycle(n, adj)?;
    let mut in_h = vec![false; n];
    let mut h_edges: HashSet<(usize, usize)> = HashSet::new();
    for i in 0..cycle.len() {
        in_h[cycle[i]] = true;
        let (a, b) = (cycle[i], cycle[(i + 1) % cycle.len()]);
        h_edges.insert((a.min(b), a.max(b)));
    }
    let mut faces = vec![cycle.clone(), cycle.iter().rev().copied().collect::<Vec<_>>()];
    loop {
        let fragments = fragments(n, adj, &in_h, &h_edges);
        if fragments.is_empty() {
            return Some(faces);
        }
        let face_sets: Vec<Vec<bool>> = faces
            .iter()
            .map(|f| {
                let mut s = vec![false; n];
                for &v in f {
                    s[v] = true;
                }
                s
            })
            .collect();
        let mut choice = None;
        for (fi, frag) in fragments.iter().enumerate() {
            let admissible: Vec<usize> = (0..faces.len())
                .filter(|&f| frag.attach.iter().all(|&a| face_sets[f][a]))
                .collect();
            match admissible.len() {
                0 => return None,
                1 => {
                    choice = Some((fi, admissible[0]));
                    break;
                }
                _ => {
                    if choice.is_none() {
                        choice = Some((fi, admissible[0]));
                    }
                }
            }
        }
        let (fi, f) = choice.expect("some fragment");
        let path = fragment_path(adj, &fragments[fi], &in_h);
        for w in path.windows(2) {
            h_edges.insert((w[0].min(w[1]), w[0].max(w[1])));
        }
        for &v in &path {
            in_h[v] = true;
        }
        let face = faces.swap_remove(f);
        let (f1, f2) = split_face(&face, &path);
        faces.push(f1);
        faces.push(f2);
    }
}

struct Fragment {
    attach: Vec<usize>,
    /// Empty for a chord.
    inner: Vec<usize>,
}

fn fragments(n: usize, adj: &[Vec<usize>], in_h: &[bool], h_edges: &HashSet<(usize, usize)>) -> Vec<Fragment> {
    let mut out = Vec::new();
    for u in 0..n {
        if !in_h[u] {
            continue;
        }
        for &w in &adj[u] {
            if u < w && in_h[w] && !h_edges.contains(&(u, w)) {
                out.push(Fragment { attach: vec![u, w], inner: vec![] });
            }
        }
    }
    let mut seen = vec![false; n];
    for s in 0..n {
        if in_h[s] || seen[s] {
            continue;
        }
        let mut inner = vec![s];
        seen[s] = true;
        let mut attach = Vec::new();
        let mut i = 0;
        while i < inner.len() {
            let u = inner[i];
            i += 1;
            for &w in &adj[u] {
                if in_h[w] {
                    if !attach.contains(&w) {
                        attach.push(w);
                    }
                } else if !seen[w] {
                    seen[w] = true;
                    inner.push(w);
                }
            }
        }
        attach.sort_unstable();
        out.push(Fragment { attach, inner });
    }
    out
}

/// A path through the fragment between two of its attachment vertices.
fn fragment_path(adj: &[Vec<usize>], frag: &Fragment, in_h: &[bool]) -> Vec<usize> {
    if frag.inner.is_empty() {
        return frag.attach.clone();
    }
    let (a, b) = (frag.attach[0], frag.attach[1]);
    let inner: HashSet<usize> = frag.inner.iter().copied().collect();
    let mut parent: BTreeMap<usize, usize> = BTreeMap::new();
    let mut queue = std::collections::VecDeque::new();
    for &x in &adj[a] {
        if inner.contains(&x) && !parent.contains_key(&x) {
            parent.insert(x, a);
            queue.push_back(x);
        }
    }
    while let Some(u) = queue.pop_front() {
        if adj[u].contains(&b) {
            let mut path = vec![b, u];
            let mut x = u;
            while parent[&x] != a {
                x = parent[&x];
                path.push(x);
            }
            path.push(a);
            path.reverse();
            return path;
        }
        for &w in &adj[u] {
            if !in_h[w] && inner.contains(&w) && !parent.contains_key(&w) {
                parent.insert(w, u);
                queue.push_back(w);
            }
        }
    }
    unreachable!("fragment of a 2-connected graph reaches two attachments")
}

fn split_face(face: &[usize], path: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let len = face.len();
    let a = path[0];
    let b = *path.last().expect("nonempty path");
    let i = face.iter().position(|&x| x == a).expect("a on face");
    let j = face.iter().position(|&x| x == b).expect("b on face");
    let inner = &path[1..path.len() - 1];
    let mut f1 = Vec::new();
    let mut k = i;
    loop {
        f1.push(face[k]);
        if k == j {
            break;
        }
        k = (k + 1) % len;
    }
    f1.extend(inner.iter().rev());
    let mut f2 = Vec::new();
    let mut k = j;
    loop {
        f2.push(face[k]);
        if k == i {
            break;
        }
        k = (k + 1) % len;
    }
    f2.extend(inner.iter());
    (f1, f2)
}

fn find_cycle(n: usize, adj: &[Vec<usize>]) -> Option<Vec<usize>> {
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![usize::MAX; n];
    for root in 0..n {
        if depth[root] != usize::MAX {
            continue;
        }
        depth[root] = 0;
        let mut stack = vec![(root, 0usize)];
        while let Some(&(u, i)) = stack.last() {
            if i < adj[u].len() {
                let w = adj[u][i];
                stack.last_mut().expect("nonempty").1 += 1;
                if depth[w] == usize::MAX {
                    depth[w] = depth[u] + 1;
                    parent[w] = u;
                    stack.push((w, 0));
                } else if w != parent[u] && depth[w] < depth[u] {
                    let mut cycle = vec![u];
                    let mut x = u;
                    while x != w {
                        x = parent[x];
                        cycle.push(x);
                    }
                    return Some(cycle);
                }
            } else {
                stack.pop();
            }
        }
    }
    None
}

/// Cyclic successor map at each vertex derived from consistently oriented faces.
fn rotation_from_faces(n: usize, faces: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut next: Vec<BTreeMap<usize, usize>> = vec![BTreeMap::new(); n];
    for f in faces {
        let len = f.len();
        for i in 0..len {
            let (u, v, w) = (f[(i + len - 1) % len], f[i], f[(i + 1) % len]);
            next[v].insert(u, w);
        }
    }
    next.into_iter()
        .map(|m| {
            let Some((&start, _)) = m.iter().next() else {
                return Vec::new();
            };
            let mut rot = vec![start];
            let mut x = m[&start];
            while x != start {
                rot.push(x);
                x = m[&x];
            }
            rot
        })
        .collect()
}

pub fn embed(g: &Graph) -> Option<Embedding> {
    // Quick edge-count bound for simple planar graphs.
    if g.n() >= 3 && g.m() > 3 * g.n() - 6 {
        return None;
    }
    let d = Dense::new(g);
    let mut rot: Vec<Vec<usize>> = vec![Vec::new(); d.n()];
    for block in blocks(&d) {
        if block.len() == 1 {
            let (u, w) = block[0];
            rot[u].push(w);
            rot[w].push(u);
            continue;
        }
        let mut local: Vec<usize> = block.iter().flat_map(|&(a, b)| [a, b]).collect();
        local.sort_unstable();
        local.dedup();
        let pos: BTreeMap<usize, usize> = local.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut ladj = vec![Vec::new(); local.len()];
        for &(a, b) in &block {
            ladj[pos[&a]].push(pos[&b]);
            ladj[pos[&b]].push(pos[&a]);
        }
        let faces = embed_block(local.len(), &ladj)?;
        for (i, r) in rotation_from_faces(local.len(), &faces).into_iter().enumerate() {
            rot[local[i]].extend(r.into_iter().map(|x| local[x]));
        }
    }
    let rotation: BTreeMap<Vertex, Vec<Vertex>> = rot
        .into_iter()
        .enumerate()
        .map(|(i, r)| (d.ids[i], r.into_iter().map(|x| d.ids[x]).collect()))
        .collect();
    let mut emb = Embedding { rotation, outer_face: 0 };
    let faces = emb.faces();
    emb.outer_face = (0..faces.len())
        .max_by_key(|&i| (faces[i].len(), std::cmp::Reverse(i)))
        .unwrap_or(0);
    Some(emb)
}
