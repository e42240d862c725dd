//! (K5, r)-stars: r copies of K4 plus a hub adjacent to all of them, and a
//! bounded search for such a minor around a given hub.

use std::collections::BTreeMap;

use crate::graph::{Dense, Graph, MinorModel, Vertex, VertexSet};

/// Hub 0; copy i occupies 4i+1..=4i+4.
pub fn k5_star(copies: usize) -> Graph {
    let mut g = Graph::with_vertices([0]);
    for i in 0..copies as Vertex {
        let base = 4 * i + 1;
        for a in base..base + 4 {
            g.add_edge(0, a);
            for b in a + 1..base + 4 {
                g.add_edge(a, b);
            }
        }
    }
    g
}

/// Branch sets are connected sets of at most this many vertices.
pub const MAX_BRANCH: usize = 3;

struct Search<'a> {
    sets: &'a [u64],
    /// adj[i] has bit j when sets i and j are disjoint and touch.
    adj: Vec<Vec<u64>>,
    copies: usize,
    budget: u64,
    chosen: Vec<[usize; 4]>,
}

impl Search<'_> {
    fn touching(&self, i: usize, j: usize) -> bool {
        self.adj[i][j / 64] >> (j % 64) & 1 == 1
    }

    fn copy(&mut self, used: u64, first: usize) -> bool {
        if self.chosen.len() == self.copies {
            return true;
        }
        let mut pick = [0usize; 4];
        self.extend(used, first, 0, &mut pick)
    }

    fn extend(&mut self, used: u64, from: usize, depth: usize, pick: &mut [usize; 4]) -> bool {
        if depth == 4 {
            self.chosen.push(*pick);
            let next_used = used | pick.iter().fold(0, |m, &i| m | self.sets[i]);
            if self.copy(next_used, pick[0] + 1) {
                return true;
            }
            self.chosen.pop();
            return false;
        }
        for i in from..self.sets.len() {
            if self.budget == 0 {
                return false;
            }
            self.budget -= 1;
            if self.sets[i] & used != 0 || !pick[..depth].iter().all(|&p| self.touching(p, i)) {
                continue;
            }
            pick[depth] = i;
            if self.extend(used, i + 1, depth + 1, pick) {
                return true;
            }
        }
        false
    }
}

/// Connected vertex sets of size ≤ `max` (as index masks) meeting `roots`.
fn rooted_connected_sets(d: &Dense, nbr: &[u64], allowed: u64, roots: u64, max: usize) -> Vec<u64> {
    let mut seen = std::collections::BTreeSet::new();
    let mut frontier: Vec<u64> = (0..d.n()).filter(|&i| roots >> i & 1 == 1 && allowed >> i & 1 == 1).map(|i| 1u64 << i).collect();
    seen.extend(frontier.iter().copied());
    for _ in 1..max {
        let mut next = Vec::new();
        for &s in &frontier {
            let mut boundary = (0..d.n()).filter(|&i| s >> i & 1 == 1).fold(0, |m, i| m | nbr[i]) & allowed & !s;
            while boundary != 0 {
                let i = boundary.trailing_zeros();
                boundary &= boundary - 1;
                let grown = s | 1 << i;
                if seen.insert(grown) {
                    next.push(grown);
                }
            }
        }
        frontier = next;
    }
    seen.into_iter().collect()
}

/// A model of the (K5, copies)-star in `g` whose hub branch set is {hub}, with
/// branch sets of at most `MAX_BRANCH` vertices. `None` when none exists under
/// these limits or the node budget runs out. Graphs over 64 vertices are not
/// searched.
pub fn find_star_minor(g: &Graph, hub: Vertex, copies: usize, budget: u64) -> Option<MinorModel> {
    let d = Dense::new(g);
    let h = d.idx(hub)?;
    if d.n() > 64 {
        return None;
    }
    let nbr: Vec<u64> = (0..d.n()).map(|i| d.adj[i].iter().fold(0u64, |m, &j| m | 1 << j)).collect();
    let allowed = !(1u64 << h) & if d.n() == 64 { u64::MAX } else { (1u64 << d.n()) - 1 };
    let sets = rooted_connected_sets(&d, &nbr, allowed, nbr[h], MAX_BRANCH);
    let reach = |s: u64| (0..d.n()).filter(|&i| s >> i & 1 == 1).fold(0, |m, i| m | nbr[i]);
    let words = sets.len().div_ceil(64);
    let adj: Vec<Vec<u64>> = sets
        .iter()
        .map(|&a| {
            let ra = reach(a);
            let mut row = vec![0u64; words];
            for (j, &b) in sets.iter().enumerate() {
                if a & b == 0 && ra & b != 0 {
                    row[j / 64] |= 1 << (j % 64);
                }
            }
            row
        })
        .collect();
    let mut search = Search { sets: &sets, adj, copies, budget, chosen: Vec::new() };
    if !search.copy(0, 0) {
        return None;
    }
    let to_set = |m: u64| -> VertexSet { (0..d.n()).filter(|&i| m >> i & 1 == 1).map(|i| d.ids[i]).collect() };
    let mut branch = BTreeMap::from([(0, VertexSet::from([hub]))]);
    for (c, pick) in search.chosen.iter().enumerate() {
        for (j, &i) in pick.iter().enumerate() {
            branch.insert((4 * c + j + 1) as Vertex, to_set(sets[i]));
        }
    }
    let model = MinorModel { branch };
    debug_assert!(model.verify(g, &k5_star(copies)));
    Some(model)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stars_contain_themselves() {
        for r in 1..=3 {
            let g = k5_star(r);
            assert_eq!(g.n(), 4 * r + 1);
            let m = find_star_minor(&g, 0, r, 1_000_000).unwrap();
            assert!(m.verify(&g, &k5_star(r)));
            assert!(find_star_minor(&g, 0, r + 1, 1_000_000).is_none());
            assert!(find_star_minor(&g, 1, 1, 1_000_000).is_some());
        }
    }

    #[test]
    fn subdivided_star_is_found() {
        // Subdivide every hub edge of one copy once.
        let mut g = Graph::with_vertices([0]);
        for a in 1..=4u32 {
            for b in a + 1..=4 {
                g.add_edge(a, b);
            }
            g.add_edge(0, 10 + a);
            g.add_edge(10 + a, a);
        }
        assert!(find_star_minor(&g, 0, 1, 1_000_000).is_some());
        assert!(find_star_minor(&Graph::complete(4), 0, 1, 1_000_000).is_none());
        assert!(find_star_minor(&Graph::petersen(), 0, 1, 1_000_000).is_none());
    }
}
