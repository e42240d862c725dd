use std::collections::HashMap;

use super::{from_elimination_order, min_fill_order, TreeDecomposition};
use crate::error::{Error, Result};
use crate::graph::{Dense, Graph, Vertex};

/// Depth-first branch and bound over elimination orderings. Upper bound from
/// min-fill, lower bound from the minimum-degree degeneracy, simplicial
/// vertices eliminated eagerly, and a table of eliminated sets already reached
/// with no larger width.
pub fn treewidth_bnb(g: &Graph, node_budget: u64) -> Result<(usize, TreeDecomposition)> {
    let d = Dense::new(g);
    let n = d.n();
    if n > 64 {
        return Err(Error::cap("branch-and-bound vertices", 64, "use the subset DP on smaller components"));
    }
    if n == 0 {
        return Ok((0, from_elimination_order(g, &[])));
    }
    let seed = min_fill_order(g);
    let seed_td = from_elimination_order(g, &seed);
    let mut search = Search {
        adj: (0..n).map(|i| d.adj[i].iter().fold(0u64, |m, &j| m | 1 << j)).collect(),
        best: seed_td.width(),
        best_order: seed.iter().map(|&v| d.idx(v).expect("vertex")).collect(),
        seen: HashMap::new(),
        nodes: 0,
        budget: node_budget,
    };
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let adj = search.adj.clone();
    let mut order = Vec::with_capacity(n);
    search.go(&adj, all, 0, &mut order)?;
    let order: Vec<Vertex> = search.best_order.iter().map(|&i| d.ids[i]).collect();
    let td = from_elimination_order(g, &order);
    debug_assert_eq!(td.width(), search.best);
    Ok((search.best, td))
}

struct Search {
    adj: Vec<u64>,
    best: usize,
    best_order: Vec<usize>,
    seen: HashMap<u64, usize>,
    nodes: u64,
    budget: u64,
}

fn eliminate(adj: &[u64], v: usize) -> Vec<u64> {
    let nb = adj[v];
    let mut out = adj.to_vec();
    let mut bits = nb;
    while bits != 0 {
        let a = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        out[a] = (out[a] | nb) & !(1u64 << a) & !(1u64 << v);
    }
    out[v] = 0;
    out
}

/// Degeneracy of the graph induced on `alive`: a treewidth lower bound.
fn degeneracy(adj: &[u64], mut alive: u64) -> usize {
    let mut best = 0;
    while alive != 0 {
        let mut min = usize::MAX;
        let mut arg = 0;
        let mut bits = alive;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let deg = (adj[v] & alive).count_ones() as usize;
            if deg < min {
                min = deg;
                arg = v;
            }
        }
        best = best.max(min);
        alive &= !(1u64 << arg);
    }
    best
}

fn is_clique(adj: &[u64], set: u64) -> bool {
    let mut bits = set;
    while bits != 0 {
        let v = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        if (adj[v] | 1u64 << v) & set != set {
            return false;
        }
    }
    true
}

impl Search {
    fn go(&mut self, adj: &[u64], alive: u64, width: usize, order: &mut Vec<usize>) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::cap("branch-and-bound nodes", self.budget, "raise the node budget"));
        }
        let left = alive.count_ones() as usize;
        if left <= width + 1 {
            // The rest fits in one bag no larger than the current width.
            if width < self.best {
                self.best = width;
                let mut full = order.clone();
                let mut bits = alive;
                while bits != 0 {
                    full.push(bits.trailing_zeros() as usize);
                    bits &= bits - 1;
                }
                self.best_order = full;
            }
            return Ok(());
        }
        if width.max(degeneracy(adj, alive)) >= self.best {
            return Ok(());
        }
        match self.seen.get(&alive) {
            Some(&w) if w <= width => return Ok(()),
            _ => {
                self.seen.insert(alive, width);
            }
        }
        // A simplicial vertex can go first without loss.
        let mut bits = alive;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let nb = adj[v] & alive;
            if is_clique(adj, nb) {
                let w = width.max(nb.count_ones() as usize);
                if w >= self.best {
                    return Ok(());
                }
                order.push(v);
                let next = eliminate(adj, v);
                let r = self.go(&next, alive & !(1u64 << v), w, order);
                order.pop();
                return r;
            }
        }
        let mut cands: Vec<(usize, usize)> = Vec::new();
        let mut bits = alive;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            cands.push(((adj[v] & alive).count_ones() as usize, v));
        }
        cands.sort();
        for (deg, v) in cands {
            let w = width.max(deg);
            if w >= self.best {
                continue;
            }
            order.push(v);
            let next = eliminate(adj, v);
            self.go(&next, alive & !(1u64 << v), w, order)?;
            order.pop();
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::grid::make_grid;
    use crate::treewidth::exact_treewidth;
    use proptest::prelude::*;

    #[test]
    fn known_values() {
        assert_eq!(treewidth_bnb(&Graph::path(9), 1 << 20).unwrap().0, 1);
        assert_eq!(treewidth_bnb(&Graph::complete(7), 1 << 20).unwrap().0, 6);
        let grid = make_grid(4, 4).unwrap().graph;
        let (tw, td) = treewidth_bnb(&grid, 1 << 22).unwrap();
        assert_eq!(tw, 4);
        assert!(td.is_valid(&grid));
        assert_eq!(treewidth_bnb(&Graph::petersen(), 1 << 20).unwrap().0, 4);
        assert_eq!(treewidth_bnb(&Graph::new(), 10).unwrap().0, 0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(60))]

        #[test]
        fn agrees_with_subset_dp(n in 1u32..=11, mask in any::<u64>(), extra in any::<u64>()) {
            let mut g = Graph::with_vertices(0..n);
            let mut bit = 0;
            for u in 0..n {
                for v in u + 1..n {
                    let word = if bit < 64 { mask >> bit } else { extra >> (bit - 64) };
                    if word & 1 == 1 {
                        g.add_edge(u, v);
                    }
                    bit += 1;
                }
            }
            let (a, ta) = exact_treewidth(&g, 14).unwrap();
            let (b, tb) = treewidth_bnb(&g, 1 << 22).unwrap();
            prop_assert_eq!(a, b);
            prop_assert!(ta.is_valid(&g) && tb.is_valid(&g));
        }
    }
}
