use super::{from_elimination_order, TreeDecomposition};
use crate::error::{Error, Result};
use crate::graph::{Dense, Graph, Vertex};

/// TW(S) = min over v ∈ S of max(TW(S − v), |Q(S − v, v)|), where Q(S, v) is
/// the set of vertices outside S ∪ {v} reachable from v through S. Runs per
/// connected component; `cap` bounds the component size.
pub fn exact_treewidth(g: &Graph, cap: usize) -> Result<(usize, TreeDecomposition)> {
    let mut order = Vec::with_capacity(g.n());
    let mut tw = 0;
    for comp in g.components() {
        if comp.len() > cap {
            return Err(Error::cap(
                "treewidth vertices",
                cap as u64,
                format!("component of {} vertices; raise --cap-treewidth", comp.len()),
            ));
        }
        let (w, ord) = component_dp(&g.induced(&comp));
        tw = tw.max(w);
        order.extend(ord);
    }
    let td = from_elimination_order(g, &order);
    debug_assert!(td.is_valid(g) && td.width() == tw);
    Ok((tw, td))
}

fn component_dp(g: &Graph) -> (usize, Vec<Vertex>) {
    let d = Dense::new(g);
    let n = d.n();
    assert!(n < 32, "subset masks are 32-bit");
    if n <= 1 {
        return (0, d.ids.clone());
    }
    let adj: Vec<u32> = (0..n).map(|i| d.adj[i].iter().fold(0u32, |m, &j| m | 1 << j)).collect();
    let full = (1u32 << n) - 1;
    // |Q(S, v)|: flood from v through S, count boundary outside S ∪ {v}.
    let q = |s: u32, v: usize| -> usize {
        let mut seen = 1u32 << v;
        let mut frontier = 1u32 << v;
        let mut boundary = 0u32;
        while frontier != 0 {
            let i = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let nb = adj[i] & !seen;
            seen |= nb;
            boundary |= nb & !s;
            frontier |= nb & s;
        }
        (boundary & !(1u32 << v)).count_ones() as usize
    };
    let size = 1usize << n;
    let mut tw = vec![usize::MAX; size];
    let mut choice = vec![0u8; size];
    tw[0] = 0;
    for s in 1..size as u32 {
        let mut best = usize::MAX;
        let mut arg = 0;
        let mut bits = s;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let rest = s & !(1 << v);
            let val = tw[rest as usize].max(q(rest, v));
            if val < best {
                best = val;
                arg = v;
            }
        }
        tw[s as usize] = best;
        choice[s as usize] = arg as u8;
    }
    let mut order = Vec::with_capacity(n);
    let mut s = full;
    while s != 0 {
        let v = choice[s as usize] as usize;
        order.push(d.ids[v]);
        s &= !(1 << v);
    }
    order.reverse();
    (tw[full as usize], order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::grid::make_grid;

    #[test]
    fn known_values() {
        assert_eq!(exact_treewidth(&Graph::path(7), 14).unwrap().0, 1);
        assert_eq!(exact_treewidth(&Graph::cycle(7), 14).unwrap().0, 2);
        for n in 1..=8 {
            let (tw, td) = exact_treewidth(&Graph::complete(n), 14).unwrap();
            assert_eq!(tw, n as usize - 1);
            assert!(td.is_valid(&Graph::complete(n)));
        }
        let grid = make_grid(4, 4).unwrap().graph;
        let (tw, td) = exact_treewidth(&grid, 16).unwrap();
        assert_eq!(tw, 4);
        assert_eq!(td.width(), 4);
        assert!(td.is_valid(&grid));
        assert_eq!(exact_treewidth(&Graph::petersen(), 14).unwrap().0, 4);
        assert_eq!(exact_treewidth(&Graph::complete_bipartite(3, 3), 14).unwrap().0, 3);
    }

    #[test]
    fn cap_is_reported() {
        let err = exact_treewidth(&Graph::path(20), 14).unwrap_err();
        assert!(err.is_resource());
        assert!(exact_treewidth(&Graph::path(10).disjoint_union(&Graph::path(10), 100), 14).is_ok());
    }
}
