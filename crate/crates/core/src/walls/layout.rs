use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, Mutex, OnceLock};

use super::{elementary_id, strip_debris};
use crate::graph::{Graph, Vertex};
use crate::planarity::embed;

/// Position (x, y) in the 2r × r frame of an elementary r-wall, 1-based.
pub type Pos = (u32, u32);

pub fn elementary_positions(r: u32) -> Vec<Pos> {
    let mut out = Vec::new();
    for y in 1..=r {
        for x in 1..=2 * r {
            if (x, y) != (2 * r, 1) && (x, y) != (1, r) {
                out.push((x, y));
            }
        }
    }
    out
}

/// Horizontal grid edges plus the vertical ones with x + y even.
pub fn elementary_edges(r: u32) -> Vec<(Pos, Pos)> {
    let present: BTreeSet<Pos> = elementary_positions(r).into_iter().collect();
    let mut out = Vec::new();
    for &(x, y) in &present {
        if present.contains(&(x + 1, y)) {
            out.push(((x, y), (x + 1, y)));
        }
        if (x + y) % 2 == 0 && present.contains(&(x, y + 1)) {
            out.push(((x, y), (x, y + 1)));
        }
    }
    out
}

/// Frame change from an r-wall to the (r−2)-wall left after one peel.
fn mirror(r: u32, (x, y): Pos) -> Pos {
    (2 * r - 1 - x, y - 1)
}

pub(crate) fn mirror_times(r: u32, mut p: Pos, times: usize) -> Pos {
    for i in 0..times as u32 {
        p = mirror(r - 2 * i, p);
    }
    p
}

/// Peeling data of the elementary r-wall, in its own frame.
#[derive(Clone, Debug)]
pub struct Layout {
    /// Outermost first, each in cyclic order.
    pub layers: Vec<Vec<Pos>>,
    pub center: [Pos; 2],
    /// `subwalls[j]`: positions of the central (r−2j)-subwall.
    pub subwalls: Vec<BTreeSet<Pos>>,
}

impl Layout {
    /// Cached per height; peeling runs a planar embedding per layer.
    pub fn get(r: u32) -> Arc<Layout> {
        static CACHE: OnceLock<Mutex<BTreeMap<u32, Arc<Layout>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(l) = cache.lock().expect("layout cache").get(&r) {
            return l.clone();
        }
        let l = Arc::new(Layout::new(r));
        cache.lock().expect("layout cache").insert(r, l.clone());
        l
    }

    pub fn new(r: u32) -> Layout {
        let decode = |v: Vertex| -> Pos { (v % (2 * r) + 1, v / (2 * r) + 1) };
        let mut g = Graph::new();
        for p in elementary_positions(r) {
            g.add_vertex(elementary_id(r, p));
        }
        for (a, b) in elementary_edges(r) {
            g.add_edge(elementary_id(r, a), elementary_id(r, b));
        }
        let positions = |g: &Graph| -> BTreeSet<Pos> { g.vertices().map(decode).collect() };
        let mut layers = Vec::new();
        let mut subwalls = vec![positions(&g)];
        let mut h = r;
        loop {
            // The perimeter is the unique longest face once h ≥ 3.
            let faces = embed(&g).expect("walls are planar").faces();
            let outer = faces.into_iter().max_by_key(|f| f.len()).expect("a face");
            layers.push(outer.iter().map(|&v| decode(v)).collect::<Vec<_>>());
            g = g.remove_vertices(&outer);
            if h == 3 {
                break;
            }
            strip_debris(&mut g);
            h -= 2;
            let expected: BTreeSet<Pos> = elementary_positions(h).into_iter().collect();
            let peels = layers.len();
            let got: BTreeSet<Pos> = positions(&g).into_iter().map(|p| mirror_times(r, p, peels)).collect();
            assert_eq!(got, expected, "peeling leaves an elementary {h}-wall");
            subwalls.push(positions(&g));
        }
        let rest: Vec<Pos> = positions(&g).into_iter().collect();
        assert_eq!(rest.len(), 2, "two center vertices");
        let peels = layers.len() - 1;
        let mut center = [rest[0], rest[1]];
        center.sort_by_key(|&p| mirror_times(r, p, peels));
        Layout { layers, center, subwalls }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layer_lengths() {
        let lens = |r| Layout::new(r).layers.iter().map(|l| l.len()).collect::<Vec<_>>();
        assert_eq!(lens(3), vec![14]);
        assert_eq!(lens(5), vec![30, 14]);
        assert_eq!(lens(7), vec![46, 30, 14]);
    }

    #[test]
    fn three_wall_center() {
        assert_eq!(Layout::new(3).center, [(3, 2), (4, 2)]);
        let l = Layout::new(5);
        assert_eq!(l.center.map(|p| mirror(5, p)), [(3, 2), (4, 2)]);
    }
}
