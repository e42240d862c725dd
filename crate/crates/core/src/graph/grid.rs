//! Grids, central grids and triangulated grids with a loaded corner.

use std::collections::BTreeMap;

use super::{ContractionMap, Graph, Vertex, VertexSet};
use crate::error::{Error, Result};

/// A `width × height` grid; position (x, y) with 1 ≤ x ≤ width, 1 ≤ y ≤ height.
#[derive(Clone, Debug)]
pub struct Grid {
    pub width: u32,
    pub height: u32,
    pub graph: Graph,
    pub coords: BTreeMap<Vertex, (u32, u32)>,
}

impl Grid {
    pub fn id(&self, x: u32, y: u32) -> Option<Vertex> {
        self.coords.iter().find(|(_, &c)| c == (x, y)).map(|(&v, _)| v)
    }

    fn at(&self) -> BTreeMap<(u32, u32), Vertex> {
        self.coords.iter().map(|(&v, &c)| (c, v)).collect()
    }

    /// Layer `i` (1-based from the outside) as a vertex set.
    pub fn layer(&self, i: u32) -> VertexSet {
        let (x0, y0) = (i, i);
        let (x1, y1) = (self.width + 1 - i, self.height + 1 - i);
        if x0 > x1 || y0 > y1 {
            return VertexSet::new();
        }
        self.coords
            .iter()
            .filter(|(_, &(x, y))| {
                (x0..=x1).contains(&x)
                    && (y0..=y1).contains(&y)
                    && (x == x0 || x == x1 || y == y0 || y == y1)
            })
            .map(|(&v, _)| v)
            .collect()
    }
}

/// Cartesian product of a path on `k` vertices and a path on `r` vertices.
/// Vertex (x, y) gets id (y−1)·k + (x−1).
pub fn make_grid(k: u32, r: u32) -> Result<Grid> {
    if k < 1 || r < 1 {
        return Err(Error::input("grid dimensions must be positive"));
    }
    let id = |x: u32, y: u32| (y - 1) * k + (x - 1);
    let mut g = Graph::new();
    let mut coords = BTreeMap::new();
    for y in 1..=r {
        for x in 1..=k {
            g.add_vertex(id(x, y));
            coords.insert(id(x, y), (x, y));
            if x > 1 {
                g.add_edge(id(x - 1, y), id(x, y));
            }
            if y > 1 {
                g.add_edge(id(x, y - 1), id(x, y));
            }
        }
    }
    Ok(Grid { width: k, height: r, graph: g, coords })
}

/// The central q-grid of a square r-grid, relabeled to coordinates 1..=q but
/// keeping host ids.
pub fn central_grid(grid: &Grid, q: u32) -> Result<Grid> {
    let r = grid.width;
    if grid.height != r {
        return Err(Error::input("central grid needs a square grid"));
    }
    if q > r || q % 2 != r % 2 || q == 0 {
        return Err(Error::input(format!(
            "central {q}-grid of a {r}-grid needs q ≤ r with equal parity"
        )));
    }
    let shift = (r - q) / 2;
    let keep: VertexSet = grid
        .coords
        .iter()
        .filter(|(_, &(x, y))| x > shift && x <= r - shift && y > shift && y <= r - shift)
        .map(|(&v, _)| v)
        .collect();
    let coords = keep.iter().map(|&v| {
        let (x, y) = grid.coords[&v];
        (v, (x - shift, y - shift))
    });
    Ok(Grid {
        width: q,
        height: q,
        graph: grid.graph.induced(&keep),
        coords: coords.collect(),
    })
}

#[derive(Clone, Debug)]
pub struct TriangulatedGrid {
    pub grid: Grid,
    pub graph: Graph,
    pub loaded: Vertex,
}

/// Γ_k: every internal square gets the diagonal (x,y)–(x+1,y+1), and the corner
/// (k,1) is joined to every boundary vertex.
pub fn make_triangulated_grid(k: u32) -> Result<TriangulatedGrid> {
    if k < 2 {
        return Err(Error::input("triangulated grid needs k ≥ 2"));
    }
    let grid = make_grid(k, k)?;
    let at = grid.at();
    let mut g = grid.graph.clone();
    for y in 1..k {
        for x in 1..k {
            g.add_edge(at[&(x, y)], at[&(x + 1, y + 1)]);
        }
    }
    let loaded = at[&(k, 1)];
    for v in grid.layer(1) {
        if v != loaded {
            g.add_edge(loaded, v);
        }
    }
    Ok(TriangulatedGrid { grid, graph: g, loaded })
}

/// Contract Γ_k onto its z-subgrid with lower-left corner (x0, y0): everything
/// outside the subgrid merges into the subgrid corner (x0+z−1, y0), which becomes
/// the loaded vertex of the image Γ_z. The subgrid must avoid the boundary.
pub fn collapse_onto_subgrid(
    tg: &TriangulatedGrid,
    x0: u32,
    y0: u32,
    z: u32,
) -> Result<(ContractionMap, Vertex)> {
    let k = tg.grid.width;
    if z < 2 || x0 < 2 || y0 < 2 || x0 + z > k || y0 + z > k {
        return Err(Error::input("subgrid must be strictly inside the triangulated grid"));
    }
    let at = tg.grid.at();
    let corner = at[&(x0 + z - 1, y0)];
    let inside = |(x, y): (u32, u32)| x >= x0 && x < x0 + z && y >= y0 && y < y0 + z;
    let rho: BTreeMap<Vertex, Vertex> = tg
        .grid
        .coords
        .iter()
        .map(|(&v, &c)| (v, if inside(c) { v } else { corner }))
        .collect();
    let image = ContractionMap::image_of(&tg.graph, &rho);
    Ok((ContractionMap { host: tg.graph.clone(), image, rho }, corner))
}
