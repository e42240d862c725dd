use serde::{Deserialize, Serialize};

use crate::modification::SizeMode;
use crate::treewidth::DEFAULT_CAP;

/// Enumeration limits. Every exhaustive search checks its cap before starting.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Candidate modification sets per enumeration.
    pub enumeration: u64,
    /// Vertices per component handed to the exact treewidth solver.
    pub treewidth: usize,
    /// Search nodes for wall and minor-model searches.
    pub search_nodes: u64,
    /// Extra vertices allowed on one subdivided wall edge.
    pub max_subdivision: usize,
    /// Compass size accepted by the characteristic enumeration.
    pub compass_vertices: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            enumeration: 200_000,
            treewidth: DEFAULT_CAP,
            search_nodes: 2_000_000,
            max_subdivision: 2,
            compass_vertices: 40,
        }
    }
}

/// Knobs for the reduction pipeline. The hatted values replace the
/// theoretical parameters, which are far beyond any enumerable instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineConfig {
    /// Treewidth slack of the wall search: walls of height q are sought
    /// only when the treewidth exceeds c1·q.
    pub c1: usize,
    /// Slack of the grid-minor step bounding the area branch.
    pub c2: usize,
    pub rho_hat: usize,
    pub w_hat: usize,
    pub q_hat: usize,
    /// Overrides d; `None` keeps the formula.
    pub d_hat: Option<usize>,
    /// Walls per equivalence class needed before find_vertex commits.
    pub bucket: usize,
    pub caps: Caps,
    pub size_mode: SizeMode,
    /// Verify every reduction step against the oracle. Off is unsound.
    pub cross_check: bool,
    /// Record wall-clock time per trace step.
    pub timings: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            c1: 9,
            c2: 9,
            rho_hat: 1,
            w_hat: 2,
            q_hat: 3,
            d_hat: None,
            bucket: 2,
            caps: Caps::default(),
            size_mode: SizeMode::AtMost,
            cross_check: true,
            timings: false,
        }
    }
}
