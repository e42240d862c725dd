use serde::{Deserialize, Serialize};

use super::config::PipelineConfig;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::logic::{check_fol, eval_gaifman, Formula, GaifmanSentence};
use crate::modification::{application_domain, apply_annotated, count_subsets, subsets, ModificationSet, Operation};
use crate::planarity::is_planar;

#[derive(Clone, Debug)]
pub enum Sentence {
    Fol(Formula),
    Gaifman(GaifmanSentence),
}

impl Sentence {
    pub fn holds(&self, g: &Graph, r_set: &VertexSet) -> Result<bool> {
        match self {
            Sentence::Fol(f) => check_fol(g, r_set, f),
            Sentence::Gaifman(phi) => eval_gaifman(g, r_set, phi),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub graph: Graph,
    pub k: usize,
    pub op: Operation,
    pub phi: Sentence,
    pub r_set: VertexSet,
}

impl Instance {
    /// R defaults to every vertex.
    pub fn new(graph: Graph, k: usize, op: Operation, phi: Sentence) -> Self {
        let r_set = graph.vertex_set();
        Instance { graph, k, op, phi, r_set }
    }

    pub fn with_annotation(mut self, r_set: VertexSet) -> Result<Self> {
        if let Some(v) = r_set.iter().find(|v| !self.graph.contains(**v)) {
            return Err(Error::UnknownVertex(*v));
        }
        self.r_set = r_set;
        Ok(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleAnswer {
    pub answer: bool,
    pub witness: Option<ModificationSet>,
}

/// Exhaustive search over S ⊆ ⊠⟨G, R⟩ with |S| as the size mode dictates.
pub fn solve_oracle(inst: &Instance, cfg: &PipelineConfig) -> Result<OracleAnswer> {
    let domain = application_domain(inst.op, &inst.graph, &inst.r_set);
    let sizes = cfg.size_mode.sizes(inst.k);
    let count = count_subsets(domain.len(), sizes.clone());
    if count > cfg.caps.enumeration {
        return Err(Error::cap(format!("{count} modification sets"), cfg.caps.enumeration, "--cap-enum"));
    }
    for set in subsets(&domain, sizes) {
        let s = ModificationSet::new(inst.op, set)?;
        let (h, r) = apply_annotated(&inst.graph, &inst.r_set, &s)?;
        if is_planar(&h) && inst.phi.holds(&h, &r)? {
            return Ok(OracleAnswer { answer: true, witness: Some(s) });
        }
    }
    Ok(OracleAnswer { answer: false, witness: None })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn top() -> Sentence {
        Sentence::Gaifman(GaifmanSentence::constant(true))
    }

    fn solve(g: Graph, k: usize, op: Operation) -> bool {
        solve_oracle(&Instance::new(g, k, op, top()), &PipelineConfig::default()).unwrap().answer
    }

    #[test]
    fn complete_graphs() {
        assert!(solve(Graph::complete(5), 1, Operation::Vr));
        assert!(!solve(Graph::complete(6), 1, Operation::Vr));
        assert!(solve(Graph::complete(5), 1, Operation::Er));
        assert!(solve(Graph::complete(5), 1, Operation::Ec));
        assert!(!solve(Graph::complete(5), 1, Operation::Ea));
        let two = Graph::complete(5).disjoint_union(&Graph::complete(5), 10);
        assert!(!solve(two.clone(), 1, Operation::Vr));
        assert!(solve(two, 2, Operation::Vr));
    }

    #[test]
    fn witnesses_and_formulas() {
        let inst = Instance::new(Graph::complete(5), 1, Operation::Vr, top());
        let ans = solve_oracle(&inst, &PipelineConfig::default()).unwrap();
        assert_eq!(ans.witness.unwrap().len(), 1);
        let f = crate::logic::parse_sentence("exists x. forall y. x = y | adj(x,y)").unwrap();
        let inst = Instance::new(Graph::path(4), 0, Operation::Ea, Sentence::Fol(f.clone()));
        assert!(!solve_oracle(&inst, &PipelineConfig::default()).unwrap().answer);
        let inst = Instance::new(Graph::path(4), 1, Operation::Ea, Sentence::Fol(f));
        assert!(solve_oracle(&inst, &PipelineConfig::default()).unwrap().answer);
        let exact = PipelineConfig { size_mode: crate::modification::SizeMode::Exact, ..PipelineConfig::default() };
        let inst = Instance::new(Graph::path(3), 1, Operation::Vr, top()).with_annotation(VertexSet::new()).unwrap();
        assert!(!solve_oracle(&inst, &exact).unwrap().answer);
        assert!(solve_oracle(&inst, &PipelineConfig::default()).unwrap().answer);
    }
}
