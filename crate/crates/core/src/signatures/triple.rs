use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::logic::{eval_gaifman, GaifmanSentence};
use crate::modification::{application_domain, apply_annotated, count_subsets, subsets, ModificationSet, Operation, SizeMode};
use crate::planarity::is_planar;

/// Is (G, R, k) a (φ,⊠)-triple? Returns the first witness S in
/// size-then-lexicographic order.
pub fn is_triple(
    g: &Graph,
    r_set: &VertexSet,
    k: usize,
    op: Operation,
    phi: &GaifmanSentence,
    size_mode: SizeMode,
    cap: u64,
) -> Result<Option<ModificationSet>> {
    let domain = application_domain(op, g, r_set);
    let count = count_subsets(domain.len(), size_mode.sizes(k));
    if count > cap {
        return Err(Error::cap(format!("{count} modification sets"), cap, "--cap-enum"));
    }
    for set in subsets(&domain, size_mode.sizes(k)) {
        let s = ModificationSet::new(op, set)?;
        let (h, r) = apply_annotated(g, r_set, &s)?;
        if is_planar(&h) && eval_gaifman(&h, &r, phi)? {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn top() -> GaifmanSentence {
        GaifmanSentence::constant(true)
    }

    #[test]
    fn complete_graphs() {
        let k5 = Graph::complete(5);
        let all = k5.vertex_set();
        let s = is_triple(&k5, &all, 1, Operation::Vr, &top(), SizeMode::AtMost, 1000).unwrap();
        assert_eq!(s.unwrap().len(), 1);
        assert!(is_triple(&k5, &VertexSet::new(), 1, Operation::Vr, &top(), SizeMode::AtMost, 1000).unwrap().is_none());
        assert!(is_triple(&k5, &all, 0, Operation::Vr, &top(), SizeMode::AtMost, 1000).unwrap().is_none());
        assert!(is_triple(&k5, &all, 1, Operation::Vr, &top(), SizeMode::AtMost, 2).is_err());
    }

    #[test]
    fn k_zero_is_planarity_and_truth() {
        let p = Graph::path(5);
        let all = p.vertex_set();
        let far = GaifmanSentence::basic(2, 1, "x = x", true).unwrap();
        assert!(is_triple(&p, &all, 0, Operation::Ea, &far, SizeMode::Exact, 10).unwrap().is_some());
        assert!(is_triple(&p, &[0, 1].into(), 0, Operation::Ea, &far, SizeMode::Exact, 10).unwrap().is_none());
    }
}
