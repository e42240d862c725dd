use planmod::logic::library::fixed_sentences;
use planmod::modification::{apply_annotated, Operation};
use planmod::planarity::is_planar;
use planmod::solver::{solve_oracle, solve_pipeline, Instance, PipelineConfig, Sentence};
use planmod::{Graph, VertexSet};
use proptest::prelude::*;

const OPS: [Operation; 4] = [Operation::Vr, Operation::Er, Operation::Ec, Operation::Ea];

fn small_graph() -> impl Strategy<Value = Graph> {
    (2u32..=8).prop_flat_map(|n| {
        proptest::collection::vec(proptest::bool::weighted(0.55), (n * (n - 1) / 2) as usize).prop_map(move |bits| {
            let mut g = Graph::with_vertices(0..n);
            let mut i = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[i] {
                        g.add_edge(u, v);
                    }
                    i += 1;
                }
            }
            g
        })
    })
}

fn instance() -> impl Strategy<Value = Instance> {
    (small_graph(), 0usize..4, 0usize..=2, 0usize..5, any::<u64>()).prop_map(|(g, op, k, phi, mask)| {
        let r: VertexSet = g.vertices().filter(|&v| mask >> v & 1 == 1 || mask % 3 == 0).collect();
        let phi = fixed_sentences()[phi].1.clone();
        Instance::new(g, k, OPS[op], Sentence::Gaifman(phi)).with_annotation(r).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn oracle_witnesses_are_genuine(inst in instance()) {
        let ans = solve_oracle(&inst, &PipelineConfig::default()).unwrap();
        if let Some(s) = &ans.witness {
            prop_assert!(s.len() <= inst.k);
            let (h, r) = apply_annotated(&inst.graph, &inst.r_set, s).unwrap();
            prop_assert!(is_planar(&h));
            prop_assert!(inst.phi.holds(&h, &r).unwrap());
        }
        prop_assert_eq!(ans.answer, ans.witness.is_some());
    }

    #[test]
    fn more_budget_never_hurts(inst in instance()) {
        let cfg = PipelineConfig::default();
        let here = solve_oracle(&inst, &cfg).unwrap().answer;
        let more = Instance { k: inst.k + 1, ..inst.clone() };
        prop_assert!(!here || solve_oracle(&more, &cfg).unwrap().answer);
    }

    #[test]
    fn pipeline_matches_oracle(inst in instance()) {
        let cfg = PipelineConfig::default();
        let run = solve_pipeline(&inst, &cfg).map_err(|f| TestCaseError::fail(f.error.to_string()))?;
        prop_assert_eq!(run.answer, solve_oracle(&inst, &cfg).unwrap().answer);
        prop_assert_eq!(run.oracle_agrees, Some(true));
    }
}
