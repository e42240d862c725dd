//! One line per acceptance criterion; exits non-zero if any criterion fails.

use planmod::suites::{self, CheckReport};

const SEED: u64 = 20_261_015;

type Criterion = (&'static str, Box<dyn Fn() -> Vec<CheckReport>>);

fn report(id: usize, title: &str, reps: &[CheckReport]) -> bool {
    let ok = reps.iter().all(CheckReport::ok);
    let detail: Vec<String> = reps.iter().map(CheckReport::summary).collect();
    println!("criterion {id:>2} [{}] {title}: {}", if ok { "PASS" } else { "FAIL" }, detail.join(" | "));
    for r in reps {
        for f in &r.failures {
            println!("    {}: {f}", r.name);
        }
    }
    ok
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("oracle correctness", Box::new(|| vec![suites::oracle_examples()])),
        ("gaifman semantics", Box::new(|| vec![suites::gaifman_semantics(SEED, 200)])),
        ("locality audit", Box::new(|| vec![suites::locality(SEED, 300)])),
        ("gluing", Box::new(|| vec![suites::gluing(SEED, 100)])),
        ("wall combinatorics", Box::new(|| vec![suites::wall_combinatorics()])),
        ("treewidth", Box::new(|| vec![suites::treewidth(SEED, 100)])),
        ("signature oracle equivalence", Box::new(|| vec![suites::sig_oracle(SEED, 24)])),
        ("parameter formulas", Box::new(|| vec![suites::parameters()])),
        ("pipeline soundness", Box::new(|| vec![suites::pipeline_vs_oracle(SEED, 500)])),
        ("replacement", Box::new(|| vec![suites::replacement()])),
    ];
    let mut failed = Vec::new();
    for (i, (title, run)) in criteria.iter().enumerate() {
        if !report(i + 1, title, &run()) {
            failed.push(i + 1);
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
