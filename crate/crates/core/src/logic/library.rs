//! Shipped local formulas with their declared radii, and the fixed Gaifman
//! sentences used by the test batteries.

use super::formula::Formula;
use super::gaifman::{parse_combination, BasicSentence, GaifmanSentence};
use super::parser::parse_formula;

#[derive(Clone, Debug)]
pub struct LocalFormula {
    pub name: &'static str,
    pub text: &'static str,
    pub r: usize,
}

impl LocalFormula {
    pub fn psi(&self) -> Formula {
        parse_formula(self.text).expect("library formulas parse")
    }
}

pub const LOCAL_FORMULAS: &[LocalFormula] = &[
    LocalFormula { name: "any", text: "x = x", r: 1 },
    LocalFormula { name: "has-neighbour", text: "exists y. adj(x,y)", r: 1 },
    LocalFormula { name: "isolated", text: "~exists y. adj(x,y)", r: 1 },
    LocalFormula { name: "degree-two", text: "deg(x) = 2", r: 1 },
    LocalFormula { name: "degree-at-least-three", text: "deg(x) >= 3", r: 1 },
    LocalFormula { name: "in-triangle", text: "exists y. exists z. adj(x,y) & adj(y,z) & adj(x,z)", r: 1 },
    LocalFormula { name: "annotated-neighbour", text: "exists y. adj(x,y) & y in R", r: 1 },
    LocalFormula { name: "annotated", text: "x in R", r: 1 },
    LocalFormula { name: "two-step", text: "exists y. exists z. adj(x,y) & adj(y,z) & ~(x = z)", r: 2 },
    LocalFormula { name: "simplicial", text: "forall y. forall z. adj(x,y) & adj(x,z) & ~(y = z) -> adj(y,z)", r: 1 },
    LocalFormula { name: "all-neighbours-annotated", text: "forall y. adj(x,y) -> y in R", r: 1 },
    LocalFormula { name: "near-annotated", text: "exists y. dist(x,y) <= 2 & y in R & ~(x = y)", r: 2 },
];

pub fn local_formula(name: &str) -> Option<&'static LocalFormula> {
    LOCAL_FORMULAS.iter().find(|f| f.name == name)
}

fn basic(ell: usize, name: &str) -> BasicSentence {
    let f = local_formula(name).expect("known formula");
    BasicSentence::new(ell, f.r, f.psi()).expect("valid basic sentence")
}

/// Five fixed annotated Gaifman sentences.
pub fn fixed_sentences() -> Vec<(&'static str, GaifmanSentence)> {
    let build = |basics: Vec<BasicSentence>, comb: &str| {
        GaifmanSentence::new(basics, parse_combination(comb).expect("parses"), true).expect("valid")
    };
    vec![
        ("some-annotated-non-isolated", build(vec![basic(1, "has-neighbour")], "1")),
        ("two-far-annotated", build(vec![basic(2, "any")], "1")),
        ("no-annotated-triangle", build(vec![basic(1, "in-triangle")], "~1")),
        (
            "path-vertex-without-far-isolated-pair",
            build(vec![basic(1, "degree-two"), basic(2, "isolated")], "1 & ~2"),
        ),
        (
            "two-step-or-annotated-neighbours",
            build(vec![basic(1, "two-step"), basic(2, "annotated-neighbour")], "1 | 2"),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn library_is_well_formed() {
        for f in LOCAL_FORMULAS {
            assert_eq!(f.psi().free_vars().len(), 1, "{}", f.name);
        }
        assert_eq!(fixed_sentences().len(), 5);
        assert!(local_formula("missing").is_none());
    }
}
