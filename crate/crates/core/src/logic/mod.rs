//! First-order formulas over annotated graphs, brute-force model checking,
//! r-local evaluation and Gaifman sentences.

mod eval;
mod formula;
mod gaifman;
pub mod library;
mod parser;

pub use eval::{check_fol, check_global, check_local, eval_with, verify_locality, Structure};
pub use formula::{
    adj, and_all, distance_atom, distance_formula, eq, exists, forall, fresh_name, in_r, or_all, Formula,
};
pub use gaifman::{
    basic_witness, eval_gaifman, eval_gaifman_witness, local_candidates, parse_combination, scattered_subset,
    BasicJson, BasicSentence, Comb, GaifmanEval, GaifmanJson, GaifmanSentence,
};
pub use parser::{parse_formula, parse_sentence};
