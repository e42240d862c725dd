//! Generated corpora and the check batteries run by the acceptance tests and
//! the `check` command.

mod checks;
pub mod gen;

pub use checks::*;
