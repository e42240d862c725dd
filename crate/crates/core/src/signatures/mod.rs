//! Signatures and characteristics of walls, the parameters that size them,
//! and the triple check they are meant to preserve.

pub mod oracle;
mod params;
mod sig;
mod triple;

pub use params::{compute_parameters, AreaParameters, ParamMode, Parameters, Quantity, Tower};
pub use sig::{
    bounded_compass, char_of_compass, compute_char, compute_sig, modified_levels, walls_equivalent, CharEntry,
    Characteristic, Level, SigEntry, Signature,
};
pub use triple::is_triple;
