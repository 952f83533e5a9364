//! Free nilpotent groups, their palindromic automorphisms, and Fox calculus
//! modulo `[D,D] + D^3`.

pub mod autos;
pub mod error;
pub mod foxring;
pub mod lattice;
pub mod nilpotent;
pub mod verify;
pub mod words;

pub use autos::{Endo, GeneratorSymbol};
pub use error::{Error, Result};
pub use foxring::{bglm_condition, check_fox_table, embed, fox_derivative, RingElemModR};
pub use nilpotent::{HallBasis, NilElement, NilpotentGroup};
pub use words::{Letter, Word};
