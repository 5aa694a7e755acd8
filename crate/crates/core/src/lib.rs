//! Exact workbench for sum-rank-metric codes: finite-field matrix algebra,
//! closed-form counts, the Cayley power graphs of sum-rank spaces, bound
//! evaluation, and inequality chains towards set-coloring Ramsey numbers.

pub mod bounds;
pub mod counting;
pub mod error;
pub mod gf;
pub mod graph;
pub mod mis;
pub mod ramsey;
pub mod space;
pub mod sweep;
pub mod verify;

pub use counting::Nat;
pub use error::{Error, Result};
pub use gf::{FieldElem, FieldSpec, Matrix};
pub use space::{SrkCode, SrkParams, SrkVector};
