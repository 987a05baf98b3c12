//! The constructive elementary theory of the category of sets, realised in
//! the category of finite sets.
//!
//! [`kernel`] holds the model-independent signature, [`finset`] the finite
//! set model and its universal constructions, [`relcalc`] the relation
//! calculus, [`logic`] the internal-language compiler and its semantic
//! oracle, and [`axioms`] the exhaustive checker.

pub mod axioms;
pub mod finset;
pub mod kernel;
pub mod logic;
pub mod relcalc;
pub mod report;

pub use finset::{FinMor, FinObj, FinSet};
pub use relcalc::{Relation, Subobject};
pub use report::{Report, Verdict, Witness};
