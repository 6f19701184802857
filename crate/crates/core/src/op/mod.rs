//! Truncated operator scaffolding shared by all models.

mod model;
mod operator;
mod space;
mod state;
mod symmetry;
mod word;

pub use model::{evaluate_word, FockModel, MatrixModel, SparseVector};
pub use operator::Operator;
pub use space::TruncatedSpace;
pub use state::{basis_state, mixture, vector_state, StateFunctional, StateKind};
pub use symmetry::{check_symmetry, CheckOptions, FamilyKind, SymmetryFamily, SymmetryReport, Witness};
pub use word::{Letter, Word};
