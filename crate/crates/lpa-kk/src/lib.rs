//! Bivariant K-theory invariants of Leavitt path algebras of finite-vertex
//! graphs.
//!
//! The crate models directed multigraphs, computes the associated group
//! invariants `KH_0` and `KH^1` via Smith normal form, normalizes them into
//! a structure form that classifies the algebra up to kk-equivalence, and
//! evaluates the exact sequences that compute kk-groups with coefficients.
//! A small path-algebra engine works with concrete Cohn and Leavitt
//! elements in normal form.
//!
//! All computations assume the standing conventions: finitely many
//! vertices, arbitrary (possibly infinite) edge sets flagged per vertex,
//! and trivially graded coefficient algebras.

pub mod algebra;
pub mod checks;
pub mod cli;
pub mod fgab;
pub mod graph;
pub mod invariants;
pub mod matrix;
pub mod random;
pub mod sequences;

pub use fgab::FgAbGroup;
pub use graph::{Graph, GraphSpec};
pub use invariants::{invariants, kk_equivalent, structure_form, KkInvariants, StructureForm};
pub use matrix::{snf, IntMatrix, SnfDecomposition};
