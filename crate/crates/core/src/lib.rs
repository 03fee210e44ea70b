//! Exact arithmetic for subalgebras of K[x] of finite codimension.
//!
//! A subalgebra `A ⊆ K[x]` with conductor ideal `x^m K[x]` (so `x^m K[x] ⊆ A`
//! but `x^{m-1} ∉ A`) is determined by its image `Ā = A / x^m K[x]` inside the
//! truncated polynomial algebra `F = K[x]/(x^m)`.  The degrees of the elements
//! of `Ā` form a semigroup-like subset `Γ ⊆ {2, …, m-2}`, and `Ā` has a unique
//! canonical basis `{1, f_γ}` whose coefficient table pins the algebra down
//! exactly.  This crate computes, over ℚ or 𝔽_p with exact arithmetic:
//!
//! * the classifying combinatorics: all admissible `Γ` for a given `m`,
//!   indecomposable elements, relation vectors, conductor-ideal generators
//!   ([`semigroup`]);
//! * canonical bases, structure constants, and generator/relation
//!   presentations of `Ā` and of `A` itself ([`subalgebra`]);
//! * automorphism groups (the full torus, or a cyclic group of computable
//!   order) and isomorphism tests via torus-orbit solvability ([`autiso`]);
//! * realized automorphism-order tables over each field ([`semigroup`],
//!   [`autiso`]);
//! * defining equations of the affine variety whose points are the algebras
//!   with a fixed `(m, Γ)`, as exact multivariate polynomials in the
//!   canonical coefficients ([`variety`]).
//!
//! Scalars live in [`field`]; univariate and truncated polynomials in
//! [`truncpoly`]; symbolic multivariate polynomials in [`sympoly`].

pub mod autiso;
pub mod error;
pub mod field;
pub(crate) mod matrix;
pub mod semigroup;
pub mod subalgebra;
pub mod sympoly;
pub mod truncpoly;
pub mod variety;

pub use error::{Error, Result};
pub use field::{FieldScalar, FieldSpec};
