//! Graded bundles, algebroid forms with values in them, graded-commutative
//! algebras, and complexes.
//!
//! Sign conventions: a form `θ^I ⊗ s` has degree `|I| + deg s`; odd
//! generators are reordered with the sign of the sorting permutation
//! ([`mask::product_sign`]); a map `T` of degree `|T|` satisfies
//! `T(ω ∧ x) = (-1)^{|ω||T|} ω ∧ T(x)`.

mod complex;
mod form;
mod gc;
pub mod mask;

pub use complex::{
    build_contraction, cohomology_ranks, complex_check, poly_adjugate, poly_det, ChainComplex, ContractionData,
};
pub use form::{
    exterior, parity_sign, wedge_scalar, wedge_scalar_right, Bundle, FormElement, FormMap, GradedBundle,
};
pub use gc::{derivation_cohomology, Derivation, GcAlgebra, GcElement, GcGenerator, GcMonomial, GenRef};
pub use mask::Mask;
