//! Exact computer algebra for Lie algebroids over a coordinate chart:
//! Koszul differentials, basic connections and curvature, representations up
//! to homotopy, and the connection-dependent Weil algebra.
//!
//! All structures are generic over a [`Scalar`]; the aliases below fix the
//! rationals, which is what every verification in this crate relies on.

pub mod algebroid;
pub mod error;
pub mod graded;
pub mod linalg;
pub mod report;
pub mod ruth;
pub mod scalar;
pub mod symcore;
pub mod weil;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Rat = num_rational::BigRational;
pub type Poly = symcore::Polynomial<Rat>;
