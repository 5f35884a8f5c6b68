//! Exact polynomial arithmetic over the chart coordinates.

mod parse;
mod poly;

pub use parse::parse_poly;
pub use poly::{vars, Monomial, Polynomial, Vars};
