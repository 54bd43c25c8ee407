//! Exact arithmetic: Gaussian integers and rationals, polynomials in τ and
//! 1/π, dense matrices with exact determinants.

pub mod matrix;
pub mod modular;
pub mod poly;
pub mod precision;
pub mod ring;
pub mod symbolic;

pub use matrix::Matrix;
pub use poly::Poly;
pub use ring::{gauss_rat, rat, GaussInt, GaussRat};
pub use symbolic::{sym_det, SymbolicValue};
