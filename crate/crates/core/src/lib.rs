//! Exact critical points of a polynomial on a smooth equidimensional
//! variety, as rational parametrizations, with polar-degree bounds.

pub mod bounds;
pub mod critpoints;
pub mod error;
pub mod field;
pub mod geores;
pub mod groebner;
pub mod linalg;
pub mod matrix;
pub mod parse;
pub mod polar;
pub mod problem;
pub mod poly;
pub mod univariate;

pub use error::{Error, Result};
pub use field::{Field, FieldSpec, PrimeField, Rationals};
pub use poly::{Monomial, MonomialOrder, MultiPoly, Ring};
