//! Computations around mirror symmetry for the two-torus: truncated
//! Novikov-field arithmetic, Floer products of straight branes, theta
//! functions on the Tate curve, K-theory of coherent sheaves and the
//! Lagrangian cobordism group.

pub mod cli;
pub mod cobord;
pub mod error;
pub mod expr;
pub mod floer;
pub mod json;
pub mod matrix;
pub mod mirror;
pub mod novikov;
pub mod rat;
pub mod sheafk;
pub mod tate;
pub mod torus;

pub use error::{Error, Result};
pub use novikov::NovikovSeries;
pub use rat::Rational;
