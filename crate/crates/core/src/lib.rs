//! Exact homological algebra over graded Artinian quotients of `k[x_1..x_n]`
//! with `k = GF(p)`: minimal and complete resolutions, two-sided Betti growth,
//! Eisenbud operators over complete intersections and the reduction of
//! complexity by extensions.
//!
//! Everything is generic over [`field::PrimeField`]; the aliases below fix
//! the default prime 32003.

pub mod algebra;
pub mod cli;
pub mod complex;
pub mod error;
pub mod field;
pub mod fixtures;
pub mod free;
pub mod growth;
pub mod linalg;
pub mod module;
pub mod operators;
pub mod reduction;

pub use error::{Error, Result};
pub use field::{Field, Fp, PrimeField};

/// `GF(32003)`.
pub type Gf32003 = field::Fp<32003>;
/// `GF(65521)`.
pub type Gf65521 = field::Fp<65521>;
/// Exact rationals, used for series fitting.
pub type Rational = num_rational::BigRational;

pub type Algebra = algebra::GradedAlgebra<Gf32003>;
pub type Poly = algebra::Polynomial<Gf32003>;
pub type Module = module::GradedModule<Gf32003>;
pub type Complex = complex::FreeComplex<Gf32003>;
pub type Operators = operators::OperatorSet<Gf32003>;
pub type DenseMatrix = linalg::Matrix<Gf32003>;
