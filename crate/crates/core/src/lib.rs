//! Exact and p-adic computations around Gross-Stark units of real quadratic fields.

pub mod cli;
pub mod cones;
pub mod error;
pub mod gs;
pub mod padic;
pub mod quadfield;
pub mod scalar;
pub mod zeta;

pub use error::{Error, Result};
pub use quadfield::{FieldElem, Ideal, QuadField};

/// Exact rationals.
pub type Rational = num_rational::BigRational;

/// Exact `Q(zeta_n)`.
pub type CyclotomicQ = zeta::Cyclotomic<Rational>;
/// `F(zeta_n)` over the quadratic field.
pub type CyclotomicF = zeta::Cyclotomic<FieldElem>;
