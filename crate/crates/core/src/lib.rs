//! Exact q-series engine for mock theta functions.
//!
//! - [`qlaurent`]: truncated Laurent series and q-Pochhammer products
//! - [`theta`]: the theta function `j(x; q^M)` in product and sum form
//! - [`appell`]: the Appell-Lerch sum `m(x, q, z)` and its functional equations
//! - [`hypergeo`]: unilateral q-hypergeometric sums, exact and numeric
//! - [`expr`]: expression trees combining the above, with genericity scans
//! - [`hecke`]: Hecke-type double sums `f_{a,b,c}`
//! - [`mocklib`]: the identity registry and verification harness
//! - [`cyclo`]: exact arithmetic in cyclotomic fields
//! - [`radial`]: arbitrary-precision radial limits toward roots of unity

pub mod appell;
pub mod cyclo;
pub mod error;
pub mod expr;
pub mod hecke;
pub mod hypergeo;
pub mod mocklib;
pub mod numeric;
pub mod qlaurent;
pub mod radial;
pub mod scalar;
pub mod theta;

pub use error::{Error, Result};
pub use qlaurent::{LaurentSeries, Monomial, Rational, Sign};
pub use scalar::Coefficient;

/// Exact series over the rationals.
pub type QSeries = LaurentSeries<Rational>;
/// Floating series, for quick numeric experiments.
pub type F64Series = LaurentSeries<f64>;
