//! Random fewnomial systems with Gaussian coefficients.
//!
//! The crate samples systems `f_i(x) = sum_a sigma(a) xi_{i,a} x^a` over a
//! shared support, counts their nondegenerate zeros in the positive orthant
//! with certification, and evaluates the expected number of such zeros as
//! an integral of the sphere-normalized monomial map.
//!
//! Module map:
//! - [`systems`]: supports, variance systems, sampled systems, evaluation.
//! - [`univariate`]: certified positive-root counting for sparse polynomials.
//! - [`multivariate`]: Krawczyk subdivision counting for `n <= 3`.
//! - [`density`]: the normalized monomial map, its Jacobian and integrals.
//! - [`special_systems`]: systems `Lambda x^alpha = f(x)` with `f` a root of a
//!   sum of squared monomials, and the Gaussian cone probability.
//! - [`bounds`]: closed-form upper bounds.

pub mod bounds;
pub mod density;
mod error;
pub mod interval;
pub mod linalg;
pub mod multivariate;
pub mod quadrature;
pub mod rng;
pub mod special_systems;
pub mod stats;
pub mod systems;
pub mod univariate;

pub use error::{Error, Result};
