//! Numerical calculus for generalized partial-slice monogenic functions.
//!
//! The crate works over the complexified Clifford algebra `C_{p+q}` with
//! anticommuting generators `e_1, ..., e_{p+q}`, `e_i^2 = -1`. A point of
//! `R^{p+q+1}` is split as `bx = x + y` with `x` a paravector variable in
//! `R^{p+1}` and `y` a 1-vector in `R^q`. On top of the algebra sit:
//!
//! * [`function_algebra`] — an exactly closed calculus on the family
//!   `polynomial(x) * exp(-a|x|^2)` (derivatives, Dirac operator, Laplacian,
//!   Fourier transform, heat semigroup, Hermite bases, `L^2` pairings);
//! * [`ck`] — the Cauchy-Kovalevskaya extension `exp(y D_x)` that produces
//!   generalized partial-slice monogenic functions from data on `R^{p+1}`,
//!   the exponential kernel `e(bx, xi)` in closed form, Fueter polynomials,
//!   and a finite-difference monogenicity check;
//! * [`quadrature`] — deterministic Gauss rules for `x`-space, frequency
//!   space, and the weighted measure on `R^{p+q+1}`;
//! * [`bargmann`] — the coherent-state transform `U_{p,q}`, the `psi_k`
//!   basis of its target Hilbert space, and isometry / orthogonality /
//!   position-momentum verification suites.
//!
//! All values are immutable and every operation is a pure function, so
//! everything can be shared freely across threads. Parallel reductions use
//! fixed chunk boundaries, making results bit-identical for any worker count.

pub mod bargmann;
pub mod ck;
pub mod clifford;
pub mod function_algebra;
pub mod quadrature;

pub use clifford::{Multivector, Signature, SplitPoint};
pub use function_algebra::{CliffordPolynomial, HermiteGaussian, MultiIndex};

use thiserror::Error;

/// Errors shared by the numerical modules.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// Operands live in different algebras.
    #[error("signature mismatch: C_{{{0}}} vs C_{{{1}}}")]
    SignatureMismatch(usize, usize),
    /// A paravector with zero norm has no inverse.
    #[error("zero paravector has no inverse")]
    ZeroParavector,
    /// Requested configuration is outside what the module supports.
    #[error("capability exceeded: {0}")]
    Capability(String),
    /// Operation needs a decaying Gaussian factor (`rate > 0`).
    #[error("function is not in the Gaussian-weighted family (rate = {0})")]
    NotInFamily(f64),
    /// Heat flow time must be positive.
    #[error("heat semigroup time {0} out of range")]
    HeatTime(f64),
    /// The Laplacian series hit its term cap before converging.
    #[error("series did not converge within {max_terms} terms (residual {residual:.3e})")]
    SeriesNotConverged { max_terms: usize, residual: f64 },
    /// Evaluation point is outside the documented quadrature validity region.
    #[error("point outside quadrature validity region: |y| = {0} > {1}")]
    RegionExceeded(f64, f64),
    /// Finite-difference step does not fit the geometry (needs `r > h`).
    #[error("geometry error: radial coordinate {r} must exceed step {h}")]
    Geometry { r: f64, h: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
