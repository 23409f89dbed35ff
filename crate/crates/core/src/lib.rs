//! # abel-air
//!
//! Classification and closed-form solution of Abel equations of the
//! inverse-Riccati rational form
//!
//! ```text
//!           a3 y^3 + a2 y^2 + a1 y + a0
//! y' = ----------------------------------------------
//!      (s0 + s1 x + s2 x^2) y + r0 + r1 x + r2 x^2
//! ```
//!
//! The pipeline is:
//!
//! - [`classify::classify`] reduces an equation with Möbius changes of `x`
//!   and `y` to one of six canonical representatives ([`CanonicalClass`]),
//!   recording every substitution in a [`TransformChain`].
//! - [`solve::solve_canonical`] builds an implicit solution (a level function
//!   `F(x, y)` constant along solution curves) from Gauss, Kummer, Bessel or
//!   Airy functions, evaluated by [`specfun`].
//! - [`solve::pull_back`] carries that level function back through the chain
//!   and [`solve::residual_verify`] checks it against an adaptive Runge–Kutta
//!   integration of the original equation.
//!
//! All arithmetic is complex double precision ([`C64`]).

pub mod classify;
pub mod equation;
pub mod error;
pub mod parse;
pub mod poly;
pub mod solve;
pub mod specfun;

pub use classify::{classify, CanonicalClass, Classification, RootStructure};
pub use equation::{Mobius, RationalAir, TransformChain, TransformStep};
pub use error::{AbelError, Result};
pub use solve::{ImplicitSolution, Trajectory};

/// Complex scalar used throughout the crate.
pub type C64 = num_complex::Complex64;

/// Relative tolerance for exact-zero branch decisions on normalized data.
pub const ZERO_TOL: f64 = 1e-10;

/// Shorthand for a complex number.
#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Shorthand for a real-valued complex number.
#[inline]
pub fn re(v: f64) -> C64 {
    C64::new(v, 0.0)
}
