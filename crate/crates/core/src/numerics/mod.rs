//! Arbitrary-precision scalars and the special functions the rest of the
//! crate evaluates: modified Bessel functions of order 1 and 3/2, complex
//! `cosh`, and the contour kernel `L_k(n, y)`.
//!
//! Reals are MPFR floats (`rug::Float`). Every operation takes a
//! [`PrecisionContext`] and returns values rounded to its precision; guard
//! bits used internally are dropped on return.

mod bessel;
mod complex;
mod context;

pub use bessel::{bessel_i, bessel_i_series, kernel_l, BesselOrder};
pub use complex::{complex_cosh, Complex};
pub use context::{auto_bits, make_context, PrecisionContext, Real};
