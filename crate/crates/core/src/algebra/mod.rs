//! Scalar arithmetic: rationals, finite fields, and Laurent series over F_q.

pub mod gf;
pub mod laurent;
pub mod laurent_matrix;
pub mod linalg;
pub mod rational;

pub use gf::{Elem, GaloisField};
pub use laurent::{LaurentScalar, SeriesRing, DEFAULT_PRECISION};
pub use laurent_matrix::LMatrix;
pub use rational::{format_rational, int, parse_rational, rat, Rational};
