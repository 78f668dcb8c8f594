//! Harder-Narasimhan filtrations on finite modular lattices, computed with
//! exact rational arithmetic.
//!
//! The crate is organised bottom-up:
//!
//! * [`algebra`]: rationals, finite fields, Laurent series over F_q
//! * [`lattice`]: finite lattices, rank and degree functions, chains, `Gr_C`
//! * [`filtration`]: the space of R-filtrations, its pairing and metric
//! * [`hn`]: greedy and variational HN solvers, certificates, projections
//! * [`instances`]: filtered vector spaces, O-lattices and φ-lattices

pub mod algebra;
pub mod error;
pub mod filtration;
pub mod hn;
pub mod instances;
pub mod io;
pub mod lattice;
pub mod random;
pub mod rng;

pub use algebra::rational::Rational;
pub use error::{Error, Result};
pub use filtration::Filtration;
pub use lattice::FiniteLattice;
