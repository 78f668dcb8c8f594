//! Harder-Narasimhan filtrations: semistability, two independent solvers,
//! certificates, and convex projection onto sublattices.

mod certificate;
mod greedy;
mod oracle;
mod pava;
mod projection;
mod semistable;

pub use certificate::{certify, DominanceSample, ExactVariant, GrEntry, HnCertificate, DEFAULT_SAMPLES};
pub use greedy::{hn_greedy, slope_profile};
pub use oracle::{hn_oracle, hn_oracle_report, OracleReport};
pub use pava::{chamber_objective, pava};
pub use projection::convex_project;
pub use semistable::{interval_slope, is_semistable, max_destabilizer, max_destabilizer_in, Semistability, Witness};

use crate::algebra::rational::Rational;
use crate::filtration::{norm2, Filtration};

/// `‖f‖² − 2⟨⋆, f⟩`, the function the HN filtration minimizes.
pub fn objective(rank: &[Rational], deg: &[Rational], f: &Filtration) -> Rational {
    norm2(rank, f) - Rational::from_integer(2.into()) * f.degree_ext(deg)
}
