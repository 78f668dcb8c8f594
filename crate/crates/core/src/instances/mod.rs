//! Concrete categories realized as subspace lattices with a degree function:
//! filtered vector spaces over finite fields ([`fil`]), O-lattices over
//! F_q((t)) ([`bun`]) and split φ-lattices ([`phi`]). [`compat`] compares HN
//! filtrations of tensor products and duals.

pub mod bun;
pub mod compat;
pub mod fil;
pub mod phi;

use crate::algebra::rational::Rational;
use crate::error::{Error, Result};
use crate::filtration::Filtration;
use crate::hn::{certify, hn_greedy, HnCertificate};
use crate::lattice::FiniteLattice;

/// Field sizes accepted by the instance front ends.
pub const SUPPORTED_Q: [u32; 3] = [2, 3, 4];
/// Largest dimension for a direct HN computation.
pub const MAX_HN_DIM: usize = 4;
/// Largest tensor-product dimension in compatibility checks.
pub const MAX_FIL_TENSOR_DIM: usize = 6;
pub const MAX_BUN_TENSOR_DIM: usize = 4;

pub fn check_q(q: u32) -> Result<()> {
    if SUPPORTED_Q.contains(&q) {
        Ok(())
    } else {
        Err(Error::InvalidField(format!("q={q}; supported values are 2, 3, 4")))
    }
}

pub fn check_dim(what: &str, n: usize, max: usize) -> Result<()> {
    if n <= max {
        Ok(())
    } else {
        Err(Error::SizeLimit { what: what.into(), count: n as u128, limit: max as u128 })
    }
}

/// An object's subobject lattice with its rank (dimension) and degree, and
/// the resulting HN filtration.
#[derive(Debug, Clone)]
pub struct InstanceHn {
    pub rank: Vec<Rational>,
    pub deg: Vec<Rational>,
    pub hn: Filtration,
}

impl InstanceHn {
    pub fn solve(l: &FiniteLattice, deg: Vec<Rational>) -> Result<Self> {
        let sd = l.subspaces().expect("instance lattices are subspace lattices");
        let rank: Vec<Rational> = (0..l.len()).map(|x| Rational::from_integer((sd.dim(x) as i64).into())).collect();
        let hn = hn_greedy(l, &rank, &deg)?;
        Ok(Self { rank, deg, hn })
    }

    pub fn certify(&self, l: &FiniteLattice, samples: usize, seed: u64) -> HnCertificate {
        certify(l, &self.rank, &self.deg, &self.hn, samples, seed)
    }

    /// Slope of the whole object.
    pub fn slope(&self, l: &FiniteLattice) -> Option<Rational> {
        crate::hn::interval_slope(&self.rank, &self.deg, l.bottom(), l.top())
    }
}

/// The subspace lattice of `F_q^n`, checking it matches `l` if one is given.
pub(crate) fn subspace_lattice(q: u32, n: usize, l: Option<&FiniteLattice>) -> Result<std::borrow::Cow<'_, FiniteLattice>> {
    match l {
        Some(l) => match l.subspaces() {
            Some(sd) if sd.field().order() == q && sd.ambient_dim() == n && !l.is_empty() => {
                Ok(std::borrow::Cow::Borrowed(l))
            }
            _ => Err(Error::DimensionMismatch(format!("expected the subspace lattice of F_{q}^{n}"))),
        },
        None => Ok(std::borrow::Cow::Owned(FiniteLattice::subspace(q, n)?)),
    }
}
