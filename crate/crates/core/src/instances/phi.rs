//! Split φ-lattices: `V ⊗ K` with Frobenius `Id ⊗ φ`, `φ(x(t)) = x(t^q)`,
//! and an O-lattice `L`. The degree of a k-subspace `W` is
//! `ν(M, φ(M))` for `M = L ∩ W_K`.

use num_traits::Zero;
use rayon::prelude::*;

use super::bun::{rel_position, sub_coords, OLattice};
use super::{subspace_lattice, InstanceHn};
use crate::algebra::laurent_matrix as lm;
use crate::algebra::linalg::Vector;
use crate::algebra::rational::{int, Rational};
use crate::error::Result;
use crate::lattice::FiniteLattice;

#[derive(Debug, Clone)]
pub struct PhiLattice {
    pub lattice: OLattice,
}

impl PhiLattice {
    pub fn new(lattice: OLattice) -> Self {
        Self { lattice }
    }

    pub fn n(&self) -> usize {
        self.lattice.n()
    }

    pub fn q(&self) -> u32 {
        self.lattice.q()
    }
}

/// `φ(L)`: Frobenius applied to every basis entry.
pub fn phi_image(l: &PhiLattice) -> Result<OLattice> {
    let ring = l.lattice.ring();
    OLattice::new(ring.clone(), lm::frobenius(ring, l.lattice.basis()))
}

pub fn phi_deg(l: &PhiLattice, w: &[Vector]) -> Result<Rational> {
    if w.is_empty() {
        return Ok(Rational::zero());
    }
    let ring = l.lattice.ring();
    let m = sub_coords(&l.lattice, w)?;
    // W is defined over k, so φ acts on W-coordinates entrywise
    let rel = lm::mul(ring, &lm::inverse(ring, &m)?, &lm::frobenius(ring, &m))?;
    let vals = lm::snf_valuations(ring, &rel, rel.rows())?;
    Ok(int(-vals.iter().sum::<i64>()))
}

/// `ν(L, φ(L))` for the whole space, via [`rel_position`].
pub fn phi_total_deg(l: &PhiLattice) -> Result<Rational> {
    Ok(int(rel_position(&l.lattice, &phi_image(l)?)?.nu))
}

pub fn phi_degree_table(l: &PhiLattice, lat: &FiniteLattice) -> Result<Vec<Rational>> {
    let lat = subspace_lattice(l.q(), l.n(), Some(lat))?;
    let sd = lat.subspaces().unwrap();
    (0..lat.len()).into_par_iter().map(|e| phi_deg(l, sd.basis(e))).collect()
}

pub fn phi_hn_on(l: &PhiLattice, lat: &FiniteLattice) -> Result<InstanceHn> {
    let deg = phi_degree_table(l, lat)?;
    InstanceHn::solve(lat, deg)
}

pub fn phi_hn(l: &PhiLattice) -> Result<(FiniteLattice, InstanceHn)> {
    let lat = FiniteLattice::subspace(l.q(), l.n())?;
    let hn = phi_hn_on(l, &lat)?;
    Ok((lat, hn))
}

pub fn phi_tensor(a: &PhiLattice, b: &PhiLattice) -> Result<PhiLattice> {
    Ok(PhiLattice::new(super::bun::bun_tensor(&a.lattice, &b.lattice)?))
}

pub fn phi_dual(a: &PhiLattice) -> Result<PhiLattice> {
    Ok(PhiLattice::new(super::bun::bun_dual(&a.lattice)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::laurent::{SeriesRing, DEFAULT_PRECISION};
    use crate::filtration::Filtration;

    #[test]
    fn rank_one_degree() {
        for q in [2u32, 3, 4] {
            let ring = SeriesRing::with_order(q, DEFAULT_PRECISION).unwrap();
            for a in -3..=3i64 {
                let l = PhiLattice::new(OLattice::diagonal(ring.clone(), &[a]).unwrap());
                let expect = int(-(q as i64 - 1) * a);
                assert_eq!(phi_deg(&l, &[vec![1]]).unwrap(), expect);
                assert_eq!(phi_total_deg(&l).unwrap(), expect);
            }
        }
    }

    #[test]
    fn standard_lattice_is_fixed() {
        let ring = SeriesRing::with_order(3, DEFAULT_PRECISION).unwrap();
        let l = PhiLattice::new(OLattice::standard(ring, 2).unwrap());
        assert!(phi_image(&l).unwrap().same_lattice(&l.lattice).unwrap());
        let (lat, hn) = phi_hn(&l).unwrap();
        assert_eq!(hn.hn, Filtration::constant(&lat, int(0)));
    }
}
