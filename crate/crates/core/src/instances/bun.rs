//! O-lattices in `K^n`, `K = F_q((t))`, `O = F_q[[t]]`. A lattice is stored
//! by a basis matrix whose columns span it; its gauge norm gives the degree
//! `deg(W) = ν(W⊗O, L ∩ W_K)` on k-subspaces `W`.

use num_traits::Zero;
use rayon::prelude::*;

use super::{subspace_lattice, InstanceHn};
use crate::algebra::gf::Elem;
use crate::algebra::laurent::{LaurentScalar, SeriesRing};
use crate::algebra::laurent_matrix::{self as lm, LMatrix};
use crate::algebra::linalg::{self, Vector};
use crate::algebra::rational::{int, Rational};
use crate::error::{Error, Result};
use crate::filtration::Filtration;
use crate::lattice::FiniteLattice;
use crate::rng::SplitMix64;

#[derive(Debug, Clone)]
pub struct OLattice {
    ring: SeriesRing,
    basis: LMatrix,
}

/// Elementary-divisor valuations of one lattice relative to another, and
/// `nu = −Σ vector` (so `log|t| = −1`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelPosition {
    pub vector: Vec<i64>,
    pub nu: i64,
}

impl OLattice {
    /// Checks that `basis` is square and invertible over K.
    pub fn new(ring: SeriesRing, basis: LMatrix) -> Result<Self> {
        let n = basis.rows();
        if n == 0 || basis.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "lattice basis must be square and nonempty, got {}x{}",
                n,
                basis.cols()
            )));
        }
        lm::snf_valuations(&ring, &basis, n)?;
        Ok(Self { ring, basis })
    }

    /// [`OLattice::new`] for user input: additionally requires the working
    /// precision to exceed `n · (valuation spread) + 8`.
    pub fn load(ring: SeriesRing, basis: LMatrix) -> Result<Self> {
        if let Some((lo, hi)) = basis.valuation_spread() {
            let need = basis.rows() as i64 * (hi - lo) + 8;
            if ring.precision() as i64 <= need {
                return Err(Error::PrecisionExhausted(format!(
                    "precision {} must exceed {need} for this basis",
                    ring.precision()
                )));
            }
        }
        Self::new(ring, basis)
    }

    /// `V ⊗ O`, the lattice of the identity basis.
    pub fn standard(ring: SeriesRing, n: usize) -> Result<Self> {
        Self::new(ring, LMatrix::identity(n))
    }

    /// `diag(t^{v_1}, …, t^{v_n}) · O^n`.
    pub fn diagonal(ring: SeriesRing, vals: &[i64]) -> Result<Self> {
        Self::new(ring, LMatrix::diagonal(vals.iter().map(|&v| LaurentScalar::monomial(1, v)).collect()))
    }

    pub fn n(&self) -> usize {
        self.basis.rows()
    }

    pub fn q(&self) -> u32 {
        self.ring.q()
    }

    pub fn ring(&self) -> &SeriesRing {
        &self.ring
    }

    pub fn basis(&self) -> &LMatrix {
        &self.basis
    }

    /// Same O-module: zero relative position.
    pub fn same_lattice(&self, other: &OLattice) -> Result<bool> {
        Ok(rel_position(self, other)?.vector.iter().all(|&v| v == 0))
    }

    /// `L ⊆ L'`: every basis vector of `L` has O-coordinates in `L'`.
    pub fn is_sublattice_of(&self, other: &OLattice) -> Result<bool> {
        let coords = lm::mul(&self.ring, &lm::inverse(&self.ring, &other.basis)?, &self.basis)?;
        let mut all = true;
        for i in 0..coords.rows() {
            for j in 0..coords.cols() {
                match coords.get(i, j) {
                    LaurentScalar::Zero { known_to: Some(r) } if *r < 0 => {
                        return Err(Error::PrecisionExhausted("entry known only to negative order".into()))
                    }
                    x => all &= x.valuation().is_none_or(|v| v >= 0),
                }
            }
        }
        Ok(all)
    }
}

fn same_ring(a: &OLattice, b: &OLattice) -> Result<()> {
    if a.q() != b.q() || a.n() != b.n() {
        return Err(Error::DimensionMismatch(format!(
            "lattices over F_{}^{} and F_{}^{}",
            a.q(),
            a.n(),
            b.q(),
            b.n()
        )));
    }
    Ok(())
}

/// Relative position of `l2` with respect to `l1`: the Smith valuations of
/// `B₁⁻¹ B₂`.
pub fn rel_position(l1: &OLattice, l2: &OLattice) -> Result<RelPosition> {
    same_ring(l1, l2)?;
    let r = &l1.ring;
    let m = lm::mul(r, &lm::inverse(r, &l1.basis)?, &l2.basis)?;
    rel_position_of(r, &m)
}

fn rel_position_of(ring: &SeriesRing, m: &LMatrix) -> Result<RelPosition> {
    let vector = lm::snf_valuations(ring, m, m.rows())?;
    let nu = -vector.iter().sum::<i64>();
    Ok(RelPosition { vector, nu })
}

/// `ν` of the lattice with basis `m` relative to `O^d`.
fn nu_of(ring: &SeriesRing, m: &LMatrix) -> Result<i64> {
    Ok(rel_position_of(ring, m)?.nu)
}

/// O-basis of `L ∩ W_K`, written in the coordinates of the echelon basis of
/// `W` (a `d × d` matrix). `w` must be in reduced echelon form.
pub(crate) fn sub_coords(l: &OLattice, w: &[Vector]) -> Result<LMatrix> {
    let n = l.n();
    let d = w.len();
    let f = l.ring.field();
    let ring = &l.ring;
    let (w, pivots) = linalg::rref(f, w, n);
    if w.len() != d {
        return Err(Error::DimensionMismatch("subspace rows are not independent".into()));
    }
    let kernel = if d == n {
        l.basis.clone()
    } else {
        // x ∈ L lies in W_K iff A·x = 0 for the annihilator A of W
        let a = LMatrix::from_field_rows(&linalg::annihilator(f, &w, n), n);
        let ab = lm::mul(ring, &a, &l.basis)?;
        let cr = lm::column_reduce(ring, &ab, n - d)?;
        let tail: Vec<usize> = (n - d..n).collect();
        lm::mul(ring, &l.basis, &cr.u.select_cols(&tail))?
    };
    // a vector of W_K is determined by its entries at W's pivot columns
    Ok(kernel.select_rows(&pivots))
}

/// Degree of the subobject `W`: `ν(W⊗O, L ∩ W_K)`.
pub fn bun_deg(l: &OLattice, w: &[Vector]) -> Result<Rational> {
    if w.is_empty() {
        return Ok(Rational::zero());
    }
    Ok(int(nu_of(&l.ring, &sub_coords(l, w)?)?))
}

/// Degree of the quotient `V/W` with the image lattice of `L`, in the
/// coordinates given by the annihilator of `W`.
pub fn bun_quotient_deg(l: &OLattice, w: &[Vector]) -> Result<Rational> {
    let n = l.n();
    let f = l.ring.field();
    let ann = linalg::annihilator(f, w, n);
    if ann.is_empty() {
        return Ok(Rational::zero());
    }
    let a = LMatrix::from_field_rows(&ann, n);
    let img = lm::mul(&l.ring, &a, &l.basis)?;
    let basis = lm::lattice_basis(&l.ring, &img, ann.len())?;
    Ok(int(nu_of(&l.ring, &basis)?))
}

pub fn bun_degree_table(l: &OLattice, lat: &FiniteLattice) -> Result<Vec<Rational>> {
    let lat = subspace_lattice(l.q(), l.n(), Some(lat))?;
    let sd = lat.subspaces().unwrap();
    (0..lat.len()).into_par_iter().map(|e| bun_deg(l, sd.basis(e))).collect()
}

pub fn bun_hn_on(l: &OLattice, lat: &FiniteLattice) -> Result<InstanceHn> {
    let deg = bun_degree_table(l, lat)?;
    InstanceHn::solve(lat, deg)
}

pub fn bun_hn(l: &OLattice) -> Result<(FiniteLattice, InstanceHn)> {
    let lat = FiniteLattice::subspace(l.q(), l.n())?;
    let hn = bun_hn_on(l, &lat)?;
    Ok((lat, hn))
}

/// Basis `B₁ ⊗ B₂`, coordinates `a·n₂ + b`.
pub fn bun_tensor(l1: &OLattice, l2: &OLattice) -> Result<OLattice> {
    if l1.q() != l2.q() {
        return Err(Error::DimensionMismatch("lattices over different fields".into()));
    }
    OLattice::new(l1.ring.clone(), lm::kron(&l1.ring, &l1.basis, &l2.basis))
}

/// The dual lattice `{φ : φ(L) ⊆ O}`, basis `B⁻ᵀ`.
pub fn bun_dual(l: &OLattice) -> Result<OLattice> {
    let inv = lm::inverse(&l.ring, &l.basis)?;
    OLattice::new(l.ring.clone(), inv.transpose())
}

/// `Σ_γ γ · ν(Gr^γ L₁, Gr^γ L₂)` for a filtration `f` on the subspace lattice:
/// both lattices are intersected with `f(γ)`, pushed to the quotient by the
/// previous step, and compared there.
pub fn busemann(l1: &OLattice, l2: &OLattice, lat: &FiniteLattice, f: &Filtration) -> Result<Rational> {
    same_ring(l1, l2)?;
    let lat = subspace_lattice(l1.q(), l1.n(), Some(lat))?;
    let sd = lat.subspaces().unwrap();
    let field = l1.ring.field();
    let ring = &l1.ring;
    let mut total = Rational::zero();
    let chain = f.chain();
    for (i, gamma) in f.jumps().iter().enumerate() {
        let (lo, hi) = (chain[i], chain[i + 1]);
        let (hi_rows, lo_rows) = (sd.basis(hi), sd.basis(lo));
        let (d, e) = (hi_rows.len(), lo_rows.len());
        let (_, pivots) = linalg::rref(field, hi_rows, l1.n());
        // coordinates of the lower space inside the upper one
        let inner: Vec<Vector> = lo_rows.iter().map(|r| pivots.iter().map(|&p| r[p]).collect()).collect();
        let proj = LMatrix::from_field_rows(&linalg::annihilator(field, &inner, d), d);
        let graded = |l: &OLattice| -> Result<LMatrix> {
            let g = lm::mul(ring, &proj, &sub_coords(l, hi_rows)?)?;
            lm::lattice_basis(ring, &g, d - e)
        };
        let (g1, g2) = (graded(l1)?, graded(l2)?);
        let rel = lm::mul(ring, &lm::inverse(ring, &g1)?, &g2)?;
        total += gamma * int(nu_of(ring, &rel)?);
    }
    Ok(total)
}

/// Random lattice: entries are zero with probability 1/4, otherwise
/// `t^v (c₀ + c₁ t)` with `v ∈ [−3, 3]`, `c₀ ≠ 0`. Draws that are singular,
/// or whose determinant cancels beyond the working precision, are redrawn.
pub fn random_lattice(ring: &SeriesRing, n: usize, rng: &mut SplitMix64) -> Result<OLattice> {
    let q = ring.q() as u64;
    loop {
        let rows: Vec<Vec<LaurentScalar>> = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| {
                        if rng.chance(1, 4) {
                            LaurentScalar::zero()
                        } else {
                            let v = rng.range_i64(-3, 3);
                            let c0 = 1 + rng.below(q - 1) as Elem;
                            let c1 = rng.below(q) as Elem;
                            LaurentScalar::polynomial(v, &[c0, c1])
                        }
                    })
                    .collect()
            })
            .collect();
        match OLattice::load(ring.clone(), LMatrix::from_rows(rows)?) {
            Ok(l) => return Ok(l),
            Err(Error::Singular(_) | Error::PrecisionExhausted(_)) => continue,
            Err(e) => return Err(e),
        }
    }
}
