//! Pairing, norm and distance on filtrations.

use num_traits::{One, Signed, Zero};

use super::Filtration;
use crate::algebra::rational::{sqrt_decimal, Rational};
use crate::error::{Error, Result};
use crate::lattice::FiniteLattice;

/// `⟨f, g⟩ = Σ_{i,j} γ_i η_j (r_{i,j} − r_{i−1,j} − r_{i,j−1} + r_{i−1,j−1})`
/// with `r_{i,j} = rank(c_i ∧ d_j)`.
pub fn pairing(l: &FiniteLattice, rank: &[Rational], f: &Filtration, g: &Filtration) -> Rational {
    let (c, d) = (f.chain(), g.chain());
    let r: Vec<Vec<&Rational>> =
        c.iter().map(|&x| d.iter().map(|&y| &rank[l.meet(x, y)]).collect()).collect();
    let mut total = Rational::zero();
    for (i, gi) in f.jumps().iter().enumerate() {
        let i = i + 1;
        let mut row = Rational::zero();
        for (j, hj) in g.jumps().iter().enumerate() {
            let j = j + 1;
            let m = r[i][j] - r[i - 1][j] - r[i][j - 1] + r[i - 1][j - 1];
            if !m.is_zero() {
                row += hj * m;
            }
        }
        total += gi * row;
    }
    total
}

/// `‖f‖² = Σ γ_i² (rank(c_i) − rank(c_{i−1}))`.
pub fn norm2(rank: &[Rational], f: &Filtration) -> Rational {
    f.chain()
        .windows(2)
        .zip(f.jumps())
        .map(|(w, g)| g * g * (&rank[w[1]] - &rank[w[0]]))
        .sum()
}

/// `d(f, g)² = ‖f‖² + ‖g‖² − 2⟨f, g⟩`.
pub fn dist2(l: &FiniteLattice, rank: &[Rational], f: &Filtration, g: &Filtration) -> Rational {
    norm2(rank, f) + norm2(rank, g) - Rational::from_integer(2.into()) * pairing(l, rank, f, g)
}

/// Decimal `d(f, g)` truncated to `digits` places; for display only.
pub fn dist(l: &FiniteLattice, rank: &[Rational], f: &Filtration, g: &Filtration, digits: usize) -> String {
    sqrt_decimal(&dist2(l, rank, f, g), digits)
}

/// `g_t = (1−t)·g + t·h` for `0 ≤ t ≤ 1`.
pub fn geodesic(l: &FiniteLattice, g: &Filtration, h: &Filtration, t: &Rational) -> Result<Filtration> {
    if t.is_negative() || t > &Rational::one() {
        return Err(Error::InvalidFiltration("geodesic parameter outside [0, 1]".into()));
    }
    let s = Rational::one() - t;
    Ok(g.scale(l, &s)?.add(l, &h.scale(l, t)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};
    use crate::lattice::height_function;

    #[test]
    fn constant_pairings() {
        let l = FiniteLattice::subspace(2, 3).unwrap();
        let h = height_function(&l).unwrap();
        let one = Filtration::constant(&l, int(1));
        let zero = Filtration::constant(&l, int(0));
        assert_eq!(pairing(&l, &h, &one, &one), int(3));
        assert_eq!(pairing(&l, &h, &one, &zero), int(0));
        assert_eq!(dist2(&l, &h, &one, &zero), int(3));
        assert_eq!(dist2(&l, &h, &one, &one), int(0));
    }

    #[test]
    fn embedded_atoms_are_orthogonal() {
        let b2 = FiniteLattice::boolean(2).unwrap();
        let h = height_function(&b2).unwrap();
        let (a, b) = (Filtration::embed(&b2, 1), Filtration::embed(&b2, 2));
        assert_eq!(pairing(&b2, &h, &a, &b), int(0));
        assert_eq!(pairing(&b2, &h, &a, &a), int(1));
        assert_eq!(dist(&b2, &h, &a, &b, 4), "1.4142");
    }

    #[test]
    fn geodesic_endpoints_and_midpoint() {
        let l = FiniteLattice::boolean(3).unwrap();
        let g = Filtration::new(&l, vec![0, 1, 3, 7], vec![int(2), int(1), int(-1)]).unwrap();
        let h = Filtration::new(&l, vec![0, 4, 7], vec![int(3), int(0)]).unwrap();
        assert_eq!(geodesic(&l, &g, &h, &int(0)).unwrap(), g);
        assert_eq!(geodesic(&l, &g, &h, &int(1)).unwrap(), h);
        let x0 = Filtration::constant(&l, int(0));
        let x2 = Filtration::constant(&l, int(2));
        assert_eq!(geodesic(&l, &x0, &x2, &rat(1, 2)).unwrap(), Filtration::constant(&l, int(1)));
        assert!(geodesic(&l, &g, &h, &int(2)).is_err());
    }
}
