//! Matrices over F_q((t)) and the valuation-ring reductions built on them.
//!
//! Pivots are always chosen with minimal certified valuation so that every
//! elimination multiplier lies in O = F_q[[t]].

use super::gf::Elem;
use super::laurent::{LaurentScalar, SeriesRing};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LMatrix {
    rows: usize,
    cols: usize,
    data: Vec<LaurentScalar>,
}

impl LMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![LaurentScalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, LaurentScalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<LaurentScalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::DimensionMismatch("ragged matrix rows".into()));
        }
        Ok(Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Constant matrix with entries in F_q.
    pub fn from_field_rows(rows: &[Vec<Elem>], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                m.set(i, j, LaurentScalar::monomial(c, 0));
            }
        }
        m
    }

    pub fn diagonal(entries: Vec<LaurentScalar>) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.into_iter().enumerate() {
            m.set(i, i, e);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentScalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: LaurentScalar) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[LaurentScalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<LaurentScalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let rows = idx.iter().map(|&i| self.row(i).to_vec()).collect();
        Self::from_rows(rows).unwrap_or_else(|_| Self::zeros(0, self.cols))
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        let mut m = Self::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            for (k, &j) in idx.iter().enumerate() {
                m.set(i, k, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// Smallest and largest valuation among nonzero entries.
    pub fn valuation_spread(&self) -> Option<(i64, i64)> {
        let vals: Vec<i64> = self.data.iter().filter_map(|x| x.valuation()).collect();
        Some((*vals.iter().min()?, *vals.iter().max()?))
    }

    pub fn is_exact(&self) -> bool {
        self.data.iter().all(|x| x.is_exact())
    }
}

pub fn mul(ring: &SeriesRing, a: &LMatrix, b: &LMatrix) -> Result<LMatrix> {
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} times {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let mut c = LMatrix::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        for j in 0..b.cols {
            let mut s = LaurentScalar::zero();
            for k in 0..a.cols {
                let (x, y) = (a.get(i, k), b.get(k, j));
                if !x.is_exact_zero() && !y.is_exact_zero() {
                    s = ring.add(&s, &ring.mul(x, y));
                }
            }
            c.set(i, j, s);
        }
    }
    Ok(c)
}

/// Kronecker product, row index `i1 * a.rows + i2` style (`a` outer).
pub fn kron(ring: &SeriesRing, a: &LMatrix, b: &LMatrix) -> LMatrix {
    let mut c = LMatrix::zeros(a.rows * b.rows, a.cols * b.cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            for k in 0..b.rows {
                for l in 0..b.cols {
                    c.set(i * b.rows + k, j * b.cols + l, ring.mul(a.get(i, j), b.get(k, l)));
                }
            }
        }
    }
    c
}

pub fn frobenius(ring: &SeriesRing, a: &LMatrix) -> LMatrix {
    LMatrix { rows: a.rows, cols: a.cols, data: a.data.iter().map(|x| ring.frobenius(x)).collect() }
}

/// Position of a minimal-valuation entry among `cells`, certified against
/// every approximate zero there. `Ok(None)` if all cells are exact zeros.
fn certified_pivot(
    m: &LMatrix,
    cells: impl Iterator<Item = (usize, usize)>,
) -> Result<Option<(usize, usize)>> {
    let mut best: Option<(i64, (usize, usize))> = None;
    let mut fuzzy: Option<i64> = None;
    for (i, j) in cells {
        match m.get(i, j) {
            LaurentScalar::Unit { val, .. } => {
                if best.is_none_or(|(b, _)| *val < b) {
                    best = Some((*val, (i, j)));
                }
            }
            LaurentScalar::Zero { known_to: Some(r) } => {
                fuzzy = Some(fuzzy.map_or(*r, |f: i64| f.min(*r)));
            }
            LaurentScalar::Zero { known_to: None } => {}
        }
    }
    match (best, fuzzy) {
        (None, None) => Ok(None),
        (None, Some(r)) => Err(Error::PrecisionExhausted(format!(
            "all candidate pivots are O(t^{r})"
        ))),
        (Some((v, _)), Some(r)) if r < v => Err(Error::PrecisionExhausted(format!(
            "pivot valuation {v} not certified against O(t^{r})"
        ))),
        (Some((_, pos)), _) => Ok(Some(pos)),
    }
}

/// Valuations of the first `rank` elementary divisors of `m` over O,
/// sorted non-increasing. Uses only unit-multiplier row and column operations.
pub fn snf_valuations(ring: &SeriesRing, m: &LMatrix, rank: usize) -> Result<Vec<i64>> {
    let mut a = m.clone();
    let mut vals = Vec::with_capacity(rank);
    for k in 0..rank {
        let cells = (k..a.rows).flat_map(|i| (k..a.cols).map(move |j| (i, j)));
        let (pi, pj) = certified_pivot(&a, cells)?
            .ok_or_else(|| Error::Singular(format!("rank {k} < {rank}")))?;
        a.swap_rows(k, pi);
        a.swap_cols(k, pj);
        let pivot = a.get(k, k).clone();
        vals.push(pivot.valuation().expect("certified pivot is nonzero"));
        for i in k + 1..a.rows {
            if a.get(i, k).is_exact_zero() {
                continue;
            }
            let factor = ring.div(a.get(i, k), &pivot)?;
            for j in k + 1..a.cols {
                let t = ring.mul(&factor, a.get(k, j));
                let v = ring.sub(a.get(i, j), &t);
                a.set(i, j, v);
            }
            a.set(i, k, LaurentScalar::zero());
        }
        // the column operations clearing row k touch nothing else
        for j in k + 1..a.cols {
            a.set(k, j, LaurentScalar::zero());
        }
    }
    vals.sort_unstable_by(|x, y| y.cmp(x));
    Ok(vals)
}

/// Inverse over K by Gauss-Jordan elimination with minimal-valuation pivots.
pub fn inverse(ring: &SeriesRing, m: &LMatrix) -> Result<LMatrix> {
    if m.rows != m.cols {
        return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
    }
    let n = m.rows;
    let mut a = m.clone();
    let mut inv = LMatrix::identity(n);
    for k in 0..n {
        let (pi, _) = certified_pivot(&a, (k..n).map(|i| (i, k)))?
            .ok_or_else(|| Error::Singular(format!("column {k} vanishes")))?;
        a.swap_rows(k, pi);
        inv.swap_rows(k, pi);
        let p_inv = ring.inv(a.get(k, k))?;
        for j in 0..n {
            let x = ring.mul(a.get(k, j), &p_inv);
            a.set(k, j, x);
            let y = ring.mul(inv.get(k, j), &p_inv);
            inv.set(k, j, y);
        }
        a.set(k, k, LaurentScalar::one());
        for i in 0..n {
            if i == k || a.get(i, k).is_exact_zero() {
                continue;
            }
            let factor = a.get(i, k).clone();
            for j in 0..n {
                let x = ring.sub(a.get(i, j), &ring.mul(&factor, a.get(k, j)));
                a.set(i, j, x);
                let y = ring.sub(inv.get(i, j), &ring.mul(&factor, inv.get(k, j)));
                inv.set(i, j, y);
            }
            a.set(i, k, LaurentScalar::zero());
        }
    }
    Ok(inv)
}

/// Result of [`column_reduce`]: `m · u = reduced`, `u` unimodular over O,
/// and the first `rank` columns of `reduced` are an O-basis of the column span.
#[derive(Debug, Clone)]
pub struct ColumnReduction {
    pub reduced: LMatrix,
    pub u: LMatrix,
    pub rank: usize,
}

/// Column echelon reduction over O. Rows are scanned top to bottom; in each
/// row the remaining column of minimal valuation becomes the next pivot and
/// clears the rest of the row. Rows that vanish to working precision are
/// skipped. Stops after `rank` pivots.
pub fn column_reduce(ring: &SeriesRing, m: &LMatrix, rank: usize) -> Result<ColumnReduction> {
    let mut a = m.clone();
    let mut u = LMatrix::identity(m.cols);
    let mut found = 0;
    for i in 0..a.rows {
        if found == rank {
            break;
        }
        let pivot = match certified_pivot(&a, (found..a.cols).map(|j| (i, j))) {
            Ok(Some((_, pj))) => pj,
            Ok(None) => continue,
            Err(Error::PrecisionExhausted(_))
                if (found..a.cols).all(|j| a.get(i, j).valuation().is_none()) =>
            {
                continue
            }
            Err(e) => return Err(e),
        };
        a.swap_cols(found, pivot);
        u.swap_cols(found, pivot);
        let p = a.get(i, found).clone();
        for j in found + 1..a.cols {
            if a.get(i, j).is_exact_zero() {
                continue;
            }
            let factor = ring.div(a.get(i, j), &p)?;
            for r in 0..a.rows {
                let x = ring.sub(a.get(r, j), &ring.mul(&factor, a.get(r, found)));
                a.set(r, j, x);
            }
            for r in 0..u.rows {
                let x = ring.sub(u.get(r, j), &ring.mul(&factor, u.get(r, found)));
                u.set(r, j, x);
            }
            a.set(i, j, LaurentScalar::zero());
        }
        found += 1;
    }
    if found < rank {
        return Err(if a.is_exact() {
            Error::Singular(format!("column rank {found} < {rank}"))
        } else {
            Error::PrecisionExhausted(format!("only {found} of {rank} pivots certified"))
        });
    }
    Ok(ColumnReduction { reduced: a, u, rank })
}

/// O-basis (as columns) of the lattice spanned by the columns of `gens`.
pub fn lattice_basis(ring: &SeriesRing, gens: &LMatrix, rank: usize) -> Result<LMatrix> {
    let cr = column_reduce(ring, gens, rank)?;
    Ok(cr.reduced.select_cols(&(0..rank).collect::<Vec<_>>()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::laurent::DEFAULT_PRECISION;

    fn ring() -> SeriesRing {
        SeriesRing::with_order(2, DEFAULT_PRECISION).unwrap()
    }

    fn mono(v: i64) -> LaurentScalar {
        LaurentScalar::monomial(1, v)
    }

    #[test]
    fn snf_examples() {
        let r = ring();
        let d = LMatrix::diagonal(vec![mono(2), mono(-1)]);
        assert_eq!(snf_valuations(&r, &d, 2).unwrap(), vec![2, -1]);
        let m = LMatrix::from_rows(vec![vec![mono(0), mono(0)], vec![LaurentScalar::zero(), mono(1)]]).unwrap();
        assert_eq!(snf_valuations(&r, &m, 2).unwrap(), vec![1, 0]);
        let unimodular = LMatrix::from_rows(vec![
            vec![LaurentScalar::polynomial(0, &[1, 1]), mono(3)],
            vec![mono(1), mono(0)],
        ])
        .unwrap();
        assert_eq!(snf_valuations(&r, &unimodular, 2).unwrap(), vec![0, 0]);
    }

    #[test]
    fn singular_matrix_is_reported() {
        let r = ring();
        let m = LMatrix::from_rows(vec![vec![mono(0), mono(1)], vec![mono(0), mono(1)]]).unwrap();
        assert!(matches!(snf_valuations(&r, &m, 2), Err(Error::Singular(_))));
        assert!(matches!(inverse(&r, &m), Err(Error::Singular(_))));
    }

    #[test]
    fn inverse_times_matrix_is_identity() {
        let r = ring();
        let m = LMatrix::from_rows(vec![
            vec![LaurentScalar::polynomial(-1, &[1, 1]), mono(2)],
            vec![mono(0), LaurentScalar::polynomial(0, &[1, 0, 1])],
        ])
        .unwrap();
        let inv = inverse(&r, &m).unwrap();
        let p = mul(&r, &m, &inv).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let x = p.get(i, j);
                if i == j {
                    assert_eq!(x.valuation(), Some(0));
                    assert_eq!(x.coeff(0), Some(1));
                    assert!(x.abs_prec().is_none_or(|a| a >= 32));
                } else {
                    assert!(x.valuation().is_none());
                }
            }
        }
    }

    #[test]
    fn column_reduction_finds_lattice_basis() {
        let r = ring();
        // generators t, t^2, 1+t of a rank-1 lattice in K: the span is O
        let g = LMatrix::from_rows(vec![vec![mono(1), mono(2), LaurentScalar::polynomial(0, &[1, 1])]]).unwrap();
        let cr = column_reduce(&r, &g, 1).unwrap();
        assert_eq!(cr.reduced.get(0, 0).valuation(), Some(0));
        let check = mul(&r, &g, &cr.u).unwrap();
        assert_eq!(check.get(0, 0), cr.reduced.get(0, 0));
        assert_eq!(snf_valuations(&r, &cr.u, 3).unwrap(), vec![0, 0, 0]);
    }
}
