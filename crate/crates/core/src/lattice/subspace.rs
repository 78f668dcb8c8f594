//! Subspace lattices of F_q^n.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use super::{FiniteLattice, LatticeKind, Limits};
use crate::algebra::gf::{Elem, GaloisField};
use crate::algebra::linalg::{self, Rows};
use crate::error::{Error, Result};

/// Echelon bases of the elements of a subspace lattice.
#[derive(Debug, Clone)]
pub struct SubspaceData {
    field: GaloisField,
    n: usize,
    bases: Vec<Rows>,
    index: HashMap<Rows, usize>,
}

impl SubspaceData {
    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    /// Reduced echelon basis of element `x`.
    pub fn basis(&self, x: usize) -> &Rows {
        &self.bases[x]
    }

    pub fn dim(&self, x: usize) -> usize {
        self.bases[x].len()
    }

    /// Element spanned by `rows`, if present in the lattice.
    pub fn lookup(&self, rows: &[Vec<Elem>]) -> Option<usize> {
        let (r, _) = linalg::rref(&self.field, rows, self.n);
        self.index.get(&r).copied()
    }

    pub(crate) fn restrict(&self, elems: &[usize]) -> SubspaceData {
        let bases: Vec<Rows> = elems.iter().map(|&x| self.bases[x].clone()).collect();
        let index = bases.iter().enumerate().map(|(i, b)| (b.clone(), i)).collect();
        SubspaceData { field: self.field.clone(), n: self.n, bases, index }
    }
}

pub(super) fn label(rows: &Rows, q: u32) -> String {
    let sep = if q <= 10 { "" } else { "." };
    let parts: Vec<String> = rows
        .iter()
        .map(|r| r.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(sep))
        .collect();
    format!("<{}>", parts.join(","))
}

pub(super) fn build(q: u32, n: usize, limits: &Limits) -> Result<FiniteLattice> {
    let field = GaloisField::with_order(q)?;
    let count = linalg::subspace_count(q as u64, n as u32).ok_or(Error::SizeLimit {
        what: format!("subspace lattice of F_{q}^{n}"),
        count: u128::MAX,
        limit: limits.max_elements as u128,
    })?;
    limits.admit(&format!("subspace lattice of F_{q}^{n}"), count)?;
    let bases = linalg::enumerate_subspaces(&field, n);
    let m = bases.len();
    let nvec = (q as usize).pow(n as u32);
    let words = nvec.div_ceil(64);

    let code = |v: &[Elem]| v.iter().fold(0usize, |acc, &c| acc * q as usize + c as usize);
    let bitset = |rows: &Rows| -> Vec<u64> {
        let mut bits = vec![0u64; words];
        let d = rows.len();
        for combo in 0..(q as usize).pow(d as u32) {
            let mut v = vec![0; n];
            let mut c = combo;
            for row in rows {
                let k = (c % q as usize) as Elem;
                c /= q as usize;
                for j in 0..n {
                    v[j] = field.add(v[j], field.mul(k, row[j]));
                }
            }
            let i = code(&v);
            bits[i / 64] |= 1 << (i % 64);
        }
        bits
    };
    let sets: Vec<Vec<u64>> = bases.par_iter().map(bitset).collect();
    let by_set: HashMap<&[u64], u32> = sets.iter().enumerate().map(|(i, s)| (s.as_slice(), i as u32)).collect();
    let index: HashMap<Rows, usize> = bases.iter().enumerate().map(|(i, b)| (b.clone(), i)).collect();
    let ann: Vec<u32> = bases
        .iter()
        .map(|b| index[&linalg::rref(&field, &linalg::annihilator(&field, b, n), n).0] as u32)
        .collect();

    let meet: Vec<u32> = (0..m)
        .into_par_iter()
        .flat_map_iter(|a| {
            let sets = &sets;
            let by_set = &by_set;
            let mut buf = vec![0u64; words];
            (0..m)
                .map(move |b| {
                    for w in 0..words {
                        buf[w] = sets[a][w] & sets[b][w];
                    }
                    by_set[buf.as_slice()]
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let join: Vec<u32> = (0..m)
        .into_par_iter()
        .flat_map_iter(|a| {
            let (meet, ann) = (&meet, &ann);
            (0..m).map(move |b| ann[meet[ann[a] as usize * m + ann[b] as usize] as usize])
        })
        .collect();

    let labels = bases.iter().map(|b| label(b, q)).collect();
    let mut l = FiniteLattice::from_tables(meet, join, labels, LatticeKind::Subspace { q, n });
    l.subspaces = Some(Arc::new(SubspaceData { field, n, bases, index }));
    Ok(l)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subspace_2_2() {
        let l = FiniteLattice::subspace(2, 2).unwrap();
        assert_eq!(l.len(), 5);
        assert_eq!(l.labels(), &["<>", "<10>", "<11>", "<01>", "<10,01>"]);
        assert_eq!((l.bottom(), l.top()), (0, 4));
        assert_eq!(l.join(1, 2), 4);
        assert_eq!(l.meet(1, 3), 0);
        l.check_axioms().unwrap();
        assert!(l.check_modular().is_none());
    }

    #[test]
    fn meets_and_joins_match_linear_algebra() {
        let l = FiniteLattice::subspace(3, 3).unwrap();
        let sd = l.subspaces().unwrap();
        let f = sd.field();
        for a in 0..l.len() {
            for b in 0..l.len() {
                let s = linalg::sum(f, sd.basis(a), sd.basis(b), 3);
                assert_eq!(sd.basis(l.join(a, b)), &s);
                let i = linalg::intersection(f, sd.basis(a), sd.basis(b), 3);
                assert_eq!(sd.basis(l.meet(a, b)), &i);
            }
        }
    }

    #[test]
    fn size_guard() {
        assert!(FiniteLattice::subspace(2, 6).is_ok());
        assert!(matches!(FiniteLattice::subspace(2, 7), Err(Error::SizeLimit { .. })));
    }
}
