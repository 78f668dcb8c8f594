//! The graded lattice `Gr_C = Π [c_{i−1}, c_i]` of a {0,1}-chain and the map φ_C.

use std::collections::HashMap;

use super::{is_01_chain, FiniteLattice, LatticeKind, Limits};
use crate::algebra::rational::Rational;
use crate::error::{Error, Result};

/// `φ_C(x) = ((x ∧ c_i) ∨ c_{i−1})_i`, one component per step of the chain.
pub fn phi_c(l: &FiniteLattice, chain: &[usize], x: usize) -> Vec<usize> {
    chain.windows(2).map(|w| l.join(l.meet(x, w[1]), w[0])).collect()
}

#[derive(Debug, Clone)]
pub struct GradedLattice {
    lattice: FiniteLattice,
    chain: Vec<usize>,
    /// Elements of each `[c_{i−1}, c_i]`, as ids in the base lattice.
    intervals: Vec<Vec<usize>>,
    positions: Vec<HashMap<usize, usize>>,
    strides: Vec<usize>,
}

impl GradedLattice {
    pub fn new(l: &FiniteLattice, chain: &[usize]) -> Result<Self> {
        if !is_01_chain(l, chain) {
            return Err(Error::InvalidChain("Gr_C needs a {0,1}-chain".into()));
        }
        let intervals: Vec<Vec<usize>> = chain
            .windows(2)
            .map(|w| (0..l.len()).filter(|&z| l.leq(w[0], z) && l.leq(z, w[1])).collect())
            .collect();
        let size = intervals.iter().try_fold(1u128, |acc, iv| acc.checked_mul(iv.len() as u128));
        let size = size.unwrap_or(u128::MAX);
        Limits::default().admit("graded lattice", size)?;
        let size = size as usize;
        let k = intervals.len();
        let mut strides = vec![1usize; k];
        for i in (0..k.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * intervals[i + 1].len();
        }
        let positions: Vec<HashMap<usize, usize>> = intervals
            .iter()
            .map(|iv| iv.iter().enumerate().map(|(i, &z)| (z, i)).collect())
            .collect();
        let decode = |x: usize| -> Vec<usize> {
            (0..k).map(|i| intervals[i][(x / strides[i]) % intervals[i].len()]).collect()
        };
        let comps: Vec<Vec<usize>> = (0..size).map(decode).collect();
        let encode = |zs: &[usize]| -> u32 {
            zs.iter().enumerate().map(|(i, z)| positions[i][z] * strides[i]).sum::<usize>() as u32
        };
        let mut meet = vec![0u32; size * size];
        let mut join = vec![0u32; size * size];
        let mut buf = vec![0usize; k];
        for a in 0..size {
            for b in 0..size {
                for i in 0..k {
                    buf[i] = l.meet(comps[a][i], comps[b][i]);
                }
                meet[a * size + b] = encode(&buf);
                for i in 0..k {
                    buf[i] = l.join(comps[a][i], comps[b][i]);
                }
                join[a * size + b] = encode(&buf);
            }
        }
        let labels = comps
            .iter()
            .map(|zs| {
                if k == 1 {
                    l.label(zs[0]).to_string()
                } else {
                    format!("({})", zs.iter().map(|&z| l.label(z)).collect::<Vec<_>>().join(","))
                }
            })
            .collect();
        let lattice = FiniteLattice::from_tables(meet, join, labels, LatticeKind::Graded);
        Ok(Self { lattice, chain: chain.to_vec(), intervals, positions, strides })
    }

    pub fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }

    pub fn chain(&self) -> &[usize] {
        &self.chain
    }

    /// Element of `Gr_C` with the given components.
    pub fn encode(&self, zs: &[usize]) -> usize {
        zs.iter().enumerate().map(|(i, z)| self.positions[i][z] * self.strides[i]).sum()
    }

    pub fn components(&self, x: usize) -> Vec<usize> {
        (0..self.intervals.len())
            .map(|i| self.intervals[i][(x / self.strides[i]) % self.intervals[i].len()])
            .collect()
    }

    /// `φ_C(x)` as an element of `Gr_C`.
    pub fn phi(&self, l: &FiniteLattice, x: usize) -> usize {
        self.encode(&phi_c(l, &self.chain, x))
    }

    /// Induced function `(z_i) ↦ Σ v(z_i) − v(c_{i−1})`.
    pub fn induced(&self, values: &[Rational]) -> Vec<Rational> {
        (0..self.lattice.len())
            .map(|x| {
                self.components(x)
                    .iter()
                    .zip(&self.chain)
                    .map(|(&z, &c)| &values[z] - &values[c])
                    .sum()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;
    use crate::lattice::{check_rank, height_function};

    #[test]
    fn phi_on_subspace_2_2() {
        let l = FiniteLattice::subspace(2, 2).unwrap();
        // C = 0 < <10> < plane, x = <11>
        assert_eq!(phi_c(&l, &[0, 1, 4], 2), vec![0, 4]);
        assert_eq!(phi_c(&l, &[0, 1, 4], 0), vec![0, 1]);
        assert_eq!(phi_c(&l, &[0, 1, 4], 1), vec![1, 1]);
    }

    #[test]
    fn maximal_chain_gives_boolean() {
        let l = FiniteLattice::subspace(2, 3).unwrap();
        let chain = crate::lattice::maximal_chains(&l).unwrap()[5].clone();
        let gr = GradedLattice::new(&l, &chain).unwrap();
        assert_eq!(gr.lattice().len(), 8);
        assert!(gr.lattice().check_distributive().is_none());
        let h = height_function(&l).unwrap();
        let r = gr.induced(&h);
        assert_eq!(check_rank(gr.lattice(), &r), None);
        // anything induced from a maximal chain is exact on Gr_C
        let deg: Vec<Rational> = (0..l.len()).map(|x| int((x as i64 * 7) % 5 - 2)).collect();
        let d = gr.induced(&deg);
        for a in 0..8 {
            for b in 0..8 {
                let g = gr.lattice();
                assert_eq!(&d[g.join(a, b)] + &d[g.meet(a, b)], &d[a] + &d[b]);
            }
        }
    }

    #[test]
    fn trivial_chain_gives_the_lattice() {
        let l = FiniteLattice::boolean(2).unwrap();
        let gr = GradedLattice::new(&l, &[0, 3]).unwrap();
        assert_eq!(gr.lattice().len(), 4);
        for x in 0..4 {
            assert_eq!(gr.phi(&l, x), x);
        }
    }
}
