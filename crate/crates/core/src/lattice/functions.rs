//! Rank and degree functions on a lattice, given as value tables.

use num_traits::Zero;
use serde::Serialize;

use super::FiniteLattice;
use crate::algebra::rational::Rational;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Axiom {
    Length,
    Normalized,
    StrictlyIncreasing,
    ModularEquality,
    Supermodular,
}

/// First violated axiom, with the witnessing pair (`a == b` for one-element axioms).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    pub a: usize,
    pub b: usize,
}

fn common(l: &FiniteLattice, f: &[Rational]) -> Option<AxiomViolation> {
    if f.len() != l.len() {
        return Some(AxiomViolation { axiom: Axiom::Length, a: 0, b: 0 });
    }
    if !f[l.bottom()].is_zero() {
        let b = l.bottom();
        return Some(AxiomViolation { axiom: Axiom::Normalized, a: b, b });
    }
    None
}

/// `deg(0) = 0` and `deg(a∨b) + deg(a∧b) >= deg(a) + deg(b)`.
pub fn check_degree(l: &FiniteLattice, deg: &[Rational]) -> Option<AxiomViolation> {
    if let Some(v) = common(l, deg) {
        return Some(v);
    }
    for a in 0..l.len() {
        for b in a + 1..l.len() {
            if &deg[l.join(a, b)] + &deg[l.meet(a, b)] < &deg[a] + &deg[b] {
                return Some(AxiomViolation { axiom: Axiom::Supermodular, a, b });
            }
        }
    }
    None
}

/// `rank(0) = 0`, strictly increasing, and modular equality on all pairs.
pub fn check_rank(l: &FiniteLattice, rank: &[Rational]) -> Option<AxiomViolation> {
    if let Some(v) = common(l, rank) {
        return Some(v);
    }
    for a in 0..l.len() {
        for b in 0..l.len() {
            if l.lt(a, b) && rank[a] >= rank[b] {
                return Some(AxiomViolation { axiom: Axiom::StrictlyIncreasing, a, b });
            }
            if b > a && &rank[l.join(a, b)] + &rank[l.meet(a, b)] != &rank[a] + &rank[b] {
                return Some(AxiomViolation { axiom: Axiom::ModularEquality, a, b });
            }
        }
    }
    None
}

/// The standard rank function `x ↦ height(x)`.
pub fn height_function(l: &FiniteLattice) -> Result<Vec<Rational>> {
    l.ensure_modular()?;
    Ok(l.chain_heights().iter().map(|&h| Rational::from_integer((h as i64).into())).collect())
}

fn chain_sum(l: &FiniteLattice, f: &[Rational], chain: &[usize], x: usize) -> Rational {
    let mut s = Rational::zero();
    for w in chain.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if l.join(l.meet(x, hi), lo) == hi {
            s += &f[hi] - &f[lo];
        }
    }
    s
}

/// `x ↦ Σ (rank(c_i) − rank(c_{i−1}))` over the steps of a maximal chain that
/// `x` fills; equals `rank` itself for every rank function.
pub fn rank_from_chain(l: &FiniteLattice, rank: &[Rational], chain: &[usize]) -> Result<Vec<Rational>> {
    if !super::is_01_chain(l, chain) {
        return Err(Error::InvalidChain("expected a {0,1}-chain".into()));
    }
    Ok((0..l.len()).map(|x| chain_sum(l, rank, chain, x)).collect())
}

/// The same sum for a degree function, an upper bound for `deg` along any
/// maximal chain.
pub fn degree_bound_from_chain(l: &FiniteLattice, deg: &[Rational], chain: &[usize]) -> Result<Vec<Rational>> {
    rank_from_chain(l, deg, chain)
}
