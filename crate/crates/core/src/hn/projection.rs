use super::greedy::hn_greedy;
use crate::algebra::rational::Rational;
use crate::error::Result;
use crate::filtration::Filtration;
use crate::lattice::FiniteLattice;

/// Convex projection of `f` onto the filtrations of the {0,1}-sublattice
/// `sub`: the HN filtration of `(Y, y ↦ deg_f(y))`, returned in the
/// coordinates of the ambient lattice.
pub fn convex_project(l: &FiniteLattice, rank: &[Rational], f: &Filtration, sub: &[usize]) -> Result<Filtration> {
    let (y, map) = l.sublattice(sub)?;
    let rank_y: Vec<Rational> = map.iter().map(|&x| rank[x].clone()).collect();
    let deg_y: Vec<Rational> = map.iter().map(|&x| f.deg_f(l, rank, x)).collect();
    hn_greedy(&y, &rank_y, &deg_y)?.transport(l, &map)
}
