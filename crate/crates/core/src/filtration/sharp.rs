//! Coordinates on distributive lattices: `f ↦ f♯`, a non-increasing map on
//! join-irreducibles.

use std::collections::BTreeMap;

use super::Filtration;
use crate::algebra::rational::Rational;
use crate::error::{Error, Result};
use crate::lattice::FiniteLattice;

/// `f♯(x) = max{γ : x ≤ f(γ)}` for each join-irreducible `x`.
pub fn sharp(l: &FiniteLattice, f: &Filtration) -> Result<BTreeMap<usize, Rational>> {
    l.ensure_distributive()?;
    Ok(l.join_irreducibles()
        .into_iter()
        .map(|x| {
            let i = f.chain().iter().position(|&c| l.leq(x, c)).expect("top dominates");
            (x, f.jumps()[i - 1].clone())
        })
        .collect())
}

/// Inverse of [`sharp`]: `f(γ) = ⋁{x : h(x) ≥ γ}`. `h` must be defined on
/// every join-irreducible and be non-increasing.
pub fn unsharp(l: &FiniteLattice, h: &BTreeMap<usize, Rational>) -> Result<Filtration> {
    l.ensure_distributive()?;
    let ji = l.join_irreducibles();
    if ji.len() != h.len() || ji.iter().any(|x| !h.contains_key(x)) {
        return Err(Error::InvalidFiltration("map must be defined exactly on join-irreducibles".into()));
    }
    for (&x, hx) in h {
        for (&y, hy) in h {
            if l.lt(x, y) && hx < hy {
                return Err(Error::InvalidFiltration(format!(
                    "map increases from {} to {}",
                    l.label(x),
                    l.label(y)
                )));
            }
        }
    }
    let steps: Vec<(Rational, usize)> = h
        .values()
        .map(|g| (g.clone(), l.join_all(h.iter().filter(|(_, v)| *v >= g).map(|(&x, _)| x))))
        .collect();
    if steps.is_empty() {
        return Ok(Filtration::constant(l, Rational::from_integer(0.into())));
    }
    Filtration::from_steps(l, steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;

    #[test]
    fn sharp_of_embedded_atom() {
        let b2 = FiniteLattice::boolean(2).unwrap();
        let s = sharp(&b2, &Filtration::embed(&b2, 1)).unwrap();
        assert_eq!(s[&1], int(1));
        assert_eq!(s[&2], int(0));
        assert_eq!(unsharp(&b2, &s).unwrap(), Filtration::embed(&b2, 1));
    }

    #[test]
    fn sharp_on_chain_is_jump_vector() {
        let c3 = FiniteLattice::chain(3).unwrap();
        let f = Filtration::new(&c3, vec![0, 2, 3], vec![int(5), int(1)]).unwrap();
        let s: Vec<Rational> = sharp(&c3, &f).unwrap().into_values().collect();
        assert_eq!(s, vec![int(5), int(5), int(1)]);
    }

    #[test]
    fn rejects_non_distributive() {
        let m3 = FiniteLattice::diamond();
        let f = Filtration::constant(&m3, int(0));
        assert!(matches!(sharp(&m3, &f), Err(Error::NotDistributive(_))));
    }
}
