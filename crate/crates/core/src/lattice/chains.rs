//! Chains and maximal-chain enumeration.

use super::{FiniteLattice, Limits};
use crate::error::{Error, Result};
use crate::rng::SplitMix64;

/// Strictly increasing under the lattice order.
pub fn is_chain(l: &FiniteLattice, elems: &[usize]) -> bool {
    elems.iter().all(|&x| x < l.len()) && elems.windows(2).all(|w| l.lt(w[0], w[1]))
}

/// A chain running from bottom to top.
pub fn is_01_chain(l: &FiniteLattice, elems: &[usize]) -> bool {
    is_chain(l, elems) && elems.first() == Some(&l.bottom()) && elems.last() == Some(&l.top())
}

/// Every maximal chain, each once, in lexicographic order of element ids.
pub fn maximal_chains(l: &FiniteLattice) -> Result<Vec<Vec<usize>>> {
    maximal_chains_limited(l, Limits::default().max_chains)
}

pub fn maximal_chains_limited(l: &FiniteLattice, limit: usize) -> Result<Vec<Vec<usize>>> {
    l.ensure_modular()?;
    let covers = l.upper_covers();
    let mut out = Vec::new();
    let mut stack = vec![l.bottom()];
    fn go(
        l: &FiniteLattice,
        covers: &[Vec<usize>],
        stack: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        limit: usize,
    ) -> Result<()> {
        let x = *stack.last().unwrap();
        if x == l.top() {
            if out.len() == limit {
                return Err(Error::SizeLimit { what: "maximal chains".into(), count: limit as u128 + 1, limit: limit as u128 });
            }
            out.push(stack.clone());
            return Ok(());
        }
        for &y in &covers[x] {
            stack.push(y);
            go(l, covers, stack, out, limit)?;
            stack.pop();
        }
        Ok(())
    }
    go(l, covers, &mut stack, &mut out, limit)?;
    Ok(out)
}

/// A maximal chain built by a random walk up the cover graph.
pub fn random_maximal_chain(l: &FiniteLattice, rng: &mut SplitMix64) -> Vec<usize> {
    let covers = l.upper_covers();
    let mut chain = vec![l.bottom()];
    let mut x = l.bottom();
    while x != l.top() {
        let c = &covers[x];
        x = c[rng.index(c.len())];
        chain.push(x);
    }
    chain
}
