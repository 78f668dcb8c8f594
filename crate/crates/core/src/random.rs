//! Random test objects drawn from a [`SplitMix64`] stream.

use num_traits::Zero;

use crate::algebra::rational::{int, rat, Rational};
use crate::filtration::Filtration;
use crate::lattice::{check_degree, random_maximal_chain, FiniteLattice};
use crate::rng::SplitMix64;

/// `count` distinct rationals `p/d` with `|p| ≤ 12`, `d ≤ 4`, decreasing.
pub fn random_jumps(rng: &mut SplitMix64, count: usize) -> Vec<Rational> {
    let mut out: Vec<Rational> = Vec::with_capacity(count);
    while out.len() < count {
        let g = rat(rng.range_i64(-12, 12), rng.range_i64(1, 4));
        if !out.contains(&g) {
            out.push(g);
        }
    }
    out.sort_by(|a, b| b.cmp(a));
    out
}

/// A random {0,1}-chain: a random maximal chain with each interior element
/// kept with probability 1/2.
pub fn random_01_chain(l: &FiniteLattice, rng: &mut SplitMix64) -> Vec<usize> {
    let full = random_maximal_chain(l, rng);
    sub_chain(&full, rng)
}

fn sub_chain(full: &[usize], rng: &mut SplitMix64) -> Vec<usize> {
    let last = full.len() - 1;
    full.iter()
        .enumerate()
        .filter(|&(i, _)| i == 0 || i == last || rng.chance(1, 2))
        .map(|(_, &x)| x)
        .collect()
}

/// Random filtration supported on a subchain of `chain` (a {0,1}-chain).
pub fn random_filtration_on(l: &FiniteLattice, chain: &[usize], rng: &mut SplitMix64) -> Filtration {
    let c = sub_chain(chain, rng);
    let jumps = random_jumps(rng, c.len() - 1);
    Filtration::new(l, c, jumps).expect("random filtration")
}

pub fn random_filtration(l: &FiniteLattice, rng: &mut SplitMix64) -> Filtration {
    if l.bottom() == l.top() {
        return Filtration::constant(l, Rational::zero());
    }
    let full = random_maximal_chain(l, rng);
    random_filtration_on(l, &full, rng)
}

/// Random supermodular integer degree function with values in `[-5, 5]`.
///
/// A sum of a few supermodular building blocks (scaled rank, principal
/// up-set indicators, negated non-down-set indicators, `rank(x ∧ a)`, convex
/// functions of rank) is accepted when it fits the range, then perturbed by
/// random ±1 steps that keep it supermodular.
pub fn random_degree(l: &FiniteLattice, rng: &mut SplitMix64) -> Vec<Rational> {
    let n = l.len();
    let h: Vec<i64> = l.chain_heights().iter().map(|&x| x as i64).collect();
    let (bot, top) = (l.bottom(), l.top());
    let mut deg = vec![0i64; n];
    if n > 1 {
        for _ in 0..50 {
            let mut d = vec![0i64; n];
            for _ in 0..rng.range_i64(1, 4) {
                match rng.below(5) {
                    0 => {
                        let (c, a) = (rng.range_i64(0, 3), rng.index(n));
                        if a != bot {
                            (0..n).filter(|&x| l.leq(a, x)).for_each(|x| d[x] += c);
                        }
                    }
                    1 => {
                        let (c, b) = (rng.range_i64(0, 3), rng.index(n));
                        if b != top {
                            (0..n).filter(|&x| !l.leq(x, b)).for_each(|x| d[x] -= c);
                        }
                    }
                    2 => {
                        let c = rng.range_i64(-2, 2);
                        (0..n).for_each(|x| d[x] += c * h[x]);
                    }
                    3 => {
                        let (c, a) = (rng.range_i64(0, 2), rng.index(n));
                        (0..n).for_each(|x| d[x] += c * h[l.meet(x, a)]);
                    }
                    _ => {
                        let c = rng.range_i64(0, 1);
                        (0..n).for_each(|x| d[x] += c * h[x] * (h[x] - 1) / 2);
                    }
                }
            }
            if d.iter().all(|v| v.abs() <= 5) {
                deg = d;
                break;
            }
        }
        for _ in 0..3 * n {
            let x = rng.index(n);
            if x == bot {
                continue;
            }
            let step = if rng.chance(1, 2) { 1 } else { -1 };
            let v = deg[x] + step;
            if v.abs() > 5 {
                continue;
            }
            deg[x] = v;
            if !is_supermodular_at(l, &deg, x) {
                deg[x] -= step;
            }
        }
    }
    let out: Vec<Rational> = deg.into_iter().map(int).collect();
    debug_assert!(check_degree(l, &out).is_none());
    out
}

fn is_supermodular_at(l: &FiniteLattice, deg: &[i64], x: usize) -> bool {
    let n = l.len();
    (0..n).all(|a| {
        (0..n).all(|b| {
            let touches = a == x || b == x || l.join(a, b) == x || l.meet(a, b) == x;
            !touches || deg[l.join(a, b)] + deg[l.meet(a, b)] >= deg[a] + deg[b]
        })
    })
}

/// The sublattice generated by one to three random elements.
pub fn random_sublattice(l: &FiniteLattice, rng: &mut SplitMix64) -> Vec<usize> {
    let k = rng.range_i64(1, 3) as usize;
    let gens: Vec<usize> = (0..k).map(|_| rng.index(l.len())).collect();
    l.generated_sublattice(&gens)
}
