//! R-filtrations of a finite lattice: a {0,1}-chain `c_0 < … < c_s` with
//! strictly decreasing jumps `γ_1 > … > γ_s`, read as
//! `f(γ) = c_i` for `γ_{i+1} < γ ≤ γ_i` (bottom above `γ_1`, top at or below `γ_s`).
//!
//! A [`Filtration`] stores only element ids; every operation takes the
//! lattice it lives on. Constructors normalize, so structural equality is
//! equality of filtrations.

mod metric;
mod sharp;

use std::fmt::Write as _;

use num_traits::{Signed, Zero};

pub use metric::{dist, dist2, geodesic, norm2, pairing};
pub use sharp::{sharp, unsharp};

use crate::algebra::rational::{format_rational, int, Rational};
use crate::error::{Error, Result};
use crate::lattice::{FiniteLattice, GradedLattice};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Filtration {
    chain: Vec<usize>,
    jumps: Vec<Rational>,
}

impl Filtration {
    /// Validating constructor. `chain` may start at bottom (one element
    /// more than `jumps`) or omit it.
    pub fn new(l: &FiniteLattice, chain: Vec<usize>, jumps: Vec<Rational>) -> Result<Self> {
        let mut chain = chain;
        if chain.len() == jumps.len() {
            chain.insert(0, l.bottom());
        }
        if chain.len() != jumps.len() + 1 {
            return Err(Error::InvalidFiltration(format!(
                "{} chain elements for {} jumps",
                chain.len(),
                jumps.len()
            )));
        }
        if chain.iter().any(|&x| x >= l.len()) {
            return Err(Error::InvalidFiltration("element out of range".into()));
        }
        if chain[0] != l.bottom() || *chain.last().unwrap() != l.top() {
            return Err(Error::InvalidFiltration("chain must run from bottom to top".into()));
        }
        if !chain.windows(2).all(|w| l.lt(w[0], w[1])) {
            return Err(Error::InvalidFiltration("chain is not strictly increasing".into()));
        }
        if !jumps.windows(2).all(|w| w[0] > w[1]) {
            return Err(Error::InvalidFiltration("jumps are not strictly decreasing".into()));
        }
        Ok(Self { chain, jumps })
    }

    /// Canonical filtration through the points `(γ, f(γ))`: between listed
    /// values `f` is left-continuous and constant. Values must grow as `γ`
    /// decreases and reach top at the smallest `γ`.
    pub fn from_steps(l: &FiniteLattice, steps: impl IntoIterator<Item = (Rational, usize)>) -> Result<Self> {
        let mut steps: Vec<(Rational, usize)> = steps.into_iter().collect();
        steps.sort_by(|a, b| b.0.cmp(&a.0));
        steps.dedup_by(|later, earlier| {
            let same = later.0 == earlier.0;
            if same {
                earlier.1 = l.join(earlier.1, later.1);
            }
            same
        });
        let mut chain = vec![l.bottom()];
        let mut jumps = Vec::new();
        for (g, v) in steps {
            let prev = *chain.last().unwrap();
            if v == prev {
                continue;
            }
            if !l.lt(prev, v) {
                return Err(Error::InvalidFiltration(format!(
                    "value {} at {} does not contain {}",
                    l.label(v),
                    format_rational(&g),
                    l.label(prev)
                )));
            }
            chain.push(v);
            jumps.push(g);
        }
        if *chain.last().unwrap() != l.top() {
            return Err(Error::InvalidFiltration("filtration does not exhaust the lattice".into()));
        }
        Ok(Self { chain, jumps })
    }

    /// `X(μ)`: bottom above `μ`, top at or below it.
    pub fn constant(l: &FiniteLattice, mu: Rational) -> Self {
        Self::from_steps(l, [(mu, l.top())]).expect("constant filtration")
    }

    /// The step filtration of `x`: top on `(−∞, 0]`, `x` on `(0, 1]`, bottom above.
    pub fn embed(l: &FiniteLattice, x: usize) -> Self {
        Self::from_steps(l, [(int(1), x), (int(0), l.top())]).expect("embedding of an element")
    }

    /// Chain `c_0 = bottom < … < c_s = top`.
    pub fn chain(&self) -> &[usize] {
        &self.chain
    }

    pub fn jumps(&self) -> &[Rational] {
        &self.jumps
    }

    /// Pairs `(c_i, γ_i)` for `i = 1..s`.
    pub fn steps(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.chain[1..].iter().copied().zip(&self.jumps)
    }

    /// Whether this is `X(μ)` for some μ.
    pub fn is_constant(&self) -> bool {
        self.jumps.len() <= 1
    }

    pub fn eval(&self, gamma: &Rational) -> usize {
        self.chain[self.jumps.iter().take_while(|j| *j >= gamma).count()]
    }

    /// `f_+(γ) = sup{f(η) : η > γ}`.
    pub fn eval_plus(&self, gamma: &Rational) -> usize {
        self.chain[self.jumps.iter().take_while(|j| *j > gamma).count()]
    }

    /// `Gr^γ = [f_+(γ), f(γ)]`, nontrivial exactly at jumps.
    pub fn gr(&self, gamma: &Rational) -> (usize, usize) {
        (self.eval_plus(gamma), self.eval(gamma))
    }

    /// `λ·f` for `λ ≥ 0`; `0·f = X(0)`.
    pub fn scale(&self, l: &FiniteLattice, lambda: &Rational) -> Result<Self> {
        if lambda.is_negative() {
            return Err(Error::InvalidFiltration("negative scalar".into()));
        }
        if lambda.is_zero() {
            return Ok(Self::constant(l, int(0)));
        }
        Ok(Self { chain: self.chain.clone(), jumps: self.jumps.iter().map(|g| g * lambda).collect() })
    }

    /// `(f+g)(γ) = ⋁ { f(γ_i) ∧ g(η_j) : γ_i + η_j ≥ γ }`.
    pub fn add(&self, l: &FiniteLattice, g: &Filtration) -> Self {
        let f = self;
        let mut cands: Vec<Rational> =
            f.jumps.iter().flat_map(|a| g.jumps.iter().map(move |b| a + b)).collect();
        cands.sort();
        cands.dedup();
        let steps = cands.into_iter().map(|gamma| {
            let mut v = l.bottom();
            for (x, a) in f.steps() {
                for (y, b) in g.steps() {
                    if a + b >= gamma {
                        v = l.join(v, l.meet(x, y));
                    }
                }
            }
            (gamma, v)
        });
        Self::from_steps(l, steps.collect::<Vec<_>>()).expect("sum of filtrations")
    }

    fn pointwise(&self, l: &FiniteLattice, g: &Filtration, op: impl Fn(usize, usize) -> usize) -> Self {
        let mut cands: Vec<Rational> = self.jumps.iter().chain(&g.jumps).cloned().collect();
        cands.sort();
        cands.dedup();
        let steps: Vec<(Rational, usize)> =
            cands.into_iter().map(|c| (c.clone(), op(self.eval(&c), g.eval(&c)))).collect();
        Self::from_steps(l, steps).expect("pointwise combination of filtrations")
    }

    pub fn meet(&self, l: &FiniteLattice, g: &Filtration) -> Self {
        self.pointwise(l, g, |a, b| l.meet(a, b))
    }

    pub fn join(&self, l: &FiniteLattice, g: &Filtration) -> Self {
        self.pointwise(l, g, |a, b| l.join(a, b))
    }

    /// Each jump repeated `height(c_i) − height(c_{i−1})` times.
    pub fn type_map(&self, l: &FiniteLattice) -> Result<Vec<Rational>> {
        l.ensure_modular()?;
        let h = l.chain_heights();
        let mut out = Vec::with_capacity(h[l.top()]);
        for (w, g) in self.chain.windows(2).zip(&self.jumps) {
            for _ in h[w[0]]..h[w[1]] {
                out.push(g.clone());
            }
        }
        Ok(out)
    }

    /// `⟨⋆, f⟩ = Σ γ_i (deg(c_i) − deg(c_{i−1}))`.
    pub fn degree_ext(&self, deg: &[Rational]) -> Rational {
        self.chain
            .windows(2)
            .zip(&self.jumps)
            .map(|(w, g)| g * (&deg[w[1]] - &deg[w[0]]))
            .sum()
    }

    /// `deg_f(x) = Σ γ_i (rank(c_i ∧ x) − rank(c_{i−1} ∧ x))`.
    pub fn deg_f(&self, l: &FiniteLattice, rank: &[Rational], x: usize) -> Rational {
        self.chain
            .windows(2)
            .zip(&self.jumps)
            .map(|(w, g)| g * (&rank[l.meet(w[1], x)] - &rank[l.meet(w[0], x)]))
            .sum()
    }

    /// `deg_f` on every element.
    pub fn deg_f_table(&self, l: &FiniteLattice, rank: &[Rational]) -> Vec<Rational> {
        (0..l.len()).map(|x| self.deg_f(l, rank, x)).collect()
    }

    /// `r_C(f) = φ_C ∘ f` on `Gr_C`.
    pub fn push_rc(&self, l: &FiniteLattice, gr: &GradedLattice) -> Self {
        let steps: Vec<(Rational, usize)> = self.steps().map(|(x, g)| (g.clone(), gr.phi(l, x))).collect();
        Self::from_steps(gr.lattice(), steps).expect("push-forward along φ_C")
    }

    /// Maps a filtration along an order embedding `map` (ids of `self`'s
    /// lattice into `target`), e.g. from a sublattice back to its ambient lattice.
    pub fn transport(&self, target: &FiniteLattice, map: &[usize]) -> Result<Self> {
        Self::new(target, self.chain.iter().map(|&x| map[x]).collect(), self.jumps.clone())
    }

    /// Human-readable form, e.g. `0 < <10> < <10,01> @ 1, 0`.
    pub fn describe(&self, l: &FiniteLattice) -> String {
        if self.jumps.len() == 1 {
            return format!("X({})", format_rational(&self.jumps[0]));
        }
        let mut s = self.chain.iter().map(|&x| l.label(x)).collect::<Vec<_>>().join(" < ");
        let _ = write!(s, " @ {}", self.jumps.iter().map(format_rational).collect::<Vec<_>>().join(", "));
        s
    }
}
