//! Finite bounded lattices stored as full meet/join tables.

mod chains;
mod functions;
mod graded;
mod subspace;

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

pub use chains::{is_chain, is_01_chain, maximal_chains, random_maximal_chain};
pub use functions::{
    check_degree, check_rank, degree_bound_from_chain, height_function, rank_from_chain, Axiom,
    AxiomViolation,
};
pub use graded::{phi_c, GradedLattice};
pub use subspace::SubspaceData;

use crate::error::{Error, Result};

/// Size guards for lattice construction.
#[derive(Debug, Clone, Copy)]
pub struct Limits {
    pub max_elements: usize,
    /// Bound on `n²`, the size of each operation table.
    pub max_table: u128,
    pub max_chains: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self { max_elements: 1_000_000, max_table: 1 << 26, max_chains: 2_000_000 }
    }
}

impl Limits {
    pub(crate) fn admit(&self, what: &str, n: u128) -> Result<()> {
        if n > self.max_elements as u128 {
            return Err(Error::SizeLimit { what: what.into(), count: n, limit: self.max_elements as u128 });
        }
        if n * n > self.max_table {
            return Err(Error::SizeLimit { what: format!("{what} (table entries)"), count: n * n, limit: self.max_table });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeKind {
    Boolean(usize),
    Chain(usize),
    Subspace { q: u32, n: usize },
    Product,
    Interval,
    Sublattice,
    Graded,
    Explicit,
}

#[derive(Debug, Clone)]
pub struct FiniteLattice {
    n: usize,
    meet: Vec<u32>,
    join: Vec<u32>,
    bottom: usize,
    top: usize,
    labels: Vec<String>,
    kind: LatticeKind,
    subspaces: Option<Arc<SubspaceData>>,
    heights: OnceLock<Vec<usize>>,
    up_covers: OnceLock<Vec<Vec<usize>>>,
}

impl FiniteLattice {
    /// Builds a lattice from complete operation tables; bottom and top are
    /// read off as the meet and join of everything.
    pub(crate) fn from_tables(meet: Vec<u32>, join: Vec<u32>, labels: Vec<String>, kind: LatticeKind) -> Self {
        let n = labels.len();
        assert_eq!(meet.len(), n * n);
        assert_eq!(join.len(), n * n);
        let bottom = (1..n).fold(0, |acc, x| meet[acc * n + x] as usize);
        let top = (1..n).fold(0, |acc, x| join[acc * n + x] as usize);
        Self {
            n,
            meet,
            join,
            bottom,
            top,
            labels,
            kind,
            subspaces: None,
            heights: OnceLock::new(),
            up_covers: OnceLock::new(),
        }
    }

    /// The power set of a `k`-element set; element `i` is the bitmask `i`.
    pub fn boolean(k: usize) -> Result<Self> {
        if k >= 32 {
            return Err(Error::SizeLimit { what: "boolean lattice".into(), count: 1u128 << k.min(127), limit: 1 << 31 });
        }
        let n = 1usize << k;
        Limits::default().admit("boolean lattice", n as u128)?;
        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                meet[a * n + b] = (a & b) as u32;
                join[a * n + b] = (a | b) as u32;
            }
        }
        let labels = (0..n)
            .map(|m| {
                if m == 0 {
                    "0".to_string()
                } else {
                    (0..k).filter(|i| m >> i & 1 == 1).map(atom_name).collect()
                }
            })
            .collect();
        Ok(Self::from_tables(meet, join, labels, LatticeKind::Boolean(k)))
    }

    /// The total order `c0 < c1 < … < cr`.
    pub fn chain(r: usize) -> Result<Self> {
        let n = r + 1;
        Limits::default().admit("chain lattice", n as u128)?;
        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                meet[a * n + b] = a.min(b) as u32;
                join[a * n + b] = a.max(b) as u32;
            }
        }
        let labels = (0..n).map(|i| format!("c{i}")).collect();
        Ok(Self::from_tables(meet, join, labels, LatticeKind::Chain(r)))
    }

    /// All subspaces of F_q^n, ordered by dimension then echelon form.
    pub fn subspace(q: u32, n: usize) -> Result<Self> {
        Self::subspace_with_limits(q, n, &Limits::default())
    }

    pub fn subspace_with_limits(q: u32, n: usize, limits: &Limits) -> Result<Self> {
        subspace::build(q, n, limits)
    }

    /// `L1 × L2` with element `(a, b)` at index `a * |L2| + b`.
    pub fn product(l1: &FiniteLattice, l2: &FiniteLattice) -> Result<Self> {
        let (n1, n2) = (l1.n, l2.n);
        let n = n1 * n2;
        Limits::default().admit("product lattice", n as u128)?;
        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        for x in 0..n {
            let (a, b) = (x / n2, x % n2);
            for y in 0..n {
                let (c, d) = (y / n2, y % n2);
                meet[x * n + y] = (l1.meet(a, c) * n2 + l2.meet(b, d)) as u32;
                join[x * n + y] = (l1.join(a, c) * n2 + l2.join(b, d)) as u32;
            }
        }
        let labels = (0..n).map(|x| format!("({},{})", l1.labels[x / n2], l2.labels[x % n2])).collect();
        Ok(Self::from_tables(meet, join, labels, LatticeKind::Product))
    }

    /// The interval `[a, b]` as a lattice, with the element map into `self`.
    pub fn interval(&self, a: usize, b: usize) -> Result<(Self, Vec<usize>)> {
        if !self.leq(a, b) {
            return Err(Error::InvalidLattice(format!(
                "interval [{}, {}] is empty",
                self.labels[a], self.labels[b]
            )));
        }
        let elems: Vec<usize> = (0..self.n).filter(|&z| self.leq(a, z) && self.leq(z, b)).collect();
        let mut l = self.restrict(&elems, LatticeKind::Interval);
        if let LatticeKind::Boolean(_) | LatticeKind::Chain(_) = self.kind {
            l.kind = match self.kind {
                LatticeKind::Chain(_) => LatticeKind::Chain(elems.len() - 1),
                _ => LatticeKind::Boolean(elems.len().trailing_zeros() as usize),
            };
        }
        Ok((l, elems))
    }

    /// The sublattice on `elems`, which must contain bottom and top and be
    /// closed under meet and join. Returns the element map into `self`.
    pub fn sublattice(&self, elems: &[usize]) -> Result<(Self, Vec<usize>)> {
        let mut e: Vec<usize> = elems.to_vec();
        e.sort_unstable();
        e.dedup();
        if e.iter().any(|&x| x >= self.n) {
            return Err(Error::NotSublattice("element out of range".into()));
        }
        if e.binary_search(&self.bottom).is_err() || e.binary_search(&self.top).is_err() {
            return Err(Error::NotSublattice("must contain bottom and top".into()));
        }
        for &a in &e {
            for &b in &e {
                for c in [self.meet(a, b), self.join(a, b)] {
                    if e.binary_search(&c).is_err() {
                        return Err(Error::NotSublattice(format!(
                            "not closed: {} and {} give {}",
                            self.labels[a], self.labels[b], self.labels[c]
                        )));
                    }
                }
            }
        }
        Ok((self.restrict(&e, LatticeKind::Sublattice), e))
    }

    /// Closure of `gens ∪ {bottom, top}` under meet and join.
    pub fn generated_sublattice(&self, gens: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.n];
        let mut list = vec![self.bottom, self.top];
        list.extend_from_slice(gens);
        list.retain(|&x| !std::mem::replace(&mut inside[x], true));
        let mut i = 0;
        while i < list.len() {
            for j in 0..=i {
                let (a, b) = (list[i], list[j]);
                for c in [self.meet(a, b), self.join(a, b)] {
                    if !inside[c] {
                        inside[c] = true;
                        list.push(c);
                    }
                }
            }
            i += 1;
        }
        list.sort_unstable();
        list
    }

    /// Sub-table on a meet/join-closed subset (not re-validated).
    fn restrict(&self, elems: &[usize], kind: LatticeKind) -> Self {
        let m = elems.len();
        let pos: HashMap<usize, u32> = elems.iter().enumerate().map(|(i, &x)| (x, i as u32)).collect();
        let mut meet = vec![0; m * m];
        let mut join = vec![0; m * m];
        for (i, &a) in elems.iter().enumerate() {
            for (j, &b) in elems.iter().enumerate() {
                meet[i * m + j] = pos[&self.meet(a, b)];
                join[i * m + j] = pos[&self.join(a, b)];
            }
        }
        let labels = elems.iter().map(|&x| self.labels[x].clone()).collect();
        let mut l = Self::from_tables(meet, join, labels, kind);
        if let Some(sd) = &self.subspaces {
            l.subspaces = Some(Arc::new(sd.restrict(elems)));
        }
        l
    }

    /// Builds a lattice from an order relation, deriving meet and join.
    pub fn from_leq(labels: Vec<String>, leq: &[Vec<bool>]) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::InvalidLattice("no elements".into()));
        }
        Limits::default().admit("explicit lattice", n as u128)?;
        if leq.len() != n || leq.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidLattice(format!("leq must be {n}x{n}")));
        }
        for a in 0..n {
            if !leq[a][a] {
                return Err(Error::InvalidLattice(format!("leq not reflexive at {}", labels[a])));
            }
            for b in 0..n {
                if a != b && leq[a][b] && leq[b][a] {
                    return Err(Error::InvalidLattice(format!(
                        "leq not antisymmetric at ({}, {})",
                        labels[a], labels[b]
                    )));
                }
                for c in 0..n {
                    if leq[a][b] && leq[b][c] && !leq[a][c] {
                        return Err(Error::InvalidLattice(format!(
                            "leq not transitive at ({}, {}, {})",
                            labels[a], labels[b], labels[c]
                        )));
                    }
                }
            }
        }
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(l) {
                return Err(Error::InvalidLattice(format!("duplicate label {l:?}")));
            }
        }
        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let lower: Vec<usize> = (0..n).filter(|&z| leq[z][a] && leq[z][b]).collect();
                let glb = lower.iter().copied().find(|&z| lower.iter().all(|&w| leq[w][z]));
                let upper: Vec<usize> = (0..n).filter(|&z| leq[a][z] && leq[b][z]).collect();
                let lub = upper.iter().copied().find(|&z| upper.iter().all(|&w| leq[z][w]));
                match (glb, lub) {
                    (Some(m), Some(j)) => {
                        meet[a * n + b] = m as u32;
                        join[a * n + b] = j as u32;
                    }
                    _ => {
                        return Err(Error::InvalidLattice(format!(
                            "{} and {} have no {}",
                            labels[a],
                            labels[b],
                            if glb.is_none() { "meet" } else { "join" }
                        )))
                    }
                }
            }
        }
        Ok(Self::from_tables(meet, join, labels, LatticeKind::Explicit))
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn kind(&self) -> &LatticeKind {
        &self.kind
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    /// Element with the given label; `"0"` and `"1"` also name bottom and top.
    pub fn find(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label).or(match label {
            "0" => Some(self.bottom),
            "1" => Some(self.top),
            _ => None,
        })
    }

    pub fn subspaces(&self) -> Option<&SubspaceData> {
        self.subspaces.as_deref()
    }

    #[inline]
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.n + b] as usize
    }

    #[inline]
    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.n + b] as usize
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.meet(a, b) == a
    }

    #[inline]
    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn join_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }

    pub fn meet_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    /// Verifies the lattice axioms on the tables. Cubic; meant for tests and inputs.
    pub fn check_axioms(&self) -> Result<()> {
        let n = self.n;
        let bad = |msg: String| Err(Error::InvalidLattice(msg));
        for a in 0..n {
            if self.meet(a, a) != a || self.join(a, a) != a {
                return bad(format!("not idempotent at {}", self.labels[a]));
            }
            for b in 0..n {
                if self.meet(a, b) != self.meet(b, a) || self.join(a, b) != self.join(b, a) {
                    return bad(format!("not commutative at ({a},{b})"));
                }
                if self.meet(a, self.join(a, b)) != a || self.join(a, self.meet(a, b)) != a {
                    return bad(format!("absorption fails at ({a},{b})"));
                }
                for c in 0..n {
                    if self.meet(self.meet(a, b), c) != self.meet(a, self.meet(b, c))
                        || self.join(self.join(a, b), c) != self.join(a, self.join(b, c))
                    {
                        return bad(format!("not associative at ({a},{b},{c})"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Lengths of longest chains from bottom (the height, when graded).
    pub fn chain_heights(&self) -> &[usize] {
        self.heights.get_or_init(|| {
            let n = self.n;
            let mut below: Vec<(usize, usize)> =
                (0..n).map(|x| ((0..n).filter(|&y| self.leq(y, x)).count(), x)).collect();
            below.sort_unstable();
            let mut h = vec![0usize; n];
            for &(_, x) in &below {
                h[x] = (0..n).filter(|&y| self.lt(y, x)).map(|y| h[y] + 1).max().unwrap_or(0);
            }
            h
        })
    }

    /// Upper covers of every element, in increasing index order.
    pub fn upper_covers(&self) -> &[Vec<usize>] {
        self.up_covers.get_or_init(|| {
            let n = self.n;
            let h = self.chain_heights();
            (0..n)
                .map(|x| {
                    let above: Vec<usize> = (0..n).filter(|&y| self.lt(x, y)).collect();
                    above
                        .iter()
                        .copied()
                        .filter(|&y| {
                            if self.is_known_modular() {
                                h[y] == h[x] + 1
                            } else {
                                !above.iter().any(|&z| self.lt(z, y))
                            }
                        })
                        .collect()
                })
                .collect()
        })
    }

    pub fn is_known_modular(&self) -> bool {
        matches!(self.kind, LatticeKind::Boolean(_) | LatticeKind::Chain(_) | LatticeKind::Subspace { .. })
    }

    pub fn is_known_distributive(&self) -> bool {
        matches!(self.kind, LatticeKind::Boolean(_) | LatticeKind::Chain(_))
    }

    /// Exhaustive modular-law check: `(a∨b)∧c = a∨(b∧c)` for all `a ≤ c`.
    /// Returns a violating triple, if any.
    pub fn check_modular(&self) -> Option<(usize, usize, usize)> {
        let n = self.n;
        for a in 0..n {
            for c in 0..n {
                if !self.leq(a, c) {
                    continue;
                }
                for b in 0..n {
                    if self.meet(self.join(a, b), c) != self.join(a, self.meet(b, c)) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// Errors with a witness unless the lattice is modular.
    pub fn ensure_modular(&self) -> Result<()> {
        if self.is_known_modular() {
            return Ok(());
        }
        match self.check_modular() {
            None => Ok(()),
            Some((a, b, c)) => {
                let labels = [a, b, c].map(|x| self.label(x).to_string());
                Err(Error::NotModular { a, b, c, labels })
            }
        }
    }

    /// A triple violating `x∧(y∨z) = (x∧y)∨(x∧z)`, if any.
    pub fn check_distributive(&self) -> Option<(usize, usize, usize)> {
        let n = self.n;
        for x in 0..n {
            for y in 0..n {
                for z in y + 1..n {
                    if self.meet(x, self.join(y, z)) != self.join(self.meet(x, y), self.meet(x, z)) {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }

    pub fn ensure_distributive(&self) -> Result<()> {
        if self.is_known_distributive() {
            return Ok(());
        }
        match self.check_distributive() {
            None => Ok(()),
            Some((x, y, z)) => Err(Error::NotDistributive(format!(
                "{} ∧ ({} ∨ {}) differs from ({} ∧ {}) ∨ ({} ∧ {})",
                self.labels[x], self.labels[y], self.labels[z], self.labels[x], self.labels[y],
                self.labels[x], self.labels[z]
            ))),
        }
    }

    /// Join-irreducible elements: those covering exactly one element.
    pub fn join_irreducibles(&self) -> Vec<usize> {
        let covers = self.upper_covers();
        let mut lower = vec![0usize; self.n];
        for ys in covers {
            for &y in ys {
                lower[y] += 1;
            }
        }
        (0..self.n).filter(|&x| lower[x] == 1).collect()
    }

    /// The pentagon N5: `0 < a < c < 1`, `0 < b < 1`, `b` incomparable to `a, c`.
    pub fn pentagon() -> Self {
        let labels: Vec<String> = ["0", "a", "b", "c", "1"].iter().map(|s| s.to_string()).collect();
        let pairs = [(0, 1), (0, 2), (0, 3), (0, 4), (1, 3), (1, 4), (2, 4), (3, 4)];
        Self::from_pairs(labels, &pairs).expect("N5 is a lattice")
    }

    /// The diamond M3: three pairwise incomparable atoms.
    pub fn diamond() -> Self {
        let labels: Vec<String> = ["0", "a", "b", "c", "1"].iter().map(|s| s.to_string()).collect();
        let pairs = [(0, 1), (0, 2), (0, 3), (0, 4), (1, 4), (2, 4), (3, 4)];
        Self::from_pairs(labels, &pairs).expect("M3 is a lattice")
    }

    fn from_pairs(labels: Vec<String>, strict: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in strict {
            leq[a][b] = true;
        }
        Self::from_leq(labels, &leq)
    }
}

fn atom_name(i: usize) -> char {
    (b'a' + i as u8) as char
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_lattices() {
        let b2 = FiniteLattice::boolean(2).unwrap();
        assert_eq!(b2.len(), 4);
        assert_eq!(b2.labels(), &["0", "a", "b", "ab"]);
        assert_eq!(b2.chain_heights()[b2.top()], 2);
        let c3 = FiniteLattice::chain(3).unwrap();
        assert_eq!(c3.len(), 4);
        assert!(c3.leq(1, 3) && !c3.leq(3, 1));
        for l in [&b2, &c3] {
            l.check_axioms().unwrap();
        }
    }

    #[test]
    fn pentagon_is_not_modular() {
        let n5 = FiniteLattice::pentagon();
        n5.check_axioms().unwrap();
        let (a, b, c) = n5.check_modular().expect("N5 is non-modular");
        assert!(n5.leq(a, c));
        assert_ne!(n5.meet(n5.join(a, b), c), n5.join(a, n5.meet(b, c)));
        assert!(matches!(n5.ensure_modular(), Err(Error::NotModular { .. })));
    }

    #[test]
    fn diamond_is_modular_not_distributive() {
        let m3 = FiniteLattice::diamond();
        assert!(m3.check_modular().is_none());
        assert!(m3.check_distributive().is_some());
        assert!(FiniteLattice::boolean(3).unwrap().check_distributive().is_none());
    }

    #[test]
    fn product_and_interval() {
        let c1 = FiniteLattice::chain(1).unwrap();
        let p = FiniteLattice::product(&c1, &c1).unwrap();
        p.check_axioms().unwrap();
        assert_eq!(p.len(), 4);
        assert!(p.check_distributive().is_none());
        let b3 = FiniteLattice::boolean(3).unwrap();
        let (iv, map) = b3.interval(1, 7).unwrap();
        assert_eq!(iv.len(), 4);
        assert_eq!(map, vec![1, 3, 5, 7]);
        assert_eq!(iv.kind(), &LatticeKind::Boolean(2));
    }

    #[test]
    fn join_irreducibles_of_boolean_are_atoms() {
        let b3 = FiniteLattice::boolean(3).unwrap();
        assert_eq!(b3.join_irreducibles(), vec![1, 2, 4]);
        let c3 = FiniteLattice::chain(3).unwrap();
        assert_eq!(c3.join_irreducibles(), vec![1, 2, 3]);
    }

    #[test]
    fn sublattice_closure() {
        let b2 = FiniteLattice::boolean(2).unwrap();
        assert!(b2.sublattice(&[0, 1, 3]).is_ok());
        assert!(b2.sublattice(&[0, 1, 2, 3]).is_ok());
        assert!(matches!(b2.sublattice(&[1, 3]), Err(Error::NotSublattice(_))));
        let b3 = FiniteLattice::boolean(3).unwrap();
        assert!(matches!(b3.sublattice(&[0, 1, 2, 7]), Err(Error::NotSublattice(_))));
        assert_eq!(b3.generated_sublattice(&[1, 2]), vec![0, 1, 2, 3, 7]);
    }
}
