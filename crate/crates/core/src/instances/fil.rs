//! Filtered vector spaces: `V = F_q^n` with a decreasing R-filtration of
//! `V ⊗ ℓ` by ℓ-subspaces, `ℓ = F_{q^m}`. Subobjects are k-subspaces `W`
//! with the induced filtration on `W_ℓ`.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use rayon::prelude::*;

use super::{subspace_lattice, InstanceHn};
use crate::algebra::gf::{Elem, GaloisField};
use crate::algebra::linalg::{self, Rows, Vector};
use crate::algebra::rational::{int, Rational};
use crate::error::{Error, Result};
use crate::filtration::Filtration;
use crate::lattice::FiniteLattice;
use crate::random::random_jumps;
use crate::rng::SplitMix64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlagStep {
    pub jump: Rational,
    /// Reduced echelon basis over ℓ.
    pub basis: Rows,
}

#[derive(Debug, Clone)]
pub struct FilteredSpace {
    q: u32,
    m: u32,
    n: usize,
    k: GaloisField,
    l: GaloisField,
    embed: Vec<Elem>,
    flag: Vec<FlagStep>,
}

impl PartialEq for FilteredSpace {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q && self.m == other.m && self.n == other.n && self.flag == other.flag
    }
}

impl Eq for FilteredSpace {}

/// The fields `k = F_q ⊆ ℓ = F_{q^m}` and the embedding table of k in ℓ.
pub fn fields(q: u32, m: u32) -> Result<(GaloisField, GaloisField, Vec<Elem>)> {
    if m == 0 {
        return Err(Error::InvalidField("m must be positive".into()));
    }
    let k = GaloisField::with_order(q)?;
    let l = GaloisField::new(k.characteristic(), k.degree() * m)?;
    let embed = l.embedding_of(&k)?;
    Ok((k, l, embed))
}

impl FilteredSpace {
    /// Validates a flag given as `(jump, ℓ-rows)` pairs in order of
    /// decreasing jump. Each space must strictly contain the previous one and
    /// the last must be all of `ℓ^n`.
    pub fn new(q: u32, m: u32, n: usize, steps: Vec<(Rational, Rows)>) -> Result<Self> {
        let (k, l, embed) = fields(q, m)?;
        if n == 0 {
            return Err(Error::InvalidFiltration("a filtered space needs n ≥ 1".into()));
        }
        if steps.is_empty() {
            return Err(Error::InvalidFiltration("empty flag".into()));
        }
        let mut flag: Vec<FlagStep> = Vec::with_capacity(steps.len());
        for (jump, rows) in steps {
            if rows.iter().any(|r| r.len() != n || r.iter().any(|&c| c >= l.order())) {
                return Err(Error::InvalidFiltration(format!(
                    "flag rows must have {n} entries in 0..{}",
                    l.order()
                )));
            }
            let (basis, _) = linalg::rref(&l, &rows, n);
            if let Some(prev) = flag.last() {
                if jump >= prev.jump {
                    return Err(Error::InvalidFiltration("jumps must strictly decrease".into()));
                }
                let span = linalg::sum(&l, &prev.basis, &basis, n);
                if span != basis || basis.len() == prev.basis.len() {
                    return Err(Error::InvalidFiltration("flag spaces must be strictly nested".into()));
                }
            } else if basis.is_empty() {
                return Err(Error::InvalidFiltration("flag spaces must be nonzero".into()));
            }
            flag.push(FlagStep { jump, basis });
        }
        if flag.last().unwrap().basis.len() != n {
            return Err(Error::InvalidFiltration("the last flag space must be the whole space".into()));
        }
        Ok(Self { q, m, n, k, l, embed, flag })
    }

    /// Builds the canonical flag from candidate `(γ, spanning rows)` pairs
    /// whose spans grow as γ decreases; repeated spaces are dropped so each
    /// jump sits at the largest γ producing its space.
    fn from_candidates(q: u32, m: u32, n: usize, mut cands: Vec<(Rational, Rows)>) -> Result<Self> {
        let (_, l, _) = fields(q, m)?;
        cands.sort_by(|a, b| b.0.cmp(&a.0));
        let mut steps: Vec<(Rational, Rows)> = Vec::new();
        let mut dim = 0;
        for (g, rows) in cands {
            let (basis, _) = linalg::rref(&l, &rows, n);
            if basis.len() > dim {
                dim = basis.len();
                steps.push((g, basis));
            }
        }
        Self::new(q, m, n, steps)
    }

    /// The trivial flag: all of `ℓ^n` at jump `mu`.
    pub fn trivial(q: u32, m: u32, n: usize, mu: Rational) -> Result<Self> {
        let rows = (0..n).map(|i| unit(n, i)).collect();
        Self::new(q, m, n, vec![(mu, rows)])
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn flag(&self) -> &[FlagStep] {
        &self.flag
    }

    pub fn base_field(&self) -> &GaloisField {
        &self.k
    }

    pub fn ext_field(&self) -> &GaloisField {
        &self.l
    }

    /// Rows over k rewritten with ℓ codes.
    pub fn extend_scalars(&self, rows: &[Vector]) -> Rows {
        rows.iter().map(|r| r.iter().map(|&c| self.embed[c as usize]).collect()).collect()
    }

    /// `Σ γ · dim Gr^γ`, the degree of the whole space.
    pub fn degree(&self) -> Rational {
        let mut prev = 0;
        let mut total = Rational::zero();
        for s in &self.flag {
            total += &s.jump * int((s.basis.len() - prev) as i64);
            prev = s.basis.len();
        }
        total
    }

    /// Same flag with every jump shifted by `shift`.
    pub fn shifted(&self, shift: &Rational) -> Self {
        let mut out = self.clone();
        for s in &mut out.flag {
            s.jump += shift;
        }
        out
    }
}

fn unit(n: usize, i: usize) -> Vector {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// Degree of the subobject `W` (k-rows, any spanning set):
/// `Σ γ_i (dim(c_i ∩ W_ℓ) − dim(c_{i−1} ∩ W_ℓ))`.
pub fn fil_deg(x: &FilteredSpace, w: &[Vector]) -> Rational {
    let wl = x.extend_scalars(w);
    let mut prev = 0;
    let mut total = Rational::zero();
    for s in &x.flag {
        let d = linalg::intersection_dim(&x.l, &s.basis, &wl, x.n);
        if d > prev {
            total += &s.jump * int((d - prev) as i64);
            prev = d;
        }
    }
    total
}

/// `fil_deg` of every element of the subspace lattice `lat` of `F_q^n`.
pub fn fil_degree_table(x: &FilteredSpace, lat: &FiniteLattice) -> Result<Vec<Rational>> {
    let lat = subspace_lattice(x.q, x.n, Some(lat))?;
    let sd = lat.subspaces().unwrap();
    Ok((0..lat.len()).into_par_iter().map(|e| fil_deg(x, sd.basis(e))).collect())
}

/// HN filtration of `x` on a prebuilt subspace lattice of `F_q^n`.
pub fn fil_hn_on(x: &FilteredSpace, lat: &FiniteLattice) -> Result<InstanceHn> {
    let deg = fil_degree_table(x, lat)?;
    InstanceHn::solve(lat, deg)
}

/// Builds the subspace lattice of `F_q^n` and computes the HN filtration.
pub fn fil_hn(x: &FilteredSpace) -> Result<(FiniteLattice, InstanceHn)> {
    let lat = FiniteLattice::subspace(x.q, x.n)?;
    let hn = fil_hn_on(x, &lat)?;
    Ok((lat, hn))
}

fn same_fields(x1: &FilteredSpace, x2: &FilteredSpace) -> Result<()> {
    if x1.q != x2.q || x1.m != x2.m {
        return Err(Error::DimensionMismatch(format!(
            "fields differ: (q,m)=({},{}) vs ({},{})",
            x1.q, x1.m, x2.q, x2.m
        )));
    }
    Ok(())
}

/// Tensor product: `(F₁⊗F₂)^γ = Σ_{γ₁+γ₂=γ} F₁^{γ₁} ⊗ F₂^{γ₂}`, coordinates
/// `a·n₂ + b`.
pub fn fil_tensor(x1: &FilteredSpace, x2: &FilteredSpace) -> Result<FilteredSpace> {
    same_fields(x1, x2)?;
    let n = x1.n * x2.n;
    let mut sums: Vec<Rational> = Vec::new();
    for a in &x1.flag {
        for b in &x2.flag {
            let g = &a.jump + &b.jump;
            if !sums.contains(&g) {
                sums.push(g);
            }
        }
    }
    let cands = sums
        .into_iter()
        .map(|g| {
            let mut rows = Vec::new();
            for a in &x1.flag {
                // the largest space of x2 with a.jump + b.jump ≥ g
                if let Some(b) = x2.flag.iter().rev().find(|b| &a.jump + &b.jump >= g) {
                    for u in &a.basis {
                        for v in &b.basis {
                            rows.push(linalg::kron(&x1.l, u, v));
                        }
                    }
                }
            }
            (g, rows)
        })
        .collect();
    let out = FilteredSpace::from_candidates(x1.q, x1.m, n, cands)?;
    debug_assert_eq!(
        out.degree(),
        int(x1.n as i64) * x2.degree() + int(x2.n as i64) * x1.degree()
    );
    Ok(out)
}

/// Dual: the j-th space is the annihilator of `c_{s−j}` at jump `−γ_{s+1−j}`.
pub fn fil_dual(x: &FilteredSpace) -> FilteredSpace {
    let s = x.flag.len();
    let steps = (1..=s)
        .map(|j| {
            let jump = -x.flag[s - j].jump.clone();
            let space = if j == s {
                Vec::new()
            } else {
                x.flag[s - j - 1].basis.clone()
            };
            (jump, linalg::annihilator(&x.l, &space, x.n))
        })
        .collect();
    FilteredSpace::new(x.q, x.m, x.n, steps).expect("dual flag is valid")
}

/// A basis adapted to the flag, with the jump at which each vector enters.
fn adapted_basis(x: &FilteredSpace) -> Vec<(Rational, Vector)> {
    let mut out: Vec<(Rational, Vector)> = Vec::new();
    let mut current: Rows = Vec::new();
    for s in &x.flag {
        for v in &s.basis {
            let mut trial = current.clone();
            trial.push(v.clone());
            if linalg::rank(&x.l, &trial, x.n) > current.len() {
                current = trial;
                out.push((s.jump.clone(), v.clone()));
            }
        }
    }
    out
}

/// Non-decreasing sequences of length `r` over `0..n`, lexicographically.
pub fn multisets(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, r: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(n, r, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, r, 0, &mut Vec::new(), &mut out);
    out
}

/// Filtration spanned by products of adapted vectors, each weighted by the
/// sum of its factors' jumps.
fn power_flag(
    x: &FilteredSpace,
    dim: usize,
    index_sets: Vec<Vec<usize>>,
    product: impl Fn(&[&Vector]) -> Vector,
) -> Result<FilteredSpace> {
    let basis = adapted_basis(x);
    let mut by_weight: BTreeMap<Rational, Rows> = BTreeMap::new();
    for set in index_sets {
        let w: Rational = set.iter().map(|&i| basis[i].0.clone()).sum();
        let vs: Vec<&Vector> = set.iter().map(|&i| &basis[i].1).collect();
        by_weight.entry(w).or_default().push(product(&vs));
    }
    let weights: Vec<Rational> = by_weight.keys().cloned().collect();
    let cands = weights
        .iter()
        .map(|g| {
            let rows = by_weight.range(g..).flat_map(|(_, r)| r.iter().cloned()).collect();
            (g.clone(), rows)
        })
        .collect();
    FilteredSpace::from_candidates(x.q, x.m, dim, cands)
}

/// `Sym^r`, coordinates indexed by [`multisets`]`(n, r)`.
pub fn fil_sym(x: &FilteredSpace, r: usize) -> Result<FilteredSpace> {
    if r == 0 {
        return Err(Error::InvalidFiltration("Sym^0 is not supported".into()));
    }
    let monos = multisets(x.n, r);
    let index: HashMap<Vec<usize>, usize> = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let f = &x.l;
    let product = |vs: &[&Vector]| {
        let mut poly: HashMap<Vec<usize>, Elem> = HashMap::from([(Vec::new(), 1)]);
        for v in vs {
            let mut next: HashMap<Vec<usize>, Elem> = HashMap::new();
            for (mono, c) in &poly {
                for (i, &a) in v.iter().enumerate() {
                    if a == 0 {
                        continue;
                    }
                    let mut key = mono.clone();
                    let pos = key.partition_point(|&j| j <= i);
                    key.insert(pos, i);
                    let e = next.entry(key).or_insert(0);
                    *e = f.add(*e, f.mul(*c, a));
                }
            }
            poly = next;
        }
        let mut out = vec![0; monos.len()];
        for (mono, c) in poly {
            out[index[&mono]] = c;
        }
        out
    };
    power_flag(x, monos.len(), multisets(x.n, r), product)
}

/// `Λ^r`, coordinates indexed by `r`-subsets of `0..n` in lexicographic order.
pub fn fil_ext(x: &FilteredSpace, r: usize) -> Result<FilteredSpace> {
    if r == 0 || r > x.n {
        return Err(Error::InvalidFiltration(format!("Λ^{r} of a space of dimension {}", x.n)));
    }
    let subsets = linalg::combinations(x.n, r);
    let f = &x.l;
    let product = |vs: &[&Vector]| {
        subsets
            .iter()
            .map(|cols| {
                let minor: Rows = vs.iter().map(|v| cols.iter().map(|&c| v[c]).collect()).collect();
                determinant(f, minor)
            })
            .collect()
    };
    power_flag(x, subsets.len(), linalg::combinations(x.n, r), product)
}

fn determinant(f: &GaloisField, mut a: Rows) -> Elem {
    let n = a.len();
    let mut det = 1;
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| a[i][c] != 0) else {
            return 0;
        };
        if p != c {
            a.swap(p, c);
            det = f.neg(det);
        }
        det = f.mul(det, a[c][c]);
        let inv = f.inv(a[c][c]);
        for i in c + 1..n {
            let k = f.mul(a[i][c], inv);
            if k != 0 {
                for j in c..n {
                    a[i][j] = f.sub(a[i][j], f.mul(k, a[c][j]));
                }
            }
        }
    }
    det
}

/// The filtration `f` on the subspace lattice of `F_q^n`, read as a flag
/// over `ℓ = F_{q^m}`.
pub fn space_from_filtration(lat: &FiniteLattice, f: &Filtration, m: u32) -> Result<FilteredSpace> {
    let sd = lat
        .subspaces()
        .ok_or_else(|| Error::DimensionMismatch("expected a subspace lattice".into()))?;
    let (q, n) = (sd.field().order(), sd.ambient_dim());
    let (_, _, embed) = fields(q, m)?;
    let steps = f
        .steps()
        .map(|(c, g)| {
            let rows = sd.basis(c).iter().map(|r| r.iter().map(|&x| embed[x as usize]).collect()).collect();
            (g.clone(), rows)
        })
        .collect();
    FilteredSpace::new(q, m, n, steps)
}

/// The flag of `x` as a filtration on the subspace lattice of `F_q^n`; every
/// space must be defined over k.
pub fn filtration_from_space(lat: &FiniteLattice, x: &FilteredSpace) -> Result<Filtration> {
    let lat = subspace_lattice(x.q, x.n, Some(lat))?;
    let sd = lat.subspaces().unwrap();
    let mut back: HashMap<Elem, Elem> = HashMap::new();
    for (c, &e) in x.embed.iter().enumerate() {
        back.insert(e, c as Elem);
    }
    let mut steps = Vec::with_capacity(x.flag.len());
    for s in &x.flag {
        let rows: Option<Rows> = s
            .basis
            .iter()
            .map(|r| r.iter().map(|c| back.get(c).copied()).collect())
            .collect();
        let rows = rows.ok_or_else(|| Error::InvalidFiltration("flag space is not defined over k".into()))?;
        let e = sd.lookup(&rows).expect("every k-subspace is in the lattice");
        steps.push((s.jump.clone(), e));
    }
    Filtration::from_steps(&lat, steps)
}

/// Random invertible `n × n` matrix over `f`, as rows.
pub fn random_invertible(f: &GaloisField, n: usize, rng: &mut SplitMix64) -> Rows {
    loop {
        let rows: Rows = (0..n)
            .map(|_| (0..n).map(|_| rng.below(f.order() as u64) as Elem).collect())
            .collect();
        if linalg::rank(f, &rows, n) == n {
            return rows;
        }
    }
}

/// Random filtered space: the spans of the first `d_1 < … < d_s = n` rows of
/// a random invertible matrix over ℓ, with random decreasing jumps.
pub fn random_space(q: u32, m: u32, n: usize, rng: &mut SplitMix64) -> Result<FilteredSpace> {
    let (_, l, _) = fields(q, m)?;
    let rows = random_invertible(&l, n, rng);
    let mut dims: Vec<usize> = (1..n).filter(|_| rng.chance(1, 2)).collect();
    dims.push(n);
    let jumps = random_jumps(rng, dims.len());
    let steps = dims.iter().zip(jumps).map(|(&d, g)| (g, rows[..d].to_vec())).collect();
    FilteredSpace::new(q, m, n, steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    fn line_space(q: u32, m: u32, line: Vector) -> FilteredSpace {
        FilteredSpace::new(q, m, 2, vec![(int(1), vec![line]), (int(0), vec![vec![1, 0], vec![0, 1]])]).unwrap()
    }

    #[test]
    fn degree_examples() {
        let x = line_space(2, 1, vec![1, 0]);
        assert_eq!(fil_deg(&x, &[]), int(0));
        assert_eq!(fil_deg(&x, &[vec![1, 0]]), int(1));
        assert_eq!(fil_deg(&x, &[vec![1, 0], vec![0, 1]]), int(1));
        assert_eq!(x.degree(), int(1));
    }

    #[test]
    fn hn_over_the_base_field_is_the_flag() {
        let x = line_space(2, 1, vec![1, 1]);
        let (lat, hn) = fil_hn(&x).unwrap();
        assert_eq!(space_from_filtration(&lat, &hn.hn, 1).unwrap(), x);
    }

    #[test]
    fn non_rational_line_is_semistable() {
        // ℓ = F_4 with generator code 2; the line spanned by (1, ω) meets no k-line
        let x = line_space(2, 2, vec![1, 2]);
        let (lat, hn) = fil_hn(&x).unwrap();
        assert_eq!(hn.hn, Filtration::constant(&lat, rat(1, 2)));
    }

    #[test]
    fn tensor_of_trivial_flags() {
        let a = FilteredSpace::trivial(3, 1, 2, rat(1, 2)).unwrap();
        let b = FilteredSpace::trivial(3, 1, 3, rat(-2, 3)).unwrap();
        let t = fil_tensor(&a, &b).unwrap();
        assert_eq!(t.flag().len(), 1);
        assert_eq!(t.flag()[0].jump, rat(-1, 6));
        assert_eq!(t.n(), 6);
    }

    #[test]
    fn dual_is_an_involution() {
        let mut rng = SplitMix64::new(11);
        for _ in 0..20 {
            let x = random_space(2, 2, 3, &mut rng).unwrap();
            let d = fil_dual(&x);
            assert_eq!(d.degree(), -x.degree());
            assert_eq!(fil_dual(&d), x);
        }
    }

    #[test]
    fn power_degrees() {
        let mut rng = SplitMix64::new(5);
        for _ in 0..10 {
            let x = random_space(2, 2, 3, &mut rng).unwrap();
            let d = x.degree();
            // C(n+r−1, r−1) and C(n−1, r−1) for n = 3, r = 2
            assert_eq!(fil_sym(&x, 2).unwrap().degree(), int(4) * &d);
            assert_eq!(fil_ext(&x, 2).unwrap().degree(), int(2) * &d);
            assert_eq!(fil_ext(&x, 3).unwrap().degree(), d);
        }
    }

    #[test]
    fn determinant_small() {
        let f = GaloisField::with_order(3).unwrap();
        assert_eq!(determinant(&f, vec![vec![1, 2], vec![1, 1]]), 2); // 1 − 2 = −1
        assert_eq!(determinant(&f, vec![vec![1, 2], vec![2, 1]]), 0); // 1 − 4 = 0 mod 3
    }

    #[test]
    fn rejects_bad_flags() {
        let full = vec![vec![1, 0], vec![0, 1]];
        assert!(FilteredSpace::new(2, 1, 2, vec![(int(0), vec![vec![1, 0]])]).is_err());
        assert!(FilteredSpace::new(2, 1, 2, vec![(int(0), vec![vec![1, 0]]), (int(1), full.clone())]).is_err());
        assert!(FilteredSpace::new(2, 1, 2, vec![(int(1), full.clone()), (int(0), full)]).is_err());
    }
}
