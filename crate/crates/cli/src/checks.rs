//! Randomized property drivers behind `modhn check`. Each returns a
//! [`CheckOutcome`] listing every failure with an exact witness.

use num_traits::{One, Zero};
use rayon::prelude::*;

use modhn::algebra::laurent::SeriesRing;
use modhn::algebra::rational::{format_rational, le_plus_two_sqrt, rat};
use modhn::filtration::{dist2, geodesic, norm2, pairing};
use modhn::hn::{hn_greedy, hn_oracle};
use modhn::instances::bun::{bun_degree_table, busemann, random_lattice, OLattice};
use modhn::instances::compat::{dual_compat_check, tensor_compat_check, CompatParams, CompatReport, InstanceKind};
use modhn::instances::{check_dim, check_q, MAX_HN_DIM};
use modhn::io::InstanceObject;
use modhn::lattice::{check_degree, check_rank, height_function, random_maximal_chain, FiniteLattice, GradedLattice};
use modhn::random::{random_degree, random_filtration, random_filtration_on};
use modhn::rng::SplitMix64;
use modhn::{Filtration, Rational, Result};

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: String,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl CheckOutcome {
    fn new(name: impl Into<String>, cases: usize, failures: Vec<String>) -> Self {
        Self { name: name.into(), cases, failures }
    }

    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs `case` for indices `0..n` in parallel, each with its own forked
/// stream; failures come back in index order.
fn sampled(n: usize, seed: u64, case: impl Fn(usize, &mut SplitMix64) -> Result<Vec<String>> + Sync) -> Result<Vec<String>> {
    let base = SplitMix64::new(seed);
    let out: Vec<Vec<String>> =
        (0..n).into_par_iter().map(|i| case(i, &mut base.fork(i as u64))).collect::<Result<_>>()?;
    Ok(out.into_iter().flatten().collect())
}

fn fmt(r: &Rational) -> String {
    format_rational(r)
}

/// Lattice, rank (and degree, if given) axioms; optionally the degree
/// function of an instance object.
pub fn axioms(
    l: &FiniteLattice,
    rank: &[Rational],
    deg: Option<&[Rational]>,
    instance: Option<(&InstanceObject, &FiniteLattice)>,
) -> Result<CheckOutcome> {
    let mut failures = Vec::new();
    if let Err(e) = l.check_axioms() {
        failures.push(format!("lattice: {e}"));
    }
    if let Some((a, b, c)) = l.check_modular() {
        failures.push(format!("not modular at ({}, {}, {})", l.label(a), l.label(b), l.label(c)));
    }
    if let Some(v) = check_rank(l, rank) {
        failures.push(format!("rank: {:?} at ({}, {})", v.axiom, l.label(v.a), l.label(v.b)));
    }
    if let Some(d) = deg {
        if let Some(v) = check_degree(l, d) {
            failures.push(format!("deg: {:?} at ({}, {})", v.axiom, l.label(v.a), l.label(v.b)));
        }
    }
    if let Some((x, lat)) = instance {
        let d = instance_degrees(x, lat)?;
        if let Some(v) = check_degree(lat, &d) {
            failures.push(format!("instance deg: {:?} at ({}, {})", v.axiom, lat.label(v.a), lat.label(v.b)));
        }
    }
    Ok(CheckOutcome::new("axioms", 1, failures))
}

pub fn instance_degrees(x: &InstanceObject, lat: &FiniteLattice) -> Result<Vec<Rational>> {
    use modhn::instances::{fil::fil_degree_table, phi::phi_degree_table};
    match x {
        InstanceObject::Fil(s) => fil_degree_table(s, lat),
        InstanceObject::Bun(b) => bun_degree_table(b, lat),
        InstanceObject::Phi(p) => phi_degree_table(p, lat),
    }
}

const TS: [(i64, i64); 5] = [(0, 1), (1, 4), (1, 2), (3, 4), (1, 1)];

/// Four-point inequality, triangle inequality and the geodesic law.
pub fn cat0(l: &FiniteLattice, rank: &[Rational], samples: usize, seed: u64) -> Result<CheckOutcome> {
    let failures = sampled(samples, seed, |i, rng| {
        let (f, g, h) = (random_filtration(l, rng), random_filtration(l, rng), random_filtration(l, rng));
        let (tn, td) = TS[rng.index(TS.len())];
        let t = rat(tn, td);
        let gt = geodesic(l, &g, &h, &t)?;
        let (dfg, dfh, dgh) = (dist2(l, rank, &f, &g), dist2(l, rank, &f, &h), dist2(l, rank, &g, &h));
        let s = Rational::one() - &t;
        let ctx = || format!("f = {}; g = {}; h = {}; t = {}", f.describe(l), g.describe(l), h.describe(l), fmt(&t));
        let mut out = Vec::new();
        let lhs = dist2(l, rank, &f, &gt) + &t * &s * &dgh;
        let rhs = &s * &dfg + &t * &dfh;
        if lhs > rhs {
            out.push(format!("sample {i}: four-point {} > {}; {}", fmt(&lhs), fmt(&rhs), ctx()));
        }
        if !le_plus_two_sqrt(&dfh, &(&dfg + &dgh), &(&dfg * &dgh)) {
            out.push(format!("sample {i}: triangle d2(f,h) = {}, d2(f,g) = {}, d2(g,h) = {}; {}", fmt(&dfh), fmt(&dfg), fmt(&dgh), ctx()));
        }
        let geo = dist2(l, rank, &g, &gt);
        if geo != &t * &t * &dgh {
            out.push(format!("sample {i}: geodesic d2(g,g_t) = {} != t²·{}; {}", fmt(&geo), fmt(&dgh), ctx()));
        }
        Ok(out)
    })?;
    Ok(CheckOutcome::new("cat0", samples, failures))
}

/// Concavity of the pairing and the `r_C` laws: `⟨f,g⟩ ≤ ⟨r_C f, r_C g⟩`
/// with equality on a common chain through `C`, `‖r_C f‖ = ‖f‖`, and
/// `d(r_C f, r_C g) ≤ d(f, g)`.
pub fn concavity(l: &FiniteLattice, rank: &[Rational], samples: usize, seed: u64) -> Result<CheckOutcome> {
    let failures = sampled(samples, seed, |i, rng| {
        let mut out = Vec::new();
        let (f, g, h) = (random_filtration(l, rng), random_filtration(l, rng), random_filtration(l, rng));
        let lhs = pairing(l, rank, &f, &g.add(l, &h));
        let rhs = pairing(l, rank, &f, &g) + pairing(l, rank, &f, &h);
        if lhs < rhs {
            out.push(format!(
                "sample {i}: concavity {} < {}; f = {}; g = {}; h = {}",
                fmt(&lhs),
                fmt(&rhs),
                f.describe(l),
                g.describe(l),
                h.describe(l)
            ));
        }
        let full = random_maximal_chain(l, rng);
        let last = full.len() - 1;
        let c: Vec<usize> = full
            .iter()
            .enumerate()
            .filter(|&(k, _)| k == 0 || k == last || rng.chance(1, 2))
            .map(|(_, &x)| x)
            .collect();
        let gr = GradedLattice::new(l, &c)?;
        let grl = gr.lattice();
        let gr_rank = gr.induced(rank);
        let (fc, gc) = (f.push_rc(l, &gr), g.push_rc(l, &gr));
        let (p, pc) = (pairing(l, rank, &f, &g), pairing(grl, &gr_rank, &fc, &gc));
        if p > pc {
            out.push(format!("sample {i}: r_C pairing {} > {}", fmt(&p), fmt(&pc)));
        }
        if norm2(rank, &f) != norm2(&gr_rank, &fc) {
            out.push(format!("sample {i}: ‖r_C f‖² != ‖f‖² for f = {}", f.describe(l)));
        }
        if dist2(grl, &gr_rank, &fc, &gc) > dist2(l, rank, &f, &g) {
            out.push(format!("sample {i}: r_C is not 1-Lipschitz on f = {}, g = {}", f.describe(l), g.describe(l)));
        }
        let (a, b) = (random_filtration_on(l, &full, rng), random_filtration_on(l, &full, rng));
        let (ac, bc) = (a.push_rc(l, &gr), b.push_rc(l, &gr));
        let (p, pc) = (pairing(l, rank, &a, &b), pairing(grl, &gr_rank, &ac, &bc));
        if p != pc {
            out.push(format!("sample {i}: r_C pairing on a common chain {} != {}", fmt(&p), fmt(&pc)));
        }
        Ok(out)
    })?;
    Ok(CheckOutcome::new("concavity", samples, failures))
}

/// The lattices of the oracle comparison suite.
pub fn oracle_lattices() -> Result<Vec<FiniteLattice>> {
    let mut out = Vec::new();
    for k in 1..=4 {
        out.push(FiniteLattice::boolean(k)?);
    }
    for r in 1..=6 {
        out.push(FiniteLattice::chain(r)?);
    }
    for n in 1..=3 {
        out.push(FiniteLattice::subspace(2, n)?);
    }
    out.push(FiniteLattice::subspace(3, 2)?);
    Ok(out)
}

/// Greedy against the chamber oracle on random supermodular degrees.
pub fn oracle(lattices: &[FiniteLattice], trials: usize, seed: u64) -> Result<CheckOutcome> {
    let ranks: Vec<Vec<Rational>> = lattices.iter().map(height_function).collect::<Result<_>>()?;
    let failures = sampled(trials, seed, |i, rng| {
        let k = i % lattices.len();
        let (l, rank) = (&lattices[k], &ranks[k]);
        let deg = random_degree(l, rng);
        let g = hn_greedy(l, rank, &deg)?;
        let o = hn_oracle(l, rank, &deg)?;
        Ok(if g == o {
            vec![]
        } else {
            vec![format!(
                "trial {i}: greedy {} != oracle {}; deg = [{}]",
                g.describe(l),
                o.describe(l),
                deg.iter().map(fmt).collect::<Vec<_>>().join(", ")
            )]
        })
    })?;
    Ok(CheckOutcome::new("oracle", trials, failures))
}

fn compat_failures(r: &CompatReport) -> Vec<String> {
    r.mismatches
        .iter()
        .map(|m| format!("{} {} trial {}: expected {}, found {}", r.kind, r.check, m.trial, m.expected, m.found))
        .collect()
}

/// Tensor and dual compatibility of HN filtrations for each kind.
pub fn tensor(kinds: &[InstanceKind], params: &CompatParams, trials: usize, seed: u64) -> Result<CheckOutcome> {
    let mut failures = Vec::new();
    let mut cases = 0;
    for &kind in kinds {
        let t = tensor_compat_check(kind, params, trials, seed)?;
        let d = dual_compat_check(kind, params, trials, seed)?;
        cases += t.trials + d.trials;
        failures.extend(compat_failures(&t));
        failures.extend(compat_failures(&d));
    }
    Ok(CheckOutcome::new("tensor", cases, failures))
}

/// Base-point cocycle of the Busemann pairing and its relation to degrees.
pub fn busemann_check(q: u32, n: usize, precision: usize, trials: usize, seed: u64) -> Result<CheckOutcome> {
    check_q(q)?;
    check_dim("dimension", n, MAX_HN_DIM)?;
    let ring = SeriesRing::with_order(q, precision)?;
    let lat = FiniteLattice::subspace(q, n)?;
    let standard = OLattice::standard(ring.clone(), n)?;
    let failures = sampled(trials, seed, |i, rng| {
        let l1 = random_lattice(&ring, n, rng)?;
        let l2 = random_lattice(&ring, n, rng)?;
        let l3 = random_lattice(&ring, n, rng)?;
        let f: Filtration = random_filtration(&lat, rng);
        let mut out = Vec::new();
        let b12 = busemann(&l1, &l2, &lat, &f)?;
        let b23 = busemann(&l2, &l3, &lat, &f)?;
        let b13 = busemann(&l1, &l3, &lat, &f)?;
        if b13 != &b12 + &b23 {
            out.push(format!("trial {i}: cocycle {} != {} + {} for f = {}", fmt(&b13), fmt(&b12), fmt(&b23), f.describe(&lat)));
        }
        let base = busemann(&standard, &l1, &lat, &f)?;
        let expect = f.degree_ext(&bun_degree_table(&l1, &lat)?);
        if base != expect {
            out.push(format!("trial {i}: busemann from V⊗O {} != Σγ·deg Gr {}", fmt(&base), fmt(&expect)));
        }
        let own = busemann(&l1, &l1, &lat, &f)?;
        if !own.is_zero() {
            out.push(format!("trial {i}: busemann(L, L) = {}", fmt(&own)));
        }
        Ok(out)
    })?;
    Ok(CheckOutcome::new("busemann", trials, failures))
}
