//! Acceptance suite. Runs every criterion with exact arithmetic, prints one
//! PASS/FAIL line each, and exits non-zero if any fails.
//!
//! The checks recompute their claims from primitive operations (pairings,
//! degrees, interval enumeration) instead of trusting library summaries
//! such as certificates or compatibility reports.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rayon::prelude::*;

use modhn::algebra::laurent::{SeriesRing, DEFAULT_PRECISION};
use modhn::algebra::laurent_matrix::frobenius;
use modhn::algebra::rational::{int, le_plus_two_sqrt, rat};
use modhn::filtration::{dist2, geodesic, norm2, pairing};
use modhn::hn::{hn_greedy, hn_oracle, objective};
use modhn::instances::bun::{
    bun_deg, bun_degree_table, bun_dual, bun_hn_on, bun_quotient_deg, bun_tensor, busemann, random_lattice,
    rel_position, OLattice,
};
use modhn::instances::fil::{
    fil_dual, fil_hn_on, fil_tensor, filtration_from_space, random_space, space_from_filtration,
};
use modhn::instances::phi::{phi_hn_on, phi_tensor, PhiLattice};
use modhn::lattice::{
    check_degree, height_function, is_01_chain, random_maximal_chain, rank_from_chain, FiniteLattice, GradedLattice,
};
use modhn::random::{random_degree, random_filtration, random_filtration_on, random_sublattice};
use modhn::rng::{SplitMix64, DEFAULT_SEED};
use modhn::{Filtration, Rational};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Runs `n` independent cases in parallel; the first failure in index order wins.
fn cases<T: Send>(n: usize, seed: u64, f: impl Fn(usize, &mut SplitMix64) -> Result<T, String> + Sync) -> Result<Vec<T>, String> {
    let base = SplitMix64::new(seed);
    (0..n).into_par_iter().map(|i| f(i, &mut base.fork(i as u64))).collect()
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took <= limit, || format!("took {took:?}, limit {limit:?}"))
}

fn suite_lattices() -> Vec<FiniteLattice> {
    let mut out = Vec::new();
    for k in 1..=4 {
        out.push(FiniteLattice::boolean(k).unwrap());
    }
    for r in 1..=6 {
        out.push(FiniteLattice::chain(r).unwrap());
    }
    for n in 1..=3 {
        out.push(FiniteLattice::subspace(2, n).unwrap());
    }
    out.push(FiniteLattice::subspace(3, 2).unwrap());
    out
}

struct Instance {
    lattice: usize,
    deg: Vec<Rational>,
    hn: Filtration,
}

const INSTANCES: usize = 252;

fn oracle_instances(lattices: &[FiniteLattice], ranks: &[Vec<Rational>]) -> Result<Vec<Instance>, String> {
    cases(INSTANCES, DEFAULT_SEED, |i, rng| {
        let k = i % lattices.len();
        let (l, rank) = (&lattices[k], &ranks[k]);
        let deg = random_degree(l, rng);
        ensure(check_degree(l, &deg).is_none(), || format!("instance {i}: degree not supermodular"))?;
        ensure(deg.iter().all(|d| d.is_integer() && *d >= int(-5) && *d <= int(5)), || {
            format!("instance {i}: degree outside [-5, 5]")
        })?;
        let g = hn_greedy(l, rank, &deg).map_err(|e| format!("instance {i}: greedy: {e}"))?;
        let o = hn_oracle(l, rank, &deg).map_err(|e| format!("instance {i}: oracle: {e}"))?;
        ensure(g == o, || format!("instance {i}: greedy {} != oracle {}", g.describe(l), o.describe(l)))?;
        Ok(Instance { lattice: k, deg, hn: g })
    })
}

fn criterion_1(lattices: &[FiniteLattice], ranks: &[Vec<Rational>]) -> (Outcome, Vec<Instance>) {
    let start = Instant::now();
    let run = oracle_instances(lattices, ranks);
    match run {
        Ok(inst) => {
            let nontrivial = inst.iter().filter(|x| x.hn.jumps().len() > 1).count();
            let summary = within(start, Duration::from_secs(60)).map(|_| {
                format!("{} instances, {nontrivial} with more than one jump, {:?}", inst.len(), start.elapsed())
            });
            (summary, inst)
        }
        Err(e) => (Err(e), Vec::new()),
    }
}

/// `‖F‖² = ⟨⋆,F⟩`; each `[c_{i−1}, c_i]` semistable of slope `γ_i` by
/// enumerating the interval; 500 sampled filtrations dominated.
fn criterion_2(lattices: &[FiniteLattice], ranks: &[Vec<Rational>], inst: &[Instance]) -> Outcome {
    if inst.is_empty() {
        return Err("no instances from criterion 1".into());
    }
    let samples = 500;
    cases(inst.len(), DEFAULT_SEED ^ 2, |i, rng| {
        let x = &inst[i];
        let (l, rank, deg, hn) = (&lattices[x.lattice], &ranks[x.lattice], &x.deg, &x.hn);
        let star_f = hn.degree_ext(deg);
        ensure(norm2(rank, hn) == star_f, || format!("instance {i}: ‖F‖² != ⟨⋆,F⟩"))?;
        let chain = hn.chain();
        for (k, gamma) in hn.jumps().iter().enumerate() {
            let (lo, hi) = (chain[k], chain[k + 1]);
            for z in (0..l.len()).filter(|&z| l.leq(lo, z) && l.leq(z, hi)) {
                let excess = &deg[z] - &deg[lo] - gamma * (&rank[z] - &rank[lo]);
                ensure(excess <= Rational::zero(), || format!("instance {i}: piece {k} destabilized by {}", l.label(z)))?;
                ensure(z != hi || excess.is_zero(), || format!("instance {i}: piece {k} has the wrong slope"))?;
            }
        }
        let obj = objective(rank, deg, hn);
        for s in 0..samples {
            let f = random_filtration(l, rng);
            ensure(obj <= objective(rank, deg, &f), || format!("instance {i} sample {s}: objective not minimal"))?;
            ensure(f.degree_ext(deg) <= pairing(l, rank, hn, &f), || {
                format!("instance {i} sample {s}: ⟨⋆,f⟩ > ⟨F,f⟩ for f = {}", f.describe(l))
            })?;
        }
        Ok(())
    })
    .map(|v| format!("{} certificates, {} dominance samples each", v.len(), samples))
}

fn metric_lattices() -> Vec<FiniteLattice> {
    vec![
        FiniteLattice::boolean(3).unwrap(),
        FiniteLattice::subspace(2, 2).unwrap(),
        FiniteLattice::subspace(2, 3).unwrap(),
        FiniteLattice::chain(3).unwrap(),
    ]
}

fn criterion_3() -> Outcome {
    let ls = metric_lattices();
    let ranks: Vec<_> = ls.iter().map(|l| height_function(l).unwrap()).collect();
    let ts = [rat(0, 1), rat(1, 4), rat(1, 2), rat(3, 4), rat(1, 1)];
    let n = 1000;
    cases(n, DEFAULT_SEED ^ 3, |i, rng| {
        let k = i % ls.len();
        let (l, rank) = (&ls[k], &ranks[k]);
        let (f, g, h) = (random_filtration(l, rng), random_filtration(l, rng), random_filtration(l, rng));
        let t = &ts[i % ts.len()];
        let s = Rational::one() - t;
        let gt = geodesic(l, &g, &h, t).map_err(|e| e.to_string())?;
        let (dfg, dfh, dgh) = (dist2(l, rank, &f, &g), dist2(l, rank, &f, &h), dist2(l, rank, &g, &h));
        ensure(dist2(l, rank, &f, &gt) + t * &s * &dgh <= &s * &dfg + t * &dfh, || format!("sample {i}: four-point"))?;
        ensure(le_plus_two_sqrt(&dfh, &(&dfg + &dgh), &(&dfg * &dgh)), || format!("sample {i}: triangle"))?;
        ensure(dist2(l, rank, &g, &gt) == t * t * &dgh, || format!("sample {i}: geodesic law"))?;
        Ok(())
    })
    .map(|v| format!("{} samples", v.len()))
}

fn criterion_4() -> Outcome {
    let ls = metric_lattices();
    let ranks: Vec<_> = ls.iter().map(|l| height_function(l).unwrap()).collect();
    let n = 1000;
    let strict = cases(n, DEFAULT_SEED ^ 4, |i, rng| {
        let k = i % ls.len();
        let (l, rank) = (&ls[k], &ranks[k]);
        let (f, g, h) = (random_filtration(l, rng), random_filtration(l, rng), random_filtration(l, rng));
        let sum = g.add(l, &h);
        ensure(pairing(l, rank, &f, &sum) >= pairing(l, rank, &f, &g) + pairing(l, rank, &f, &h), || {
            format!("sample {i}: concavity")
        })?;
        let full = random_maximal_chain(l, rng);
        let c: Vec<usize> = full
            .iter()
            .enumerate()
            .filter(|&(j, _)| j == 0 || j + 1 == full.len() || rng.chance(1, 2))
            .map(|(_, &x)| x)
            .collect();
        let gr = GradedLattice::new(l, &c).map_err(|e| e.to_string())?;
        let (grl, gr_rank) = (gr.lattice(), gr.induced(rank));
        let (fc, gc) = (f.push_rc(l, &gr), g.push_rc(l, &gr));
        let (p, pc) = (pairing(l, rank, &f, &g), pairing(grl, &gr_rank, &fc, &gc));
        ensure(p <= pc, || format!("sample {i}: r_C pairing"))?;
        ensure(norm2(rank, &f) == norm2(&gr_rank, &fc), || format!("sample {i}: r_C norm"))?;
        // 1-Lipschitz, compared through squares
        ensure(dist2(grl, &gr_rank, &fc, &gc) <= dist2(l, rank, &f, &g), || format!("sample {i}: Lipschitz"))?;
        let (a, b) = (random_filtration_on(l, &full, rng), random_filtration_on(l, &full, rng));
        let eq = pairing(l, rank, &a, &b) == pairing(grl, &gr_rank, &a.push_rc(l, &gr), &b.push_rc(l, &gr));
        ensure(eq, || format!("sample {i}: r_C equality on a common chain"))?;
        Ok(p < pc)
    })?;
    let gaps = strict.iter().filter(|&&s| s).count();
    Ok(format!("{n} triples, {gaps} with strict r_C inequality"))
}

/// One Fil trial: HN of the tensor product against the tensor of the HNs,
/// and HN of the dual against the dual of the HN.
fn fil_trial(
    m: u32,
    (n1, n2): (usize, usize),
    lats: (&FiniteLattice, &FiniteLattice, &FiniteLattice),
    rng: &mut SplitMix64,
) -> Result<bool, String> {
    let err = |e: modhn::Error| e.to_string();
    let (l1, l2, l12) = lats;
    let x1 = random_space(2, m, n1, rng).map_err(err)?;
    let x2 = random_space(2, m, n2, rng).map_err(err)?;
    let h1 = fil_hn_on(&x1, l1).map_err(err)?.hn;
    let h2 = fil_hn_on(&x2, l2).map_err(err)?.hn;
    let lhs = fil_hn_on(&fil_tensor(&x1, &x2).map_err(err)?, l12).map_err(err)?.hn;
    let s1 = space_from_filtration(l1, &h1, 1).map_err(err)?;
    let s2 = space_from_filtration(l2, &h2, 1).map_err(err)?;
    let rhs = filtration_from_space(l12, &fil_tensor(&s1, &s2).map_err(err)?).map_err(err)?;
    ensure(lhs == rhs, || format!("tensor: {} != {}", lhs.describe(l12), rhs.describe(l12)))?;
    let dual_hn = fil_hn_on(&fil_dual(&x1), l1).map_err(err)?.hn;
    let expected = filtration_from_space(l1, &fil_dual(&s1)).map_err(err)?;
    ensure(dual_hn == expected, || format!("dual: {} != {}", dual_hn.describe(l1), expected.describe(l1)))?;
    Ok(h1.jumps().len() > 1 && h2.jumps().len() > 1)
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let trials = 50;
    let mut report = Vec::new();
    for m in [1, 2] {
        for (n1, n2) in [(2, 2), (2, 3)] {
            let l1 = FiniteLattice::subspace(2, n1).unwrap();
            let l2 = FiniteLattice::subspace(2, n2).unwrap();
            let l12 = FiniteLattice::subspace(2, n1 * n2).unwrap();
            let seed = DEFAULT_SEED ^ (5 + 16 * m as u64 + n2 as u64);
            let both = cases(trials, seed, |i, rng| {
                fil_trial(m, (n1, n2), (&l1, &l2, &l12), rng).map_err(|e| format!("m={m} ({n1},{n2}) trial {i}: {e}"))
            })?;
            report.push(format!("m={m} ({n1},{n2}): {}/{trials} with both factors unstable", both.iter().filter(|&&b| b).count()));
        }
    }
    within(start, Duration::from_secs(120))?;
    Ok(format!("{trials} tensor and dual trials per case; {}", report.join("; ")))
}

fn criterion_6() -> Outcome {
    let ring = |q: u32| SeriesRing::with_order(q, DEFAULT_PRECISION).unwrap();
    let err = |e: modhn::Error| e.to_string();
    let n_inst = 120;
    // cocycle, short exact sequences and Frobenius scaling on random lattices
    cases(n_inst, DEFAULT_SEED ^ 6, |i, rng| {
        let q = [2, 3, 4][i % 3];
        let n = 1 + (i / 3) % 3;
        let r = ring(q);
        let ls: Vec<OLattice> = (0..3).map(|_| random_lattice(&r, n, rng)).collect::<Result<_, _>>().map_err(err)?;
        let nu = |a: &OLattice, b: &OLattice| rel_position(a, b).map(|p| p.nu).map_err(err);
        ensure(nu(&ls[0], &ls[2])? == nu(&ls[0], &ls[1])? + nu(&ls[1], &ls[2])?, || format!("lattice {i}: cocycle"))?;
        let phi = |l: &OLattice| OLattice::new(r.clone(), frobenius(&r, l.basis())).map_err(err);
        let (p0, p1) = (phi(&ls[0])?, phi(&ls[1])?);
        ensure(nu(&p0, &p1)? == q as i64 * nu(&ls[0], &ls[1])?, || format!("lattice {i}: Frobenius scaling"))?;
        let lat = FiniteLattice::subspace(q, n).map_err(err)?;
        let sd = lat.subspaces().unwrap();
        let total = bun_deg(&ls[0], sd.basis(lat.top())).map_err(err)?;
        // whole-space degree straight from the relative position to V⊗O
        let standard = OLattice::standard(r.clone(), n).map_err(err)?;
        ensure(total == int(nu(&standard, &ls[0])?), || format!("lattice {i}: deg(V) != ν(V⊗O, L)"))?;
        for w in 0..lat.len() {
            let sub = bun_deg(&ls[0], sd.basis(w)).map_err(err)?;
            let quo = bun_quotient_deg(&ls[0], sd.basis(w)).map_err(err)?;
            ensure(total == &sub + &quo, || format!("lattice {i}: SES additivity fails at {}", lat.label(w)))?;
        }
        Ok(())
    })?;
    // Busemann pairing from the standard lattice against graded degrees
    let r2 = ring(2);
    let lat = FiniteLattice::subspace(2, 3).unwrap();
    let standard = OLattice::standard(r2.clone(), 3).unwrap();
    cases(100, DEFAULT_SEED ^ 66, |i, rng| {
        let l = random_lattice(&r2, 3, rng).map_err(err)?;
        let f = random_filtration(&lat, rng);
        let deg = bun_degree_table(&l, &lat).map_err(err)?;
        let chain = f.chain();
        let graded: Rational =
            f.jumps().iter().enumerate().map(|(k, g)| g * (&deg[chain[k + 1]] - &deg[chain[k]])).sum();
        let b = busemann(&standard, &l, &lat, &f).map_err(err)?;
        ensure(b == graded, || format!("busemann trial {i}: {b} != {graded}"))
    })?;
    // tensor compatibility, bun and φ
    let l2 = FiniteLattice::subspace(2, 2).unwrap();
    let l4 = FiniteLattice::subspace(2, 4).unwrap();
    let trials = 30;
    let mut unstable = [0usize; 2];
    for (kind, count) in unstable.iter_mut().enumerate() {
        let flags = cases(trials, DEFAULT_SEED ^ (600 + kind as u64), |i, rng| {
            let a = random_lattice(&r2, 2, rng).map_err(err)?;
            let b = random_lattice(&r2, 2, rng).map_err(err)?;
            let (ha, hb, lhs) = if kind == 0 {
                let t = bun_tensor(&a, &b).map_err(err)?;
                (bun_hn_on(&a, &l2), bun_hn_on(&b, &l2), bun_hn_on(&t, &l4))
            } else {
                let (a, b) = (PhiLattice::new(a.clone()), PhiLattice::new(b));
                let t = phi_tensor(&a, &b).map_err(err)?;
                (phi_hn_on(&a, &l2), phi_hn_on(&b, &l2), phi_hn_on(&t, &l4))
            };
            let (ha, hb, lhs) = (ha.map_err(err)?.hn, hb.map_err(err)?.hn, lhs.map_err(err)?.hn);
            let sa = space_from_filtration(&l2, &ha, 1).map_err(err)?;
            let sb = space_from_filtration(&l2, &hb, 1).map_err(err)?;
            let rhs = filtration_from_space(&l4, &fil_tensor(&sa, &sb).map_err(err)?).map_err(err)?;
            ensure(lhs == rhs, || format!("{} trial {i}: {} != {}", ["bun", "phi"][kind], lhs.describe(&l4), rhs.describe(&l4)))?;
            if kind == 0 {
                let dual = bun_hn_on(&bun_dual(&a).map_err(err)?, &l2).map_err(err)?.hn;
                let expected = filtration_from_space(&l2, &fil_dual(&sa)).map_err(err)?;
                ensure(dual == expected, || format!("bun dual trial {i}"))?;
            }
            Ok(ha.jumps().len() > 1 || hb.jumps().len() > 1)
        })?;
        *count = flags.iter().filter(|&&u| u).count();
    }
    Ok(format!(
        "{n_inst} lattices (cocycle, SES, Frobenius); 100 Busemann trials; tensor {trials}+{trials} trials ({} bun, {} phi with an unstable factor)",
        unstable[0], unstable[1]
    ))
}

fn criterion_7() -> Outcome {
    let ls = metric_lattices();
    let ranks: Vec<_> = ls.iter().map(|l| height_function(l).unwrap()).collect();
    let n = 240;
    let proper = cases(n, DEFAULT_SEED ^ 7, |i, rng| {
        let k = i % ls.len();
        let (l, rank) = (&ls[k], &ranks[k]);
        let err = |e: modhn::Error| format!("sample {i}: {e}");
        let f = random_filtration(l, rng);
        let ys = random_sublattice(l, rng);
        let (y, map) = l.sublattice(&ys).map_err(err)?;
        let p = modhn::hn::convex_project(l, rank, &f, &ys).map_err(err)?;
        ensure(p.chain().iter().all(|c| ys.contains(c)), || format!("sample {i}: projection leaves F(Y)"))?;
        let g = random_filtration(&y, rng).transport(l, &map).map_err(err)?;
        ensure(pairing(l, rank, &f, &g) <= pairing(l, rank, &p, &g), || format!("sample {i}: ⟨f,g⟩ > ⟨p(f),g⟩"))?;
        ensure(pairing(l, rank, &f, &p) == norm2(rank, &p), || format!("sample {i}: no equality at g = p(f)"))?;
        let pg = modhn::hn::convex_project(l, rank, &g, &ys).map_err(err)?;
        ensure(pg == g, || format!("sample {i}: projection moves a point of F(Y)"))?;
        Ok(p != f)
    })?;
    Ok(format!("{n} samples, {} with p(f) != f", proper.iter().filter(|&&m| m).count()))
}

fn criterion_8() -> Outcome {
    let n5 = FiniteLattice::pentagon();
    let (a, b, c) = n5.check_modular().ok_or("pentagon accepted as modular")?;
    ensure(n5.leq(a, c) && n5.meet(n5.join(a, b), c) != n5.join(a, n5.meet(b, c)), || "bad pentagon witness".into())?;
    ensure(height_function(&n5).is_err(), || "pentagon admits a height rank".into())?;
    let mut ls = Vec::new();
    for k in 0..=5 {
        ls.push(FiniteLattice::boolean(k).unwrap());
    }
    for r in 0..=8 {
        ls.push(FiniteLattice::chain(r).unwrap());
    }
    for (q, n) in [(2, 1), (2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (4, 2), (5, 2)] {
        ls.push(FiniteLattice::subspace(q, n).unwrap());
    }
    ls.push(FiniteLattice::diamond());
    let mut rng = SplitMix64::new(DEFAULT_SEED ^ 8);
    for l in &ls {
        ensure(l.check_modular().is_none(), || format!("{} elements: rejected", l.len()))?;
        let rank = height_function(l).map_err(|e| e.to_string())?;
        if let Some(sd) = l.subspaces() {
            ensure((0..l.len()).all(|x| rank[x] == int(sd.dim(x) as i64)), || "height differs from dimension".into())?;
        }
        for _ in 0..5 {
            let chain = random_maximal_chain(l, &mut rng);
            debug_assert!(is_01_chain(l, &chain));
            let back = rank_from_chain(l, &rank, &chain).map_err(|e| e.to_string())?;
            ensure(back == rank, || format!("reconstruction differs on a lattice of {} elements", l.len()))?;
        }
    }
    Ok(format!("pentagon rejected at ({}, {}, {}); {} modular lattices accepted and reconstructed", n5.label(a), n5.label(b), n5.label(c), ls.len()))
}

fn main() -> ExitCode {
    let lattices = suite_lattices();
    let ranks: Vec<Vec<Rational>> = lattices.iter().map(|l| height_function(l).unwrap()).collect();
    let (first, instances) = criterion_1(&lattices, &ranks);
    let mut results = vec![("oracle equivalence", first)];
    results.push(("HN certificate", criterion_2(&lattices, &ranks, &instances)));
    results.push(("CAT(0) inequalities", criterion_3()));
    results.push(("pairing laws", criterion_4()));
    results.push(("Fil tensor and dual compatibility", criterion_5()));
    results.push(("Bun and phi suite", criterion_6()));
    results.push(("convex projection", criterion_7()));
    results.push(("modularity detection", criterion_8()));
    let mut failed = 0;
    for (k, (name, r)) in results.iter().enumerate() {
        match r {
            Ok(s) => println!("criterion {}: PASS {name}: {s}", k + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {e}", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
