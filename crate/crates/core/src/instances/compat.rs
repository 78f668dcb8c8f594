//! Randomized checks that HN filtrations commute with tensor products and
//! duals, and the morphism degree inequality.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::bun::{bun_dual, bun_hn_on, bun_tensor, random_lattice, OLattice};
use super::fil::{
    fil_dual, fil_hn_on, fil_tensor, filtration_from_space, random_space, space_from_filtration, FilteredSpace,
};
use super::phi::{phi_dual, phi_hn_on, phi_tensor, PhiLattice};
use super::{check_dim, check_q, MAX_BUN_TENSOR_DIM, MAX_FIL_TENSOR_DIM, MAX_HN_DIM};
use crate::algebra::laurent::{SeriesRing, DEFAULT_PRECISION};
use crate::algebra::linalg;
use crate::algebra::rational::Rational;
use crate::error::{Error, Result};
use crate::filtration::Filtration;
use crate::lattice::FiniteLattice;
use crate::rng::SplitMix64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InstanceKind {
    Fil,
    Bun,
    Phi,
}

impl FromStr for InstanceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fil" => Ok(Self::Fil),
            "bun" => Ok(Self::Bun),
            "phi" => Ok(Self::Phi),
            _ => Err(Error::Parse(format!("unknown instance kind {s:?} (fil, bun, phi)"))),
        }
    }
}

impl fmt::Display for InstanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Fil => "fil",
            Self::Bun => "bun",
            Self::Phi => "phi",
        })
    }
}

/// Sizes for random objects. `m` only matters for `fil`, `precision` only
/// for `bun` and `phi`.
#[derive(Debug, Clone, Serialize)]
pub struct CompatParams {
    pub q: u32,
    pub m: u32,
    pub n1: usize,
    pub n2: usize,
    pub precision: usize,
}

impl Default for CompatParams {
    fn default() -> Self {
        Self { q: 2, m: 2, n1: 2, n2: 2, precision: DEFAULT_PRECISION }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Mismatch {
    pub trial: usize,
    pub expected: String,
    pub found: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompatReport {
    pub kind: InstanceKind,
    pub check: &'static str,
    pub params: CompatParams,
    pub trials: usize,
    pub seed: u64,
    pub mismatches: Vec<Mismatch>,
}

impl CompatReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// A random object of one of the three kinds.
#[derive(Debug, Clone)]
enum Object {
    Fil(FilteredSpace),
    Bun(OLattice),
    Phi(PhiLattice),
}

impl Object {
    fn random(kind: InstanceKind, p: &CompatParams, n: usize, rng: &mut SplitMix64) -> Result<Self> {
        Ok(match kind {
            InstanceKind::Fil => Object::Fil(random_space(p.q, p.m, n, rng)?),
            InstanceKind::Bun | InstanceKind::Phi => {
                let ring = SeriesRing::with_order(p.q, p.precision)?;
                let l = random_lattice(&ring, n, rng)?;
                if kind == InstanceKind::Bun {
                    Object::Bun(l)
                } else {
                    Object::Phi(PhiLattice::new(l))
                }
            }
        })
    }

    fn hn(&self, lat: &FiniteLattice) -> Result<Filtration> {
        Ok(match self {
            Object::Fil(x) => fil_hn_on(x, lat)?.hn,
            Object::Bun(l) => bun_hn_on(l, lat)?.hn,
            Object::Phi(l) => phi_hn_on(l, lat)?.hn,
        })
    }

    fn tensor(&self, other: &Object) -> Result<Object> {
        Ok(match (self, other) {
            (Object::Fil(a), Object::Fil(b)) => Object::Fil(fil_tensor(a, b)?),
            (Object::Bun(a), Object::Bun(b)) => Object::Bun(bun_tensor(a, b)?),
            (Object::Phi(a), Object::Phi(b)) => Object::Phi(phi_tensor(a, b)?),
            _ => unreachable!("tensor of objects of different kinds"),
        })
    }

    fn dual(&self) -> Result<Object> {
        Ok(match self {
            Object::Fil(a) => Object::Fil(fil_dual(a)),
            Object::Bun(a) => Object::Bun(bun_dual(a)?),
            Object::Phi(a) => Object::Phi(phi_dual(a)?),
        })
    }
}

/// Tensor product of two filtrations on subspace lattices, as a filtration
/// on the subspace lattice of the tensor space `lat12`.
pub fn tensor_filtrations(
    lat1: &FiniteLattice,
    f1: &Filtration,
    lat2: &FiniteLattice,
    f2: &Filtration,
    lat12: &FiniteLattice,
) -> Result<Filtration> {
    let s1 = space_from_filtration(lat1, f1, 1)?;
    let s2 = space_from_filtration(lat2, f2, 1)?;
    filtration_from_space(lat12, &fil_tensor(&s1, &s2)?)
}

/// Dual filtration: jumps negated, subspaces replaced by annihilators.
pub fn dual_filtration(lat: &FiniteLattice, f: &Filtration) -> Result<Filtration> {
    filtration_from_space(lat, &fil_dual(&space_from_filtration(lat, f, 1)?))
}

fn guards(kind: InstanceKind, p: &CompatParams, dims: usize) -> Result<()> {
    check_q(p.q)?;
    let max = match kind {
        InstanceKind::Fil => MAX_FIL_TENSOR_DIM,
        _ => MAX_BUN_TENSOR_DIM,
    };
    check_dim("tensor dimension", dims, max)
}

fn run_trials(
    trials: usize,
    seed: u64,
    trial: impl Fn(usize, &mut SplitMix64) -> Result<Option<Mismatch>> + Sync,
) -> Result<Vec<Mismatch>> {
    let base = SplitMix64::new(seed);
    let out: Vec<Option<Mismatch>> = (0..trials)
        .into_par_iter()
        .map(|i| trial(i, &mut base.fork(i as u64)))
        .collect::<Result<_>>()?;
    Ok(out.into_iter().flatten().collect())
}

/// For random pairs `(x₁, x₂)`, compares `F_HN(x₁ ⊗ x₂)` with
/// `F_HN(x₁) ⊗ F_HN(x₂)` on the subspace lattice of the tensor space.
pub fn tensor_compat_check(kind: InstanceKind, params: &CompatParams, trials: usize, seed: u64) -> Result<CompatReport> {
    guards(kind, params, params.n1 * params.n2)?;
    let lat1 = FiniteLattice::subspace(params.q, params.n1)?;
    let lat2 = FiniteLattice::subspace(params.q, params.n2)?;
    let lat12 = FiniteLattice::subspace(params.q, params.n1 * params.n2)?;
    let mismatches = run_trials(trials, seed, |i, rng| {
        let x1 = Object::random(kind, params, params.n1, rng)?;
        let x2 = Object::random(kind, params, params.n2, rng)?;
        let found = x1.tensor(&x2)?.hn(&lat12)?;
        let expected = tensor_filtrations(&lat1, &x1.hn(&lat1)?, &lat2, &x2.hn(&lat2)?, &lat12)?;
        Ok((found != expected).then(|| Mismatch {
            trial: i,
            expected: expected.describe(&lat12),
            found: found.describe(&lat12),
        }))
    })?;
    Ok(CompatReport { kind, check: "tensor", params: params.clone(), trials, seed, mismatches })
}

/// For random `x` of dimension `n1`, compares `F_HN(x*)` with the dual of
/// `F_HN(x)`.
pub fn dual_compat_check(kind: InstanceKind, params: &CompatParams, trials: usize, seed: u64) -> Result<CompatReport> {
    check_q(params.q)?;
    let max = if kind == InstanceKind::Fil { MAX_FIL_TENSOR_DIM } else { MAX_HN_DIM };
    check_dim("dimension", params.n1, max)?;
    let lat = FiniteLattice::subspace(params.q, params.n1)?;
    let mismatches = run_trials(trials, seed, |i, rng| {
        let x = Object::random(kind, params, params.n1, rng)?;
        let found = x.dual()?.hn(&lat)?;
        let expected = dual_filtration(&lat, &x.hn(&lat)?)?;
        Ok((found != expected).then(|| Mismatch {
            trial: i,
            expected: expected.describe(&lat),
            found: found.describe(&lat),
        }))
    })?;
    Ok(CompatReport { kind, check: "dual", params: params.clone(), trials, seed, mismatches })
}

/// Whether `x(γ) ⊆ y(γ)` for every γ, i.e. the identity of `V` is a
/// morphism `(V, x) → (V, y)`.
pub fn fil_is_dominated(x: &FilteredSpace, y: &FilteredSpace) -> bool {
    if x.q() != y.q() || x.m() != y.m() || x.n() != y.n() {
        return false;
    }
    let f = x.ext_field();
    let at = |s: &FilteredSpace, g: &Rational| -> Vec<Vec<u32>> {
        s.flag().iter().rfind(|st| &st.jump >= g).map(|st| st.basis.clone()).unwrap_or_default()
    };
    x.flag().iter().chain(y.flag()).all(|st| {
        let (a, b) = (at(x, &st.jump), at(y, &st.jump));
        linalg::sum(f, &a, &b, x.n()).len() == b.len()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_tensor_checks_pass() {
        for kind in [InstanceKind::Fil, InstanceKind::Bun, InstanceKind::Phi] {
            let r = tensor_compat_check(kind, &CompatParams::default(), 4, 3).unwrap();
            assert!(r.ok(), "{kind}: {:?}", r.mismatches);
        }
    }

    #[test]
    fn guards_reject_large_tensors() {
        let p = CompatParams { n1: 3, n2: 2, ..CompatParams::default() };
        assert!(tensor_compat_check(InstanceKind::Bun, &p, 1, 0).is_err());
        let p = CompatParams { q: 5, ..CompatParams::default() };
        assert!(tensor_compat_check(InstanceKind::Fil, &p, 1, 0).is_err());
    }

    #[test]
    fn kind_round_trip() {
        for s in ["fil", "bun", "phi"] {
            assert_eq!(s.parse::<InstanceKind>().unwrap().to_string(), s);
        }
        assert!("norm".parse::<InstanceKind>().is_err());
    }
}
