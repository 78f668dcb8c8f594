use crate::algebra::rational::Rational;
use crate::error::{Error, Result};
use crate::lattice::FiniteLattice;

/// `μ([x, y]) = (deg y − deg x) / (rank y − rank x)`, or `None` when `x = y`.
pub fn interval_slope(rank: &[Rational], deg: &[Rational], x: usize, y: usize) -> Option<Rational> {
    if x == y {
        return None;
    }
    Some((&deg[y] - &deg[x]) / (&rank[y] - &rank[x]))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// The maximal destabilizer of the interval, which beats the claimed slope.
    Destabilizer { element: usize, slope: Rational },
    /// No subobject beats the claimed slope but the interval's own slope differs.
    SlopeMismatch { actual: Rational },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Semistability {
    pub ok: bool,
    pub witness: Option<Witness>,
}

/// Whether `[x, y]` is semistable of slope `mu`.
pub fn is_semistable(
    l: &FiniteLattice,
    rank: &[Rational],
    deg: &[Rational],
    x: usize,
    y: usize,
    mu: &Rational,
) -> Semistability {
    if x == y {
        return Semistability { ok: true, witness: None };
    }
    let violated = (0..l.len()).any(|z| {
        l.leq(x, z) && l.leq(z, y) && &deg[z] - &deg[x] > mu * (&rank[z] - &rank[x])
    });
    if violated {
        // the violation itself proves deg is not a degree function if this fails
        let (element, slope) = match max_destabilizer_in(l, rank, deg, x, y) {
            Ok(z) => (z, interval_slope(rank, deg, x, z).unwrap()),
            Err(_) => {
                let z = (0..l.len())
                    .filter(|&z| l.leq(x, z) && l.leq(z, y) && z != x)
                    .max_by(|&a, &b| {
                        interval_slope(rank, deg, x, a).cmp(&interval_slope(rank, deg, x, b))
                    })
                    .unwrap();
                (z, interval_slope(rank, deg, x, z).unwrap())
            }
        };
        return Semistability { ok: false, witness: Some(Witness::Destabilizer { element, slope }) };
    }
    let actual = interval_slope(rank, deg, x, y).unwrap();
    if &actual != mu {
        return Semistability { ok: false, witness: Some(Witness::SlopeMismatch { actual }) };
    }
    Semistability { ok: true, witness: None }
}

/// The largest element of `(x, y]` maximizing `μ([x, z])`: the join of all
/// maximizers, which supermodularity makes a maximizer itself.
pub fn max_destabilizer_in(
    l: &FiniteLattice,
    rank: &[Rational],
    deg: &[Rational],
    x: usize,
    y: usize,
) -> Result<usize> {
    if !l.lt(x, y) {
        return Err(Error::InvalidLattice("destabilizer of an empty interval".into()));
    }
    let mut best: Option<Rational> = None;
    let mut maximizers = Vec::new();
    for z in 0..l.len() {
        if z == x || !l.leq(x, z) || !l.leq(z, y) {
            continue;
        }
        let s = interval_slope(rank, deg, x, z).unwrap();
        match &best {
            Some(b) if &s < b => {}
            Some(b) if &s == b => maximizers.push(z),
            _ => {
                best = Some(s);
                maximizers.clear();
                maximizers.push(z);
            }
        }
    }
    let best = best.unwrap();
    let j = l.join_all(maximizers.iter().copied());
    if interval_slope(rank, deg, x, j).as_ref() == Some(&best) {
        return Ok(j);
    }
    for (i, &a) in maximizers.iter().enumerate() {
        for &b in &maximizers[i + 1..] {
            if interval_slope(rank, deg, x, l.join(a, b)).as_ref() != Some(&best) {
                return Err(Error::DegreeAxiomViolation {
                    a,
                    b,
                    detail: format!(
                        "{} and {} are slope-maximal over {} but their join is not",
                        l.label(a),
                        l.label(b),
                        l.label(x)
                    ),
                });
            }
        }
    }
    unreachable!("pairwise join-closure implies closure of the whole set")
}

/// Maximal destabilizing element of the whole lattice.
pub fn max_destabilizer(l: &FiniteLattice, rank: &[Rational], deg: &[Rational]) -> Result<usize> {
    max_destabilizer_in(l, rank, deg, l.bottom(), l.top())
}
