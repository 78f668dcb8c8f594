use num_traits::{Signed, Zero};

use super::objective;
use super::semistable::{is_semistable, Semistability};
use crate::algebra::rational::Rational;
use crate::filtration::{norm2, pairing, sharp, unsharp, Filtration};
use crate::lattice::{FiniteLattice, LatticeKind};
use crate::random::random_filtration;
use crate::rng::SplitMix64;

pub const DEFAULT_SAMPLES: usize = 500;

/// Semistability of one graded piece `[c_{i−1}, c_i]` at slope `γ_i`.
#[derive(Debug, Clone)]
pub struct GrEntry {
    pub lower: usize,
    pub upper: usize,
    pub jump: Rational,
    pub result: Semistability,
}

#[derive(Debug, Clone)]
pub struct DominanceSample {
    pub f: Filtration,
    /// `⟨⋆, f⟩`
    pub degree: Rational,
    /// `⟨F, f⟩`
    pub pairing: Rational,
    pub objective: Rational,
    pub degree_dominated: bool,
    pub objective_dominated: bool,
}

/// Checks available when the lattice is boolean and `deg` is exact: with
/// `F'` opposed to `F`, additivity gives `⟨⋆,F⟩ + ⟨⋆,F'⟩ = 0`, while
/// `⟨F,F'⟩ = −‖F‖²` and `⟨⋆,F'⟩ ≤ ⟨F,F'⟩` then force `⟨⋆,F⟩ ≥ ‖F‖²`.
#[derive(Debug, Clone)]
pub struct ExactVariant {
    pub opposed: Filtration,
    pub degree_sum_zero: bool,
    pub pairing_is_minus_norm: bool,
    pub opposed_dominated: bool,
    pub recovers_optimum: bool,
}

impl ExactVariant {
    pub fn ok(&self) -> bool {
        self.degree_sum_zero && self.pairing_is_minus_norm && self.opposed_dominated && self.recovers_optimum
    }
}

#[derive(Debug, Clone)]
pub struct HnCertificate {
    pub hn: Filtration,
    pub objective: Rational,
    pub norm2: Rational,
    pub degree: Rational,
    pub gr_report: Vec<GrEntry>,
    pub samples: Vec<DominanceSample>,
    pub exact_variant: Option<ExactVariant>,
    pub seed: u64,
}

impl HnCertificate {
    pub fn optimum_identity(&self) -> bool {
        self.norm2 == self.degree
    }

    pub fn gr_ok(&self) -> bool {
        self.gr_report.iter().all(|e| e.result.ok)
    }

    pub fn dominance_ok(&self) -> bool {
        self.samples.iter().all(|s| s.degree_dominated && s.objective_dominated)
    }

    pub fn valid(&self) -> bool {
        self.optimum_identity()
            && self.gr_ok()
            && self.dominance_ok()
            && self.exact_variant.as_ref().is_none_or(|e| e.ok())
    }

    pub fn first_failure(&self) -> Option<&DominanceSample> {
        self.samples.iter().find(|s| !(s.degree_dominated && s.objective_dominated))
    }
}

fn is_exact(l: &FiniteLattice, deg: &[Rational]) -> bool {
    (0..l.len()).all(|a| (a..l.len()).all(|b| &deg[l.join(a, b)] + &deg[l.meet(a, b)] == &deg[a] + &deg[b]))
}

/// Checks the three characterizations of the HN filtration for `hn`:
/// `‖F‖² = ⟨⋆,F⟩`, semistable graded pieces at their jumps, and dominance
/// over `samples` random filtrations drawn from `seed`.
pub fn certify(
    l: &FiniteLattice,
    rank: &[Rational],
    deg: &[Rational],
    hn: &Filtration,
    samples: usize,
    seed: u64,
) -> HnCertificate {
    let n2 = norm2(rank, hn);
    let degree = hn.degree_ext(deg);
    let obj = objective(rank, deg, hn);
    let gr_report = hn
        .chain()
        .windows(2)
        .zip(hn.jumps())
        .map(|(w, g)| GrEntry {
            lower: w[0],
            upper: w[1],
            jump: g.clone(),
            result: is_semistable(l, rank, deg, w[0], w[1], g),
        })
        .collect();
    let mut rng = SplitMix64::new(seed);
    let samples = (0..samples)
        .map(|_| {
            let f = random_filtration(l, &mut rng);
            let d = f.degree_ext(deg);
            let p = pairing(l, rank, hn, &f);
            let o = objective(rank, deg, &f);
            DominanceSample {
                degree_dominated: d <= p,
                objective_dominated: obj <= o,
                f,
                degree: d,
                pairing: p,
                objective: o,
            }
        })
        .collect();
    let exact_variant = (matches!(l.kind(), LatticeKind::Boolean(_)) && is_exact(l, deg)).then(|| {
        let s = sharp(l, hn).expect("boolean lattices are distributive");
        let neg = s.into_iter().map(|(x, g)| (x, -g)).collect();
        let opposed = unsharp(l, &neg).expect("negated coordinates stay monotone on atoms");
        let d_op = opposed.degree_ext(deg);
        let p_op = pairing(l, rank, hn, &opposed);
        ExactVariant {
            degree_sum_zero: (&degree + &d_op).is_zero(),
            pairing_is_minus_norm: p_op == -n2.clone(),
            opposed_dominated: d_op <= p_op,
            recovers_optimum: !(&degree - &n2).is_negative(),
            opposed,
        }
    });
    HnCertificate { hn: hn.clone(), objective: obj, norm2: n2, degree, gr_report, samples, exact_variant, seed }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;
    use crate::hn::{hn_greedy, Witness};
    use crate::lattice::height_function;
    use crate::rng::DEFAULT_SEED;

    #[test]
    fn hn_output_certifies() {
        let l = FiniteLattice::subspace(2, 2).unwrap();
        let h = height_function(&l).unwrap();
        let deg = vec![int(0), int(1), int(0), int(0), int(1)];
        let f = hn_greedy(&l, &h, &deg).unwrap();
        let c = certify(&l, &h, &deg, &f, 200, DEFAULT_SEED);
        assert!(c.valid());
        assert_eq!(c.samples.len(), 200);
        assert!(c.exact_variant.is_none());
    }

    #[test]
    fn constant_zero_fails_with_witness() {
        let l = FiniteLattice::subspace(2, 2).unwrap();
        let h = height_function(&l).unwrap();
        let deg = vec![int(0), int(1), int(0), int(0), int(1)];
        let c = certify(&l, &h, &deg, &Filtration::constant(&l, int(0)), 50, DEFAULT_SEED);
        assert!(!c.valid());
        let w = c.gr_report[0].result.witness.clone();
        assert_eq!(w, Some(Witness::Destabilizer { element: 1, slope: int(1) }));
    }

    #[test]
    fn exact_variant_on_boolean() {
        let b3 = FiniteLattice::boolean(3).unwrap();
        let h = height_function(&b3).unwrap();
        // additive degree with atom values 2, -1, 2
        let atoms = [2, -1, 2];
        let deg: Vec<Rational> =
            (0..8).map(|m: usize| int((0..3).filter(|i| m >> i & 1 == 1).map(|i| atoms[i]).sum())).collect();
        let f = hn_greedy(&b3, &h, &deg).unwrap();
        assert_eq!(f.chain(), &[0, 5, 7]);
        assert_eq!(f.jumps(), &[int(2), int(-1)]);
        let c = certify(&b3, &h, &deg, &f, 100, 1);
        let e = c.exact_variant.as_ref().unwrap();
        assert!(e.ok());
        assert_eq!(e.opposed.chain(), &[0, 2, 7]);
        assert!(c.valid());
    }
}
