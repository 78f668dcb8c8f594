use std::sync::Mutex;

use num_traits::Zero;
use rayon::prelude::*;

use super::pava::{chamber_objective, pava};
use crate::algebra::rational::Rational;
use crate::error::{Error, Result};
use crate::filtration::Filtration;
use crate::lattice::{maximal_chains, FiniteLattice};

#[derive(Debug, Clone)]
pub struct OracleReport {
    pub filtration: Filtration,
    pub objective: Rational,
    pub chambers: usize,
    /// Chambers actually solved; the rest were pruned by the lower bound.
    pub evaluated: usize,
    /// Chambers attaining the minimum.
    pub minimizers: usize,
}

/// HN filtration as the exact minimizer of `‖f‖² − 2⟨⋆, f⟩`, solved chamber
/// by chamber with isotonic regression.
pub fn hn_oracle(l: &FiniteLattice, rank: &[Rational], deg: &[Rational]) -> Result<Filtration> {
    Ok(hn_oracle_report(l, rank, deg)?.filtration)
}

pub fn hn_oracle_report(l: &FiniteLattice, rank: &[Rational], deg: &[Rational]) -> Result<OracleReport> {
    if l.bottom() == l.top() {
        return Ok(OracleReport {
            filtration: Filtration::constant(l, Rational::zero()),
            objective: Rational::zero(),
            chambers: 1,
            evaluated: 1,
            minimizers: 1,
        });
    }
    let chains = maximal_chains(l)?;
    let best: Mutex<Option<Rational>> = Mutex::new(None);
    let solved: Vec<Option<(Rational, Filtration)>> = chains
        .par_iter()
        .map(|c| {
            let w: Vec<Rational> = c.windows(2).map(|p| &rank[p[1]] - &rank[p[0]]).collect();
            let d: Vec<Rational> = c.windows(2).map(|p| &deg[p[1]] - &deg[p[0]]).collect();
            // unconstrained minimum of the chamber's quadratic
            let lower: Rational = -d.iter().zip(&w).map(|(d, w)| d * d / w).sum::<Rational>();
            if matches!(&*best.lock().unwrap(), Some(b) if &lower > b) {
                return None;
            }
            let targets: Vec<Rational> = d.iter().zip(&w).map(|(d, w)| d / w).collect();
            let gamma = pava(&targets, &w);
            let obj = chamber_objective(&d, &w, &gamma);
            {
                let mut b = best.lock().unwrap();
                if b.as_ref().is_none_or(|b| &obj < b) {
                    *b = Some(obj.clone());
                }
            }
            let f = Filtration::from_steps(l, gamma.into_iter().zip(c[1..].iter().copied()))
                .expect("chamber minimizer");
            Some((obj, f))
        })
        .collect();
    let evaluated = solved.iter().flatten().count();
    let min = solved.iter().flatten().map(|(o, _)| o).min().cloned().expect("at least one chamber");
    let winners: Vec<&Filtration> = solved.iter().flatten().filter(|(o, _)| o == &min).map(|(_, f)| f).collect();
    if let Some(other) = winners.iter().find(|f| **f != winners[0]) {
        return Err(Error::InconsistentMinima(format!(
            "{} and {} both attain {}",
            winners[0].describe(l),
            other.describe(l),
            min
        )));
    }
    Ok(OracleReport {
        filtration: winners[0].clone(),
        objective: min,
        chambers: chains.len(),
        evaluated,
        minimizers: winners.len(),
    })
}
