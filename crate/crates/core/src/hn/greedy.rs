use super::semistable::{interval_slope, max_destabilizer_in};
use crate::algebra::rational::Rational;
use crate::error::Result;
use crate::filtration::Filtration;
use crate::lattice::FiniteLattice;

/// HN filtration by repeatedly splitting off the maximal destabilizer of
/// `[x, top]`. Segments whose slopes fail to decrease are merged.
pub fn hn_greedy(l: &FiniteLattice, rank: &[Rational], deg: &[Rational]) -> Result<Filtration> {
    // (end element, slope of the segment ending there)
    let mut stack: Vec<(usize, Rational)> = Vec::new();
    let mut x = l.bottom();
    while x != l.top() {
        let z = max_destabilizer_in(l, rank, deg, x, l.top())?;
        stack.push((z, interval_slope(rank, deg, x, z).unwrap()));
        while stack.len() >= 2 && stack[stack.len() - 1].1 >= stack[stack.len() - 2].1 {
            let (end, _) = stack.pop().unwrap();
            stack.pop();
            let start = stack.last().map_or(l.bottom(), |s| s.0);
            stack.push((end, interval_slope(rank, deg, start, end).unwrap()));
        }
        x = z;
    }
    let (chain, jumps): (Vec<usize>, Vec<Rational>) = stack.into_iter().unzip();
    Filtration::new(l, chain, jumps)
}

/// Cumulative `(rank, deg)` at each element of the filtration's chain.
pub fn slope_profile(rank: &[Rational], deg: &[Rational], f: &Filtration) -> Vec<(Rational, Rational)> {
    f.chain().iter().map(|&c| (rank[c].clone(), deg[c].clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};
    use crate::lattice::height_function;

    #[test]
    fn greedy_examples() {
        let l = FiniteLattice::subspace(2, 2).unwrap();
        let h = height_function(&l).unwrap();
        let zero = vec![int(0); 5];
        assert_eq!(hn_greedy(&l, &h, &zero).unwrap(), Filtration::constant(&l, int(0)));
        let deg = vec![int(0), int(1), int(0), int(0), int(1)];
        let f = hn_greedy(&l, &h, &deg).unwrap();
        assert_eq!(f.chain(), &[0, 1, 4]);
        assert_eq!(f.jumps(), &[int(1), int(0)]);
        let mu = rat(-3, 4);
        let scaled: Vec<Rational> = h.iter().map(|r| r * &mu).collect();
        assert_eq!(hn_greedy(&l, &h, &scaled).unwrap(), Filtration::constant(&l, mu));
    }

    #[test]
    fn one_point_lattice() {
        let l = FiniteLattice::chain(0).unwrap();
        let f = hn_greedy(&l, &[int(0)], &[int(0)]).unwrap();
        assert!(f.jumps().is_empty());
        assert_eq!(f, Filtration::constant(&l, int(0)));
    }
}
