use crate::algebra::rational::Rational;

/// Weighted isotonic regression onto non-increasing sequences by
/// pool-adjacent-violators: the minimizer of `Σ w_i (γ_i − v_i)²` subject to
/// `γ_1 ≥ … ≥ γ_s`. Weights must be positive.
pub fn pava(values: &[Rational], weights: &[Rational]) -> Vec<Rational> {
    assert_eq!(values.len(), weights.len());
    // blocks of (Σ w v, Σ w, length)
    let mut blocks: Vec<(Rational, Rational, usize)> = Vec::with_capacity(values.len());
    for (v, w) in values.iter().zip(weights) {
        blocks.push((v * w, w.clone(), 1));
        while blocks.len() >= 2 {
            let n = blocks.len();
            let (a, b) = (&blocks[n - 2], &blocks[n - 1]);
            if &a.0 * &b.1 >= &b.0 * &a.1 {
                break;
            }
            let b = blocks.pop().unwrap();
            let a = blocks.last_mut().unwrap();
            a.0 += b.0;
            a.1 += b.1;
            a.2 += b.2;
        }
    }
    blocks.into_iter().flat_map(|(s, w, n)| std::iter::repeat_n(s / w, n)).collect()
}

/// `Σ w_i γ_i² − 2 Σ d_i γ_i`.
pub fn chamber_objective(d: &[Rational], w: &[Rational], gamma: &[Rational]) -> Rational {
    let two = Rational::from_integer(2.into());
    gamma
        .iter()
        .zip(d.iter().zip(w))
        .map(|(g, (d, w))| w * g * g - &two * d * g)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};

    #[test]
    fn pava_examples() {
        assert_eq!(pava(&[int(2), int(1)], &[int(1), int(1)]), vec![int(2), int(1)]);
        assert_eq!(pava(&[int(0), int(2)], &[int(1), int(1)]), vec![int(1), int(1)]);
        assert_eq!(pava(&[int(0), int(3)], &[int(2), int(1)]), vec![int(1), int(1)]);
        assert_eq!(
            pava(&[int(1), int(3), int(2), int(0)], &[int(1), int(1), int(1), int(1)]),
            vec![int(2), int(2), int(2), int(0)]
        );
        assert_eq!(pava(&[rat(1, 3)], &[int(3)]), vec![rat(1, 3)]);
    }
}
