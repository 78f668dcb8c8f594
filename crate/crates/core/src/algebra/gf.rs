//! Finite fields F_{p^d} with table-driven arithmetic.
//!
//! Elements are integer codes `Σ c_i p^i` for the residue `Σ c_i x^i`
//! modulo a fixed monic irreducible polynomial. The modulus is the monic
//! irreducible of degree `d` whose lower coefficients have the smallest code,
//! so two runs always agree on the representation.

use crate::error::{Error, Result};

pub type Elem = u32;

/// Largest supported field order; keeps the tables at most 64K entries.
pub const MAX_ORDER: u32 = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaloisField {
    p: u32,
    degree: u32,
    order: u32,
    modulus: Vec<u32>,
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    inv: Vec<Elem>,
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// `(p, e)` with `q = p^e`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let (mut r, mut e) = (q, 0);
    while r % p == 0 {
        r /= p;
        e += 1;
    }
    (r == 1).then_some((p, e))
}

// Polynomials over F_p as little-endian coefficient vectors.

fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = mod_inv(b[db], p);
    while r.len() > db {
        let k = r.len() - 1 - db;
        let c = r[r.len() - 1] * lead_inv % p;
        for (i, &bi) in b.iter().enumerate() {
            r[k + i] = (r[k + i] + p - c * bi % p) % p;
        }
        poly_trim(&mut r);
    }
    r
}

fn mod_inv(a: u32, p: u32) -> u32 {
    (1..p).find(|x| a * x % p == 1).expect("nonzero residue")
}

fn poly_from_code(code: u32, p: u32, len: usize) -> Vec<u32> {
    let mut c = code;
    (0..len)
        .map(|_| {
            let d = c % p;
            c /= p;
            d
        })
        .collect()
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let d = f.len() - 1;
    for dg in 1..=d / 2 {
        for code in 0..p.pow(dg as u32) {
            let mut g = poly_from_code(code, p, dg);
            g.push(1);
            if poly_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn least_irreducible(p: u32, d: u32) -> Vec<u32> {
    if d == 1 {
        return vec![0, 1];
    }
    for code in 0..p.pow(d) {
        let mut f = poly_from_code(code, p, d as usize);
        f.push(1);
        if f[0] != 0 && is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl GaloisField {
    /// The field with `p^degree` elements.
    pub fn new(p: u32, degree: u32) -> Result<Self> {
        if !is_prime(p) || degree == 0 {
            return Err(Error::InvalidField(format!("p={p}, degree={degree}")));
        }
        let order = (p as u64).checked_pow(degree).unwrap_or(u64::MAX);
        if order > MAX_ORDER as u64 {
            return Err(Error::SizeLimit {
                what: "field order".into(),
                count: order as u128,
                limit: MAX_ORDER as u128,
            });
        }
        let order = order as u32;
        let d = degree as usize;
        let modulus = least_irreducible(p, degree);
        let digits: Vec<Vec<u32>> = (0..order).map(|c| poly_from_code(c, p, d)).collect();
        let encode = |v: &[u32]| v.iter().rev().fold(0u32, |acc, &c| acc * p + c);
        let n = order as usize;
        let mut add = vec![0; n * n];
        let mut mul = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let s: Vec<u32> = (0..d).map(|i| (digits[a][i] + digits[b][i]) % p).collect();
                add[a * n + b] = encode(&s);
                let mut prod = vec![0u32; 2 * d];
                for i in 0..d {
                    for j in 0..d {
                        prod[i + j] = (prod[i + j] + digits[a][i] * digits[b][j]) % p;
                    }
                }
                let mut r = poly_rem(&prod, &modulus, p);
                r.resize(d, 0);
                mul[a * n + b] = encode(&r);
            }
        }
        let neg = (0..n)
            .map(|a| (0..n).find(|&b| add[a * n + b] == 0).unwrap() as Elem)
            .collect();
        let inv = (0..n)
            .map(|a| {
                if a == 0 {
                    0
                } else {
                    (1..n).find(|&b| mul[a * n + b] == 1).unwrap() as Elem
                }
            })
            .collect();
        Ok(Self { p, degree, order, modulus, add, mul, neg, inv })
    }

    /// The field with `q` elements.
    pub fn with_order(q: u32) -> Result<Self> {
        let (p, e) = prime_power(q).ok_or_else(|| Error::InvalidField(format!("q={q} is not a prime power")))?;
        Self::new(p, e)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Coefficients of the defining modulus, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.add[(a * self.order + b) as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg[b as usize])
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.neg[a as usize]
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[(a * self.order + b) as usize]
    }

    /// Multiplicative inverse. Panics on zero.
    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        assert!(a != 0, "inverse of zero in F_{}", self.order);
        self.inv[a as usize]
    }

    pub fn div(&self, a: Elem, b: Elem) -> Elem {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let (mut base, mut acc) = (a, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.order
    }

    /// Embedding of `sub` into `self` as a table indexed by `sub` codes.
    ///
    /// Prime-field elements map to themselves; otherwise the generator of
    /// `sub` goes to the smallest root of its modulus in `self`.
    pub fn embedding_of(&self, sub: &GaloisField) -> Result<Vec<Elem>> {
        if sub.p != self.p || !self.degree.is_multiple_of(sub.degree) {
            return Err(Error::InvalidField(format!(
                "F_{} is not a subfield of F_{}",
                sub.order, self.order
            )));
        }
        if sub.degree == 1 {
            return Ok((0..sub.order).collect());
        }
        if sub == self {
            return Ok((0..sub.order).collect());
        }
        let eval = |poly: &[u32], x: Elem| {
            poly.iter().rev().fold(0, |acc, &c| self.add(self.mul(acc, x), c))
        };
        let root = self
            .elements()
            .find(|&x| eval(&sub.modulus, x) == 0)
            .expect("subfield modulus splits in the extension");
        let d = sub.degree as usize;
        Ok((0..sub.order)
            .map(|code| eval(&poly_from_code(code, sub.p, d), root))
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(4), Some((2, 2)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn moduli_are_least() {
        assert_eq!(GaloisField::new(2, 2).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(GaloisField::new(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
        // x^2 + 1 is irreducible over F_3 and has the smallest code.
        assert_eq!(GaloisField::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
    }

    #[test]
    fn field_axioms_exhaustive() {
        for (p, d) in [(2, 1), (2, 2), (3, 1), (3, 2), (2, 4)] {
            let f = GaloisField::new(p, d).unwrap();
            for a in f.elements() {
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1);
                }
                assert_eq!(f.add(a, f.neg(a)), 0);
                for b in f.elements() {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in f.elements() {
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn embedding_is_a_homomorphism() {
        let k = GaloisField::with_order(4).unwrap();
        let l = GaloisField::with_order(16).unwrap();
        let e = l.embedding_of(&k).unwrap();
        for a in k.elements() {
            assert_eq!(l.pow(e[a as usize], 4), e[a as usize]);
            for b in k.elements() {
                assert_eq!(e[k.add(a, b) as usize], l.add(e[a as usize], e[b as usize]));
                assert_eq!(e[k.mul(a, b) as usize], l.mul(e[a as usize], e[b as usize]));
            }
        }
        assert!(l.embedding_of(&GaloisField::with_order(8).unwrap()).is_err());
    }
}
