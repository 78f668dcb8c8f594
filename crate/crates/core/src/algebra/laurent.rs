//! Truncated Laurent series over F_q with certified precision.
//!
//! A nonzero value is `t^val * (u_0 + u_1 t + ... + O(t^rel_prec))` with
//! `u_0 != 0`. Values built from Laurent polynomials stay exact
//! (`rel_prec == None`) until a division by a non-monomial unit, after
//! which they carry `N` certified relative digits. A zero whose digits
//! have all cancelled is recorded as `O(t^known_to)`: its valuation is
//! unknown, and any step that would need it fails with
//! [`Error::PrecisionExhausted`].

use std::fmt;

use super::gf::{Elem, GaloisField};
use crate::error::{Error, Result};

pub const DEFAULT_PRECISION: usize = 64;
pub const MIN_PRECISION: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LaurentScalar {
    /// `known_to == None` is an exact zero; `Some(r)` means `O(t^r)`.
    Zero { known_to: Option<i64> },
    Unit {
        val: i64,
        unit: Vec<Elem>,
        rel_prec: Option<usize>,
    },
}

impl LaurentScalar {
    pub fn zero() -> Self {
        LaurentScalar::Zero { known_to: None }
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// `c * t^v` (exact). A zero coefficient gives the exact zero.
    pub fn monomial(c: Elem, v: i64) -> Self {
        if c == 0 {
            Self::zero()
        } else {
            LaurentScalar::Unit { val: v, unit: vec![c], rel_prec: None }
        }
    }

    /// Exact Laurent polynomial `t^v * Σ coeffs[i] t^i`.
    pub fn polynomial(v: i64, coeffs: &[Elem]) -> Self {
        normalize(v, coeffs.to_vec(), None)
    }

    /// `Some(v)` for a nonzero value, `None` for a (possibly approximate) zero.
    pub fn valuation(&self) -> Option<i64> {
        match self {
            LaurentScalar::Unit { val, .. } => Some(*val),
            LaurentScalar::Zero { .. } => None,
        }
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self, LaurentScalar::Zero { known_to: None })
    }

    pub fn is_exact(&self) -> bool {
        match self {
            LaurentScalar::Zero { known_to } => known_to.is_none(),
            LaurentScalar::Unit { rel_prec, .. } => rel_prec.is_none(),
        }
    }

    /// Absolute precision: the value is known modulo `t^abs_prec`.
    pub fn abs_prec(&self) -> Option<i64> {
        match self {
            LaurentScalar::Zero { known_to } => *known_to,
            LaurentScalar::Unit { val, rel_prec, .. } => rel_prec.map(|p| val + p as i64),
        }
    }

    /// Coefficient of `t^e` if it is certified.
    pub fn coeff(&self, e: i64) -> Option<Elem> {
        if let Some(a) = self.abs_prec() {
            if e >= a {
                return None;
            }
        }
        Some(match self {
            LaurentScalar::Zero { .. } => 0,
            LaurentScalar::Unit { val, unit, .. } => {
                let i = e - val;
                if i < 0 || i as usize >= unit.len() {
                    0
                } else {
                    unit[i as usize]
                }
            }
        })
    }
}

fn trim(v: &mut Vec<Elem>) {
    while v.len() > 1 && v.last() == Some(&0) {
        v.pop();
    }
}

/// Builds a value from digits `coeffs` starting at `t^lo`, known to
/// absolute precision `abs` (None = exact).
fn normalize(lo: i64, mut coeffs: Vec<Elem>, abs: Option<i64>) -> LaurentScalar {
    if let Some(a) = abs {
        let keep = (a - lo).clamp(0, coeffs.len() as i64) as usize;
        coeffs.truncate(keep);
    }
    match coeffs.iter().position(|&c| c != 0) {
        None => LaurentScalar::Zero { known_to: abs },
        Some(k) => {
            let val = lo + k as i64;
            let mut unit = coeffs.split_off(k);
            trim(&mut unit);
            let rel_prec = abs.map(|a| (a - val) as usize);
            LaurentScalar::Unit { val, unit, rel_prec }
        }
    }
}

/// Arithmetic context: the coefficient field and the relative precision cap.
#[derive(Debug, Clone)]
pub struct SeriesRing {
    field: GaloisField,
    cap: usize,
}

impl SeriesRing {
    pub fn new(field: GaloisField, cap: usize) -> Result<Self> {
        if cap < MIN_PRECISION {
            return Err(Error::PrecisionExhausted(format!(
                "working precision {cap} is below the minimum {MIN_PRECISION}"
            )));
        }
        Ok(Self { field, cap })
    }

    pub fn with_order(q: u32, cap: usize) -> Result<Self> {
        Self::new(GaloisField::with_order(q)?, cap)
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.order()
    }

    pub fn precision(&self) -> usize {
        self.cap
    }

    fn capped(&self, x: LaurentScalar) -> LaurentScalar {
        match x {
            LaurentScalar::Unit { val, mut unit, rel_prec: Some(p) } if p > self.cap => {
                unit.truncate(self.cap);
                trim(&mut unit);
                LaurentScalar::Unit { val, unit, rel_prec: Some(self.cap) }
            }
            other => other,
        }
    }

    pub fn neg(&self, a: &LaurentScalar) -> LaurentScalar {
        match a {
            LaurentScalar::Zero { .. } => a.clone(),
            LaurentScalar::Unit { val, unit, rel_prec } => LaurentScalar::Unit {
                val: *val,
                unit: unit.iter().map(|&c| self.field.neg(c)).collect(),
                rel_prec: *rel_prec,
            },
        }
    }

    pub fn add(&self, a: &LaurentScalar, b: &LaurentScalar) -> LaurentScalar {
        let abs = match (a.abs_prec(), b.abs_prec()) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, None) => x,
            (None, y) => y,
        };
        let terms: Vec<(i64, &[Elem])> = [a, b]
            .into_iter()
            .filter_map(|x| match x {
                LaurentScalar::Unit { val, unit, .. } => Some((*val, unit.as_slice())),
                LaurentScalar::Zero { .. } => None,
            })
            .collect();
        if terms.is_empty() {
            return LaurentScalar::Zero { known_to: abs };
        }
        let lo = terms.iter().map(|t| t.0).min().unwrap();
        let mut hi = terms.iter().map(|(v, u)| v + u.len() as i64).max().unwrap();
        if let Some(a) = abs {
            hi = hi.min(a);
        }
        if hi <= lo {
            return LaurentScalar::Zero { known_to: abs };
        }
        let mut acc = vec![0; (hi - lo) as usize];
        for (v, u) in terms {
            for (i, &c) in u.iter().enumerate() {
                let e = v + i as i64 - lo;
                if e < acc.len() as i64 {
                    acc[e as usize] = self.field.add(acc[e as usize], c);
                }
            }
        }
        self.capped(normalize(lo, acc, abs))
    }

    pub fn sub(&self, a: &LaurentScalar, b: &LaurentScalar) -> LaurentScalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &LaurentScalar, b: &LaurentScalar) -> LaurentScalar {
        use LaurentScalar::*;
        match (a, b) {
            (Zero { known_to: None }, _) | (_, Zero { known_to: None }) => LaurentScalar::zero(),
            (Zero { known_to: Some(r) }, Unit { val, .. })
            | (Unit { val, .. }, Zero { known_to: Some(r) }) => Zero { known_to: Some(r + val) },
            (Zero { known_to: Some(r) }, Zero { known_to: Some(s) }) => {
                Zero { known_to: Some(r + s) }
            }
            (
                Unit { val: va, unit: ua, rel_prec: pa },
                Unit { val: vb, unit: ub, rel_prec: pb },
            ) => {
                let p = match (pa, pb) {
                    (Some(x), Some(y)) => Some(*x.min(y)),
                    (x, None) => *x,
                    (None, y) => *y,
                };
                let full = ua.len() + ub.len() - 1;
                let len = p.map_or(full, |p| p.min(full));
                let mut acc = vec![0; len];
                for (i, &x) in ua.iter().enumerate().take(len) {
                    for (j, &y) in ub.iter().enumerate().take(len - i) {
                        acc[i + j] = self.field.add(acc[i + j], self.field.mul(x, y));
                    }
                }
                trim(&mut acc);
                self.capped(Unit { val: va + vb, unit: acc, rel_prec: p })
            }
        }
    }

    pub fn inv(&self, a: &LaurentScalar) -> Result<LaurentScalar> {
        match a {
            LaurentScalar::Zero { known_to: None } => Err(Error::Singular("division by zero".into())),
            LaurentScalar::Zero { known_to: Some(r) } => Err(Error::PrecisionExhausted(format!(
                "division by O(t^{r}) with uncertified valuation"
            ))),
            LaurentScalar::Unit { val, unit, rel_prec } => {
                let f = &self.field;
                if unit.len() == 1 && rel_prec.is_none() {
                    return Ok(LaurentScalar::Unit { val: -val, unit: vec![f.inv(unit[0])], rel_prec: None });
                }
                let p = rel_prec.unwrap_or(self.cap).min(self.cap);
                let u0 = f.inv(unit[0]);
                let mut b = vec![0; p];
                b[0] = u0;
                for k in 1..p {
                    let mut s = 0;
                    for i in 1..=k.min(unit.len() - 1) {
                        s = f.add(s, f.mul(unit[i], b[k - i]));
                    }
                    b[k] = f.neg(f.mul(u0, s));
                }
                trim(&mut b);
                Ok(LaurentScalar::Unit { val: -val, unit: b, rel_prec: Some(p) })
            }
        }
    }

    pub fn div(&self, a: &LaurentScalar, b: &LaurentScalar) -> Result<LaurentScalar> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// `x(t) ↦ x(t)^q = x(t^q)`; coefficients in F_q are fixed by the q-th power.
    pub fn frobenius(&self, a: &LaurentScalar) -> LaurentScalar {
        let q = self.q() as i64;
        match a {
            LaurentScalar::Zero { known_to } => LaurentScalar::Zero { known_to: known_to.map(|r| q * r) },
            LaurentScalar::Unit { val, unit, rel_prec } => {
                let mut spread = vec![0; (unit.len() - 1) * q as usize + 1];
                for (i, &c) in unit.iter().enumerate() {
                    spread[i * q as usize] = c;
                }
                self.capped(LaurentScalar::Unit {
                    val: q * val,
                    unit: spread,
                    rel_prec: rel_prec.map(|p| p * q as usize),
                })
            }
        }
    }

    /// Parses `"t^v*(c0+c1*t+...)"`, plain sums such as `"1+t^-2"`, `"0"`,
    /// and the truncation markers `O(t^k)`.
    pub fn parse(&self, s: &str) -> Result<LaurentScalar> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = |why: &str| Error::Parse(format!("bad Laurent scalar {s:?}: {why}"));
        if let Some(rest) = s.strip_prefix("t^").and_then(|r| r.split_once("*(")) {
            let (v, body) = rest;
            let body = body.strip_suffix(')').ok_or_else(|| bad("unclosed parenthesis"))?;
            let v: i64 = v.parse().map_err(|_| bad("shift exponent"))?;
            let inner = self.parse_sum(body).map_err(|e| bad(&e))?;
            return Ok(shift(inner, v));
        }
        self.parse_sum(&s).map_err(|e| bad(&e))
    }

    fn parse_sum(&self, s: &str) -> std::result::Result<LaurentScalar, String> {
        if s.is_empty() {
            return Err("empty".into());
        }
        let mut acc = LaurentScalar::zero();
        let mut trunc: Option<i64> = None;
        for term in s.split('+') {
            if let Some(k) = term.strip_prefix("O(t^").and_then(|r| r.strip_suffix(')')) {
                let k: i64 = k.parse().map_err(|_| "truncation exponent".to_string())?;
                trunc = Some(trunc.map_or(k, |t: i64| t.min(k)));
                continue;
            }
            if term == "O(t)" {
                trunc = Some(trunc.map_or(1, |t: i64| t.min(1)));
                continue;
            }
            let (c, e) = parse_monomial(term)?;
            if c >= self.q() {
                return Err(format!("coefficient {c} not in F_{}", self.q()));
            }
            acc = self.add(&acc, &LaurentScalar::monomial(c, e));
        }
        if let Some(k) = trunc {
            acc = self.add(&acc, &LaurentScalar::Zero { known_to: Some(k) });
        }
        Ok(acc)
    }
}

fn shift(x: LaurentScalar, v: i64) -> LaurentScalar {
    match x {
        LaurentScalar::Zero { known_to } => LaurentScalar::Zero { known_to: known_to.map(|r| r + v) },
        LaurentScalar::Unit { val, unit, rel_prec } => LaurentScalar::Unit { val: val + v, unit, rel_prec },
    }
}

fn parse_monomial(term: &str) -> std::result::Result<(Elem, i64), String> {
    let parse_t = |t: &str| -> std::result::Result<i64, String> {
        if t == "t" {
            Ok(1)
        } else if let Some(e) = t.strip_prefix("t^") {
            e.trim_matches(|c| c == '(' || c == ')').parse().map_err(|_| format!("exponent in {t:?}"))
        } else {
            Err(format!("term {t:?}"))
        }
    };
    if let Some((c, t)) = term.split_once('*') {
        let c: Elem = c.parse().map_err(|_| format!("coefficient in {term:?}"))?;
        Ok((c, parse_t(t)?))
    } else if term.starts_with('t') {
        Ok((1, parse_t(term)?))
    } else {
        let c: Elem = term.parse().map_err(|_| format!("term {term:?}"))?;
        Ok((c, 0))
    }
}

impl fmt::Display for LaurentScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LaurentScalar::Zero { known_to: None } => write!(f, "0"),
            LaurentScalar::Zero { known_to: Some(r) } => write!(f, "O(t^{r})"),
            LaurentScalar::Unit { val, unit, rel_prec } => {
                let mut parts = Vec::new();
                for (i, &c) in unit.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    parts.push(match i {
                        0 => format!("{c}"),
                        1 => format!("{c}*t"),
                        _ => format!("{c}*t^{i}"),
                    });
                }
                if let Some(p) = rel_prec {
                    parts.push(format!("O(t^{p})"));
                }
                write!(f, "t^{val}*({})", parts.join("+"))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(q: u32) -> SeriesRing {
        SeriesRing::with_order(q, DEFAULT_PRECISION).unwrap()
    }

    #[test]
    fn inverse_pair_and_cancellation() {
        let r = ring(2);
        let t = LaurentScalar::monomial(1, 1);
        let tinv = LaurentScalar::monomial(1, -1);
        assert_eq!(r.mul(&t, &tinv), LaurentScalar::one());
        let one_plus_t = LaurentScalar::polynomial(0, &[1, 1]);
        let minus_one = r.neg(&LaurentScalar::one());
        assert_eq!(r.add(&one_plus_t, &minus_one), t);
        let t2 = LaurentScalar::monomial(1, 2);
        assert_eq!(r.div(&t2, &t).unwrap(), t);
    }

    #[test]
    fn geometric_series_inverse() {
        let r = ring(3);
        let one_plus_t = LaurentScalar::polynomial(0, &[1, 1]);
        let inv = r.inv(&one_plus_t).unwrap();
        assert_eq!(inv.abs_prec(), Some(DEFAULT_PRECISION as i64));
        // 1/(1+t) = Σ (-1)^i t^i, and -1 = 2 in F_3
        assert_eq!(inv.coeff(0), Some(1));
        assert_eq!(inv.coeff(1), Some(2));
        assert_eq!(inv.coeff(5), Some(2));
        assert_eq!(inv.coeff(64), None);
        assert_eq!(r.mul(&inv, &one_plus_t), LaurentScalar::Unit {
            val: 0,
            unit: vec![1],
            rel_prec: Some(DEFAULT_PRECISION)
        });
    }

    #[test]
    fn cancellation_to_fuzzy_zero() {
        let r = ring(2);
        let x = r.inv(&LaurentScalar::polynomial(0, &[1, 1])).unwrap();
        let z = r.sub(&x, &x);
        assert_eq!(z, LaurentScalar::Zero { known_to: Some(DEFAULT_PRECISION as i64) });
        assert!(matches!(r.inv(&z), Err(Error::PrecisionExhausted(_))));
        assert!(matches!(r.inv(&LaurentScalar::zero()), Err(Error::Singular(_))));
    }

    #[test]
    fn frobenius_examples() {
        let r2 = ring(2);
        assert_eq!(r2.frobenius(&LaurentScalar::monomial(1, 1)), LaurentScalar::monomial(1, 2));
        assert_eq!(
            r2.frobenius(&LaurentScalar::polynomial(0, &[1, 1])),
            LaurentScalar::polynomial(0, &[1, 0, 1])
        );
        let r3 = ring(3);
        assert_eq!(r3.frobenius(&LaurentScalar::monomial(1, -1)), LaurentScalar::monomial(1, -3));
    }

    #[test]
    fn frobenius_matches_power_over_f4() {
        let r = ring(4);
        let x = LaurentScalar::polynomial(-1, &[2, 3, 1]);
        let x4 = r.mul(&r.mul(&x, &x), &r.mul(&x, &x));
        assert_eq!(r.frobenius(&x), x4);
    }

    #[test]
    fn text_round_trip() {
        let r = ring(3);
        for s in ["t^0*(1)", "t^1*(1)", "t^-2*(2+1*t^3)", "0", "O(t^5)", "t^0*(1+2*t+O(t^4))"] {
            let x = r.parse(s).unwrap();
            assert_eq!(x.to_string(), s);
        }
        assert_eq!(r.parse("1+t").unwrap(), LaurentScalar::polynomial(0, &[1, 1]));
        assert_eq!(r.parse("2*t^-1").unwrap(), LaurentScalar::monomial(2, -1));
        assert!(r.parse("3").is_err());
        assert!(r.parse("t^1*(1").is_err());
    }
}
