use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub(crate) fn ppow(p: i64, k: i64) -> BigInt {
    num_traits::pow(BigInt::from(p), k.max(0) as usize)
}

fn vp_big(x: &BigInt, p: i64) -> i64 {
    if x.is_zero() {
        return i64::MAX;
    }
    let pb = BigInt::from(p);
    let mut x = x.abs();
    let mut v = 0;
    while (&x % &pb).is_zero() {
        x /= &pb;
        v += 1;
    }
    v
}

pub(crate) fn inv_mod(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.extended_gcd(m);
    if !g.gcd.is_one() {
        return None;
    }
    Some(g.x.mod_floor(m))
}

/// `p^val * unit`, known modulo `p^prec` (absolute precision).
///
/// A value indistinguishable from zero has `unit == 0` and `val == prec`.
#[derive(Clone, PartialEq, Eq)]
pub struct PadicNum {
    p: i64,
    prec: i64,
    val: i64,
    unit: BigInt,
}

impl PadicNum {
    fn normalize(p: i64, mut val: i64, mut raw: BigInt, prec: i64) -> Self {
        if val >= prec {
            return Self::zero(p, prec);
        }
        raw = raw.mod_floor(&ppow(p, prec - val));
        if raw.is_zero() {
            return Self::zero(p, prec);
        }
        let s = vp_big(&raw, p);
        raw /= ppow(p, s);
        val += s;
        let unit = raw.mod_floor(&ppow(p, prec - val));
        PadicNum { p, prec, val, unit }
    }

    pub fn zero(p: i64, prec: i64) -> Self {
        PadicNum { p, prec, val: prec, unit: BigInt::zero() }
    }

    pub fn from_int(p: i64, n: &BigInt, prec: i64) -> Self {
        Self::normalize(p, 0, n.clone(), prec)
    }

    pub fn from_i64(p: i64, n: i64, prec: i64) -> Self {
        Self::from_int(p, &BigInt::from(n), prec)
    }

    /// Rational to absolute precision `prec`.
    pub fn from_rational(p: i64, x: &BigRational, prec: i64) -> Self {
        if x.is_zero() {
            return Self::zero(p, prec);
        }
        let vn = vp_big(x.numer(), p);
        let vd = vp_big(x.denom(), p);
        let v = vn - vd;
        if v >= prec {
            return Self::zero(p, prec);
        }
        let m = ppow(p, prec - v);
        let num = x.numer() / ppow(p, vn);
        let den = x.denom() / ppow(p, vd);
        let u = (num * inv_mod(&den, &m).expect("p-free denominator")).mod_floor(&m);
        PadicNum { p, prec, val: v, unit: u }
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    /// Absolute precision.
    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn relative_precision(&self) -> i64 {
        self.prec - self.val
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    /// `None` when zero to the known precision.
    pub fn valuation(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.val)
    }

    pub fn unit_part(&self) -> &BigInt {
        &self.unit
    }

    pub fn is_unit(&self) -> bool {
        !self.is_zero() && self.val == 0
    }

    /// Lowers the absolute precision to at most `prec`.
    pub fn truncate(&self, prec: i64) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        if self.is_zero() {
            return Self::zero(self.p, prec);
        }
        Self::normalize(self.p, self.val, self.unit.clone(), prec)
    }

    /// Integer representative in `[0, p^prec)`; requires `val >= 0`.
    pub fn to_integer(&self) -> Option<BigInt> {
        if self.is_zero() {
            return Some(BigInt::zero());
        }
        if self.val < 0 {
            return None;
        }
        Some((&self.unit * ppow(self.p, self.val)).mod_floor(&ppow(self.p, self.prec)))
    }

    /// Little-endian base-`p` digits of `p^{-val} x`'s unit part, i.e. of the
    /// integer representative when `val >= 0`.
    pub fn digits(&self) -> Vec<i64> {
        let (mut n, len) = match self.to_integer() {
            Some(n) => (n, self.prec.max(0)),
            None => (self.unit.clone(), self.relative_precision()),
        };
        let pb = BigInt::from(self.p);
        (0..len)
            .map(|_| {
                let (q, r) = n.div_mod_floor(&pb);
                n = q;
                r.to_i64().unwrap()
            })
            .collect()
    }

    fn check_p(&self, o: &Self) {
        assert_eq!(self.p, o.p, "p-adic numbers for different primes");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check_p(o);
        let prec = self.prec.min(o.prec);
        let v0 = self.val.min(o.val);
        let raw = &self.unit * ppow(self.p, self.val - v0) + &o.unit * ppow(self.p, o.val - v0);
        Self::normalize(self.p, v0, raw, prec)
    }

    pub fn neg(&self) -> Self {
        Self::normalize(self.p, self.val, -&self.unit, self.prec)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check_p(o);
        match (self.is_zero(), o.is_zero()) {
            (true, true) => Self::zero(self.p, self.prec + o.prec),
            (true, false) => Self::zero(self.p, self.prec + o.val),
            (false, true) => Self::zero(self.p, o.prec + self.val),
            _ => {
                let val = self.val + o.val;
                let rel = self.relative_precision().min(o.relative_precision());
                Self::normalize(self.p, val, &self.unit * &o.unit, val + rel)
            }
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Precondition("inverse of p-adic zero".into()));
        }
        let rel = self.relative_precision();
        let u = inv_mod(&self.unit, &ppow(self.p, rel)).expect("unit");
        Ok(PadicNum { p: self.p, prec: rel - self.val, val: -self.val, unit: u })
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        if e < 0 {
            return self.inverse()?.pow(-e);
        }
        if e == 0 {
            return Ok(Self::from_i64(self.p, 1, self.relative_precision().max(0)));
        }
        if self.is_zero() {
            return Ok(Self::zero(self.p, self.prec * e));
        }
        let rel = self.relative_precision();
        let m = ppow(self.p, rel);
        let u = self.unit.modpow(&BigInt::from(e), &m);
        let val = self.val * e;
        Ok(PadicNum { p: self.p, prec: val + rel, val, unit: u })
    }

    /// Product with an exact rational.
    pub fn scale_rational(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero(self.p, self.prec.max(0));
        }
        let vq = vp_big(q.numer(), self.p) - vp_big(q.denom(), self.p);
        self.mul(&Self::from_rational(self.p, q, vq + self.relative_precision()))
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale_rational(&BigRational::from_integer(n.into()))
    }

    /// `ord_p(self - o)`, capped at the common precision.
    pub fn residual_valuation(&self, o: &Self) -> i64 {
        let d = self.sub(o);
        d.valuation().unwrap_or(d.prec)
    }
}

impl fmt::Debug for PadicNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PadicNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_integer() {
            Some(n) => write!(f, "{n} + O({}^{})", self.p, self.prec),
            None => write!(f, "{}^{} * {} + O({}^{})", self.p, self.val, self.unit, self.p, self.prec),
        }
    }
}

#[derive(Serialize)]
struct PadicRepr {
    p: i64,
    val: Option<i64>,
    digits: Vec<i64>,
    precision: i64,
}

impl Serialize for PadicNum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PadicRepr { p: self.p, val: self.valuation(), digits: self.digits(), precision: self.prec }.serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn normal_form_and_arithmetic() {
        let x = PadicNum::from_i64(5, 50, 4);
        assert_eq!(x.valuation(), Some(2));
        assert_eq!(x.unit_part(), &BigInt::from(2));
        assert_eq!(x.relative_precision(), 2);
        let h = PadicNum::from_rational(5, &rat(1, 2), 3);
        assert_eq!(h.to_integer(), Some(BigInt::from(63)));
        let one = h.mul(&PadicNum::from_i64(5, 2, 3));
        assert_eq!(one.to_integer(), Some(BigInt::one()));
        let z = PadicNum::from_i64(5, 125, 3);
        assert!(z.is_zero());
        let w = PadicNum::from_rational(5, &rat(3, 25), 2);
        assert_eq!(w.valuation(), Some(-2));
        assert_eq!(w.mul(&PadicNum::from_i64(5, 25, 6)).to_integer(), Some(BigInt::from(3)));
    }

    #[test]
    fn precision_propagates() {
        let a = PadicNum::from_i64(7, 1, 5);
        let b = PadicNum::from_i64(7, 1, 3);
        assert_eq!(a.add(&b).precision(), 3);
        let c = PadicNum::from_i64(7, 8, 4).sub(&PadicNum::from_i64(7, 1, 4));
        assert_eq!(c.valuation(), Some(1));
        assert_eq!(c.relative_precision(), 3);
        assert_eq!(c.inverse().unwrap().valuation(), Some(-1));
    }

    #[test]
    fn digits_little_endian() {
        let x = PadicNum::from_i64(7, 108, 3);
        assert_eq!(x.digits(), vec![3, 1, 2]);
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(json, r#"{"p":7,"val":0,"digits":[3,1,2],"precision":3}"#);
    }
}
