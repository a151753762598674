use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{omega_relation, QuadField};
use crate::scalar::{rat_from_str, rat_to_string, Scalar};

/// An element `a + b*omega` of a real quadratic field.
///
/// `d` records the field; `d == 0` marks a field-agnostic rational constant
/// (then `b == 0`), which lets rationals interoperate with every field.
#[derive(Clone)]
pub struct FieldElem {
    d: i64,
    a: BigRational,
    b: BigRational,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct FieldElemRepr {
    pub a: String,
    pub b: String,
}

impl PartialEq for FieldElem {
    fn eq(&self, o: &Self) -> bool {
        self.a == o.a && self.b == o.b && (self.b.is_zero() || self.d == o.d)
    }
}

impl Eq for FieldElem {}

impl std::hash::Hash for FieldElem {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        self.a.hash(h);
        self.b.hash(h);
        if !self.b.is_zero() {
            self.d.hash(h);
        }
    }
}

fn merge_d(x: i64, y: i64) -> i64 {
    match (x, y) {
        (0, y) => y,
        (x, 0) => x,
        (x, y) => {
            assert_eq!(x, y, "field elements from different fields");
            x
        }
    }
}

fn sign_of_sum(p: &BigRational, q: &BigRational, d: i64) -> Ordering {
    // sign of p + q*sqrt(d)
    let sp = p.cmp(&BigRational::zero());
    let sq = q.cmp(&BigRational::zero());
    if sq == Ordering::Equal {
        return sp;
    }
    if sp == Ordering::Equal || sp == sq {
        return sq;
    }
    let lhs = p * p;
    let rhs = q * q * BigRational::from_integer(BigInt::from(d));
    match lhs.cmp(&rhs) {
        Ordering::Greater => sp,
        Ordering::Less => sq,
        Ordering::Equal => Ordering::Equal,
    }
}

impl FieldElem {
    pub fn new(field: &QuadField, a: BigRational, b: BigRational) -> Self {
        FieldElem { d: field.d(), a, b }
    }

    pub fn from_ints(field: &QuadField, a: i64, b: i64) -> Self {
        Self::new(field, BigRational::from_integer(a.into()), BigRational::from_integer(b.into()))
    }

    pub(crate) fn from_int_in(field: &QuadField, a: i64) -> Self {
        Self::from_ints(field, a, 0)
    }

    /// A rational constant, compatible with any field.
    pub fn rational(r: BigRational) -> Self {
        FieldElem { d: 0, a: r, b: BigRational::zero() }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::rational(BigRational::from_integer(n.into()))
    }

    /// Rebinds a rational constant to a concrete field.
    pub fn in_field(mut self, field: &QuadField) -> Self {
        if self.d == 0 {
            self.d = field.d();
        }
        assert_eq!(self.d, field.d());
        self
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    fn relation(&self) -> (i64, i64) {
        if self.d == 0 {
            (0, 0)
        } else {
            omega_relation(self.d)
        }
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.a.clone())
    }

    pub fn is_integral(&self) -> bool {
        self.a.is_integer() && self.b.is_integer()
    }

    /// Integer coordinates, when integral and small.
    pub fn int_coords(&self) -> Option<(i64, i64)> {
        if !self.is_integral() {
            return None;
        }
        Some((self.a.to_integer().to_i64()?, self.b.to_integer().to_i64()?))
    }

    /// Writes the element as `p + q*sqrt D`.
    pub fn sqrt_form(&self) -> (BigRational, BigRational) {
        let (t, _) = self.relation();
        if t == 1 {
            let half = &self.b / BigRational::from_integer(2.into());
            (&self.a + &half, half)
        } else {
            (self.a.clone(), self.b.clone())
        }
    }

    /// Galois conjugate.
    pub fn conj(&self) -> Self {
        let (t, _) = self.relation();
        FieldElem {
            d: self.d,
            a: &self.a + &self.b * BigRational::from_integer(t.into()),
            b: -&self.b,
        }
    }

    pub fn norm(&self) -> BigRational {
        let (t, n) = self.relation();
        &self.a * &self.a + &self.a * &self.b * BigRational::from_integer(t.into())
            - &self.b * &self.b * BigRational::from_integer(n.into())
    }

    pub fn trace(&self) -> BigRational {
        let (t, _) = self.relation();
        &self.a * BigRational::from_integer(2.into()) + &self.b * BigRational::from_integer(t.into())
    }

    /// Exact signs of the two real embeddings (sqrt D > 0 first).
    pub fn embedding_signs(&self) -> (Ordering, Ordering) {
        let (p, q) = self.sqrt_form();
        (sign_of_sum(&p, &q, self.d), sign_of_sum(&p, &(-&q), self.d))
    }

    pub fn is_totally_positive(&self) -> bool {
        self.embedding_signs() == (Ordering::Greater, Ordering::Greater)
    }

    /// Floating-point real embeddings, for estimates only.
    pub fn embeddings_f64(&self) -> (f64, f64) {
        let (p, q) = self.sqrt_form();
        let p = p.to_f64().unwrap_or(f64::NAN);
        let q = q.to_f64().unwrap_or(f64::NAN);
        let s = (self.d as f64).sqrt();
        (p + q * s, p - q * s)
    }

    pub fn inverse(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        let c = self.conj();
        Some(FieldElem { d: self.d, a: c.a / &n, b: c.b / n })
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        FieldElem { d: self.d, a: &self.a * r, b: &self.b * r }
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inverse().expect("inverse of zero") } else { self.clone() };
        let mut acc = FieldElem { d: self.d, a: BigRational::one(), b: BigRational::zero() };
        let mut sq = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &sq;
            }
            sq = &sq * &sq;
            k >>= 1;
        }
        acc
    }

    /// Least common denominator of both coordinates.
    pub fn denominator(&self) -> BigInt {
        self.a.denom().lcm(self.b.denom())
    }

    /// Positive rational multiple with coprime integer coordinates.
    pub fn primitive(&self) -> Self {
        let den = self.denominator();
        let a = (&self.a * BigRational::from_integer(den.clone())).to_integer();
        let b = (&self.b * BigRational::from_integer(den)).to_integer();
        let g = a.gcd(&b);
        if g.is_zero() {
            return self.clone();
        }
        FieldElem {
            d: self.d,
            a: BigRational::from_integer(a / &g),
            b: BigRational::from_integer(b / &g),
        }
    }

    pub fn to_repr(&self) -> FieldElemRepr {
        FieldElemRepr { a: rat_to_string(&self.a), b: rat_to_string(&self.b) }
    }

    pub fn from_repr(field: &QuadField, r: &FieldElemRepr) -> Option<Self> {
        Some(Self::new(field, rat_from_str(&r.a)?, rat_from_str(&r.b)?))
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let w = if self.d.mod_floor(&4) == 1 { "w" } else { "r" };
        if self.a.is_zero() {
            write!(f, "{}*{w}", self.b)
        } else if self.b.is_negative() {
            write!(f, "{} - {}*{w}", self.a, -&self.b)
        } else {
            write!(f, "{} + {}*{w}", self.a, self.b)
        }
    }
}

impl Serialize for FieldElem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_repr().serialize(s)
    }
}

impl<'a> Add<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn add(self, o: &FieldElem) -> FieldElem {
        FieldElem { d: merge_d(self.d, o.d), a: &self.a + &o.a, b: &self.b + &o.b }
    }
}

impl<'a> Sub<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn sub(self, o: &FieldElem) -> FieldElem {
        FieldElem { d: merge_d(self.d, o.d), a: &self.a - &o.a, b: &self.b - &o.b }
    }
}

impl<'a> Mul<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn mul(self, o: &FieldElem) -> FieldElem {
        let d = merge_d(self.d, o.d);
        let (t, n) = if d == 0 { (0, 0) } else { omega_relation(d) };
        let bd = &self.b * &o.b;
        FieldElem {
            d,
            a: &self.a * &o.a + &bd * BigRational::from_integer(n.into()),
            b: &self.a * &o.b + &self.b * &o.a + bd * BigRational::from_integer(t.into()),
        }
    }
}

impl<'a> Div<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: &FieldElem) -> FieldElem {
        self * &o.inverse().expect("division by zero field element")
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem { d: self.d, a: -&self.a, b: -&self.b }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $m(self, o: FieldElem) -> FieldElem {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $m(self, o: &FieldElem) -> FieldElem {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        -&self
    }
}

impl Zero for FieldElem {
    fn zero() -> Self {
        FieldElem::from_integer(0)
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for FieldElem {
    fn one() -> Self {
        FieldElem::from_integer(1)
    }
}

impl Scalar for FieldElem {
    fn from_rational(r: &BigRational) -> Self {
        FieldElem::rational(r.clone())
    }
}
