use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{FieldElem, QuadField};
use crate::error::{Error, Result};
use crate::scalar::{rat_from_str, rat_to_string};

/// A nonzero fractional ideal `scale * J`, where `J` is a primitive integral
/// ideal given by its Hermite normal form.
///
/// The columns of `[[a, b], [0, d]]` are the Z-basis `a` and `b + d*omega`,
/// with `a, d > 0`, `0 <= b < a`, and `gcd(a, b, d) = 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Ideal {
    field: QuadField,
    scale: BigRational,
    a: i128,
    b: i128,
    d: i128,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct IdealRepr {
    pub scale: String,
    pub hnf: [[i64; 2]; 2],
}

/// Hermite normal form of the Z-span of integer vectors `(x, y)`.
pub(crate) fn hnf_of(vectors: &[(i128, i128)]) -> Option<(i128, i128, i128)> {
    // Column operations: first isolate gcd of the y coordinates.
    let mut pivot: Option<(i128, i128)> = None;
    let mut xs: Vec<i128> = Vec::new();
    for &(x, y) in vectors {
        match pivot {
            None if y != 0 => pivot = Some((x, y)),
            None => xs.push(x),
            Some((px, py)) => {
                if y == 0 {
                    xs.push(x);
                    continue;
                }
                let g = py.extended_gcd(&y);
                // new pivot = s*p + t*v ; remainder vector has y = 0
                let nx = g.x * px + g.y * x;
                let ny = g.gcd;
                let (qp, qv) = (py / g.gcd, y / g.gcd);
                xs.push(qv * px - qp * x);
                pivot = Some((nx, ny));
            }
        }
    }
    let (px, py) = pivot?;
    let a = xs.iter().fold(0i128, |acc, &x| acc.gcd(&x));
    if a == 0 {
        return None;
    }
    let (px, py) = if py < 0 { (-px, -py) } else { (px, py) };
    Some((a, px.rem_euclid(a), py))
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: i128, m: i128) -> Option<i128> {
    let g = a.rem_euclid(m).extended_gcd(&m);
    if g.gcd != 1 {
        return None;
    }
    Some(g.x.rem_euclid(m))
}

fn to_i128(x: &BigInt) -> i128 {
    x.to_i128().expect("ideal coordinates overflow i128")
}

impl Ideal {
    /// The ideal generated (as an O-module) by the given elements.
    pub fn from_generators(field: &QuadField, gens: &[FieldElem]) -> Result<Self> {
        let nonzero: Vec<&FieldElem> = gens.iter().filter(|g| !g.is_zero()).collect();
        if nonzero.is_empty() {
            return Err(Error::Ideal("zero ideal".into()));
        }
        let w = field.omega_elem();
        let mut den = BigInt::one();
        for g in &nonzero {
            den = den.lcm(&g.denominator());
        }
        let den_r = BigRational::from_integer(den.clone());
        let mut vecs = Vec::new();
        for g in &nonzero {
            let g = (*g).clone().in_field(field);
            for h in [g.clone(), &g * &w] {
                let h = h.scale(&den_r);
                vecs.push((to_i128(&h.a().to_integer()), to_i128(&h.b().to_integer())));
            }
        }
        let (a, b, d) = hnf_of(&vecs).ok_or_else(|| Error::Ideal("degenerate generators".into()))?;
        Ok(Self::normalized(field, BigRational::new(1.into(), den), a, b, d))
    }

    fn normalized(field: &QuadField, scale: BigRational, a: i128, b: i128, d: i128) -> Self {
        let g = a.gcd(&b).gcd(&d);
        let scale = scale * BigRational::from_integer(BigInt::from(g));
        let (a, d) = (a / g, d / g);
        let b = (b / g).rem_euclid(a);
        Ideal { field: *field, scale, a, b, d }
    }

    pub fn principal(field: &QuadField, x: &FieldElem) -> Result<Self> {
        Self::from_generators(field, std::slice::from_ref(x))
    }

    pub fn unit(field: &QuadField) -> Self {
        Ideal { field: *field, scale: BigRational::one(), a: 1, b: 0, d: 1 }
    }

    /// `(n)` for a positive integer `n`.
    pub fn from_integer(field: &QuadField, n: i64) -> Result<Self> {
        Self::principal(field, &field.elem(n, 0))
    }

    /// Builds an integral ideal from an HNF triple; checks closure under omega.
    pub fn from_hnf(field: &QuadField, a: i64, b: i64, d: i64) -> Result<Self> {
        if a <= 0 || d <= 0 {
            return Err(Error::Ideal("HNF diagonal must be positive".into()));
        }
        let gens = [field.elem(a, 0), field.elem(b, d)];
        let cand = Self::from_generators(field, &gens)?;
        // The O-module generated must equal the Z-span.
        if cand.norm() != BigRational::from_integer(BigInt::from(a) * BigInt::from(d)) {
            return Err(Error::Ideal(format!("HNF [[{a},{b}],[0,{d}]] is not an ideal")));
        }
        Ok(cand)
    }

    pub fn field(&self) -> &QuadField {
        &self.field
    }

    pub fn scale(&self) -> &BigRational {
        &self.scale
    }

    pub fn hnf(&self) -> (i128, i128, i128) {
        (self.a, self.b, self.d)
    }

    /// Z-basis of the ideal.
    pub fn basis(&self) -> [FieldElem; 2] {
        let f = &self.field;
        let s = &self.scale;
        [
            f.elem(self.a as i64, 0).scale(s),
            FieldElem::new(
                f,
                BigRational::from_integer(self.b.into()) * s,
                BigRational::from_integer(self.d.into()) * s,
            ),
        ]
    }

    pub fn norm(&self) -> BigRational {
        &self.scale * &self.scale * BigRational::from_integer(BigInt::from(self.a * self.d))
    }

    pub fn is_integral(&self) -> bool {
        self.basis().iter().all(|e| e.is_integral())
    }

    pub fn is_one(&self) -> bool {
        *self == Self::unit(&self.field)
    }

    pub fn mul(&self, other: &Ideal) -> Ideal {
        let x = self.basis();
        let y = other.basis();
        let gens: Vec<FieldElem> = x.iter().flat_map(|u| y.iter().map(move |v| u * v)).collect();
        Self::from_generators(&self.field, &gens).expect("product of nonzero ideals")
    }

    pub fn add(&self, other: &Ideal) -> Ideal {
        let mut gens = self.basis().to_vec();
        gens.extend(other.basis());
        Self::from_generators(&self.field, &gens).expect("sum of nonzero ideals")
    }

    pub fn conj(&self) -> Ideal {
        let gens: Vec<FieldElem> = self.basis().iter().map(|e| e.conj()).collect();
        Self::from_generators(&self.field, &gens).expect("conjugate ideal")
    }

    pub fn inverse(&self) -> Ideal {
        let n = self.norm();
        let gens: Vec<FieldElem> =
            self.conj().basis().iter().map(|e| e.scale(&n.recip())).collect();
        Self::from_generators(&self.field, &gens).expect("inverse ideal")
    }

    pub fn pow(&self, e: i64) -> Ideal {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut acc = Self::unit(&self.field);
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    /// Exact membership test.
    pub fn contains(&self, x: &FieldElem) -> bool {
        if x.is_zero() {
            return true;
        }
        let y = x.scale(&self.scale.recip());
        // y = u*a + v*(b + d*omega)
        let v = y.b() / BigRational::from_integer(self.d.into());
        if !v.is_integer() {
            return false;
        }
        let u = (y.a() - &v * BigRational::from_integer(self.b.into()))
            / BigRational::from_integer(self.a.into());
        u.is_integer()
    }

    pub fn contains_ideal(&self, other: &Ideal) -> bool {
        other.basis().iter().all(|e| self.contains(e))
    }

    pub fn is_coprime_to(&self, other: &Ideal) -> bool {
        self.add(other).is_one()
    }

    /// Least positive rational integer contained in the ideal.
    pub fn least_positive_integer(&self) -> BigInt {
        // ideal ∩ Q = scale*a*Z
        let r = &self.scale * BigRational::from_integer(self.a.into());
        r.numer().abs()
    }

    pub fn to_repr(&self) -> IdealRepr {
        IdealRepr {
            scale: rat_to_string(&self.scale),
            hnf: [[self.a as i64, self.b as i64], [0, self.d as i64]],
        }
    }

    pub fn from_repr(field: &QuadField, r: &IdealRepr) -> Result<Self> {
        let s = rat_from_str(&r.scale).ok_or_else(|| Error::Parse(format!("bad scale {}", r.scale)))?;
        let j = Self::from_hnf(field, r.hnf[0][0], r.hnf[0][1], r.hnf[1][1])?;
        let gens: Vec<FieldElem> = j.basis().iter().map(|e| e.scale(&s)).collect();
        Self::from_generators(field, &gens)
    }
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*[[{}, {}], [0, {}]]", self.scale, self.a, self.b, self.d)
    }
}

impl Serialize for Ideal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_repr().serialize(s)
    }
}

/// A prime ideal together with its splitting data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeIdeal {
    pub ideal: Ideal,
    /// rational prime below
    pub ell: i64,
    pub residue_degree: u32,
    pub ramification: u32,
    /// `omega ≡ root (mod P)` when the residue degree is 1.
    pub root: Option<i64>,
}

impl PrimeIdeal {
    pub fn norm(&self) -> i64 {
        self.ell.pow(self.residue_degree)
    }

    fn ell_valuation(x: &BigInt, ell: i64) -> i64 {
        let mut x = x.abs();
        let l = BigInt::from(ell);
        let mut v = 0;
        if x.is_zero() {
            return i64::MAX;
        }
        while (&x % &l).is_zero() {
            x /= &l;
            v += 1;
        }
        v
    }

    /// `v_P` of a nonzero fractional ideal.
    pub fn valuation_of_ideal(&self, i: &Ideal) -> i64 {
        let s = i.scale();
        let base = (Self::ell_valuation(s.numer(), self.ell) - Self::ell_valuation(s.denom(), self.ell))
            * self.ramification as i64;
        let j = Ideal::normalized(i.field(), BigRational::one(), i.a, i.b, i.d);
        let nj = BigInt::from(j.a * j.d);
        let bound = Self::ell_valuation(&nj, self.ell) / self.residue_degree as i64;
        let mut k = 0;
        let mut pk = self.ideal.clone();
        while k < bound && pk.contains_ideal(&j) {
            k += 1;
            pk = pk.mul(&self.ideal);
        }
        base + k
    }

    /// `v_P(x)` for nonzero `x`.
    pub fn valuation(&self, x: &FieldElem) -> i64 {
        let f = *self.ideal.field();
        self.valuation_of_ideal(&Ideal::principal(&f, x).expect("nonzero element"))
    }

    pub fn contains(&self, x: &FieldElem) -> bool {
        self.ideal.contains(x)
    }

    /// `omega mod ell^k` for a degree-1 unramified prime, by Hensel lifting.
    pub fn root_mod_power(&self, k: u32) -> Option<i128> {
        let r0 = self.root? as i128;
        if self.ramification != 1 {
            return None;
        }
        let (t, n) = self.ideal.field().omega_relation();
        let (t, n) = (t as i128, n as i128);
        let l = self.ell as i128;
        let mut r = r0;
        let mut m = l;
        for _ in 1..k {
            m *= l;
            let fr = (r * r - t * r - n).rem_euclid(m);
            let dfr = (2 * r - t).rem_euclid(m);
            let inv = mod_inverse(dfr, m)?;
            r = (r - fr * inv).rem_euclid(m);
        }
        Some(r.rem_euclid(m))
    }

    /// Residue of an element that is integral at `P`, for degree-1 primes.
    pub fn residue(&self, x: &FieldElem) -> Option<i64> {
        let r = self.root?;
        let l = BigInt::from(self.ell);
        let red = |q: &BigRational| -> Option<BigInt> {
            let den = q.denom().mod_floor(&l);
            if den.is_zero() {
                return None;
            }
            let inv = den.modpow(&(&l - 2u32), &l);
            Some((q.numer() * inv).mod_floor(&l))
        };
        let v = (red(x.a())? + red(x.b())? * BigInt::from(r)).mod_floor(&l);
        v.to_i64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hensel_root_sqrt2_mod_343() {
        let f = crate::quadfield::QuadField::new(2).unwrap();
        let ps = primes_above(&f, 7);
        let p = ps.iter().find(|p| p.root == Some(3)).unwrap();
        assert_eq!(p.root_mod_power(3), Some(108));
        let p4 = ps.iter().find(|p| p.root == Some(4)).unwrap();
        assert_eq!(p4.root_mod_power(3), Some(343 - 108));
    }

    use crate::quadfield::primes_above;
    use proptest::prelude::*;

    #[test]
    fn ramified_two_in_q_sqrt2() {
        let f = QuadField::new(2).unwrap();
        let ps = primes_above(&f, 2);
        assert_eq!(ps.len(), 1);
        let p = &ps[0];
        assert_eq!(p.ramification, 2);
        assert_eq!(p.ideal.norm(), BigRational::from_integer(2.into()));
        assert_eq!(p.ideal.pow(2), Ideal::from_integer(&f, 2).unwrap());
    }

    #[test]
    fn inert_norm() {
        let f = QuadField::new(2).unwrap();
        let three = Ideal::from_integer(&f, 3).unwrap();
        assert_eq!(three.norm(), BigRational::from_integer(9.into()));
        let ps = primes_above(&f, 3);
        assert_eq!(ps.len(), 1);
        assert_eq!(ps[0].residue_degree, 2);
    }

    #[test]
    fn inverse_identity() {
        let f = QuadField::new(3).unwrap();
        let i = Ideal::from_generators(&f, &[f.elem(11, 0), f.elem(5, 1)]).unwrap();
        assert!(i.mul(&i.inverse()).is_one());
        assert_eq!(i.inverse().inverse(), i);
    }

    #[test]
    fn repr_roundtrip() {
        let f = QuadField::new(5).unwrap();
        let i = Ideal::from_generators(&f, &[f.elem(11, 0), f.elem(4, 1)]).unwrap().pow(-2);
        let r = i.to_repr();
        assert_eq!(Ideal::from_repr(&f, &r).unwrap(), i);
    }

    #[test]
    fn non_ideal_hnf_rejected() {
        let f = QuadField::new(2).unwrap();
        assert!(Ideal::from_hnf(&f, 3, 1, 1).is_err());
        assert!(Ideal::from_hnf(&f, 7, 3, 1).is_ok());
    }

    proptest! {
        #[test]
        fn norm_multiplicative(a in 1i64..40, b in -40i64..40, c in 1i64..40, e in -40i64..40, d in prop::sample::select(vec![2i64, 3, 5])) {
            let f = QuadField::new(d).unwrap();
            let x = f.elem(a, b);
            let y = f.elem(c, e);
            prop_assume!(!x.norm().is_zero() && !y.norm().is_zero());
            let i = Ideal::principal(&f, &x).unwrap();
            let j = Ideal::from_generators(&f, &[y.clone(), f.elem(a + 1, 0)]).unwrap();
            prop_assert_eq!(i.mul(&j).norm(), i.norm() * j.norm());
            prop_assert_eq!(i.norm(), x.norm().abs());
            prop_assert!(i.contains(&x));
            prop_assert_eq!(i.inverse().inverse(), i.clone());
        }
    }
}
