use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::Zero;

use crate::scalar::Scalar;

/// An element of `S(ζ_q)`, `q` prime, in the basis `ζ, ζ^2, ..., ζ^{q-1}`.
///
/// `1 = -(ζ + ... + ζ^{q-1})`, so the representation is unique.
#[derive(Clone, Debug, PartialEq)]
pub struct Cyclotomic<S: Scalar> {
    q: u32,
    /// `coeffs[i]` multiplies `ζ^{i+1}`
    coeffs: Vec<S>,
}

impl<S: Scalar> Cyclotomic<S> {
    pub fn zero(q: u32) -> Self {
        Cyclotomic { q, coeffs: vec![S::zero(); q as usize - 1] }
    }

    /// Builds from coefficients of `ζ^0, ..., ζ^{q-1}`.
    pub fn from_powers(q: u32, full: &[S]) -> Self {
        assert_eq!(full.len(), q as usize);
        let c0 = full[0].clone();
        Cyclotomic { q, coeffs: full[1..].iter().map(|c| c.clone() - c0.clone()).collect() }
    }

    pub fn constant(q: u32, c: S) -> Self {
        let mut full = vec![S::zero(); q as usize];
        full[0] = c;
        Self::from_powers(q, &full)
    }

    pub fn one(q: u32) -> Self {
        Self::constant(q, S::one())
    }

    /// `ζ^j`.
    pub fn zeta_pow(q: u32, j: i64) -> Self {
        let mut full = vec![S::zero(); q as usize];
        full[j.rem_euclid(q as i64) as usize] = S::one();
        Self::from_powers(q, &full)
    }

    /// `1/(1 - ζ^j) = -(1/q) Σ_{k=1}^{q-1} k ζ^{jk}`, for `j ≢ 0`.
    pub fn inv_one_minus(q: u32, j: i64) -> Option<Self> {
        if j.rem_euclid(q as i64) == 0 {
            return None;
        }
        let mut full = vec![S::zero(); q as usize];
        let qs = S::from_i64(q as i64);
        for k in 1..q as i64 {
            let idx = (j * k).rem_euclid(q as i64) as usize;
            full[idx] = full[idx].clone() - S::from_i64(k) / qs.clone();
        }
        Some(Self::from_powers(q, &full))
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    fn full(&self) -> Vec<S> {
        let mut v = Vec::with_capacity(self.q as usize);
        v.push(S::zero());
        v.extend(self.coeffs.iter().cloned());
        v
    }

    /// The value, when the element lies in `S`.
    pub fn as_scalar(&self) -> Option<S> {
        let c = self.coeffs[0].clone();
        if self.coeffs.iter().all(|x| *x == c) {
            Some(-c)
        } else {
            None
        }
    }

    pub fn is_rational(&self) -> bool {
        self.as_scalar().is_some()
    }

    /// `ζ ↦ ζ^λ`.
    pub fn galois(&self, lambda: i64) -> Self {
        let q = self.q as i64;
        assert!(lambda.rem_euclid(q) != 0);
        let mut full = vec![S::zero(); self.q as usize];
        for (i, c) in self.full().into_iter().enumerate() {
            let idx = (i as i64 * lambda).rem_euclid(q) as usize;
            full[idx] = full[idx].clone() + c;
        }
        Self::from_powers(self.q, &full)
    }

    /// Trace to `S`: with full coefficients `a_i`, `q a_0 - Σ a_i`.
    pub fn trace(&self) -> S {
        let s = self.coeffs.iter().fold(S::zero(), |acc, c| acc + c.clone());
        -s
    }

    /// Trace of `ζ^n * self`, without forming the product.
    pub fn trace_shifted(&self, n: i64) -> S {
        let q = self.q as i64;
        let full = self.full();
        let a0 = full[(-n).rem_euclid(q) as usize].clone();
        let s = full.iter().fold(S::zero(), |acc, c| acc + c.clone());
        S::from_i64(q) * a0 - s
    }

    pub fn scale(&self, s: &S) -> Self {
        Cyclotomic { q: self.q, coeffs: self.coeffs.iter().map(|c| c.clone() * s.clone()).collect() }
    }

    /// Applies `f` to every coefficient.
    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Cyclotomic<T> {
        Cyclotomic { q: self.q, coeffs: self.coeffs.iter().map(f).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.q);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl<S: Scalar> Add for &Cyclotomic<S> {
    type Output = Cyclotomic<S>;
    fn add(self, o: &Cyclotomic<S>) -> Cyclotomic<S> {
        assert_eq!(self.q, o.q);
        Cyclotomic {
            q: self.q,
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }
}

impl<S: Scalar> Sub for &Cyclotomic<S> {
    type Output = Cyclotomic<S>;
    fn sub(self, o: &Cyclotomic<S>) -> Cyclotomic<S> {
        assert_eq!(self.q, o.q);
        Cyclotomic {
            q: self.q,
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }
}

impl<S: Scalar> Neg for &Cyclotomic<S> {
    type Output = Cyclotomic<S>;
    fn neg(self) -> Cyclotomic<S> {
        Cyclotomic { q: self.q, coeffs: self.coeffs.iter().map(|a| -a.clone()).collect() }
    }
}

impl<S: Scalar> Mul for &Cyclotomic<S> {
    type Output = Cyclotomic<S>;
    fn mul(self, o: &Cyclotomic<S>) -> Cyclotomic<S> {
        assert_eq!(self.q, o.q);
        let q = self.q as usize;
        let mut full = vec![S::zero(); q];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == S::zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                let k = (i + j + 2) % q;
                full[k] = full[k].clone() + a.clone() * b.clone();
            }
        }
        Cyclotomic::from_powers(self.q, &full)
    }
}

impl Cyclotomic<BigRational> {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    type C = Cyclotomic<BigRational>;

    #[test]
    fn one_minus_inverse() {
        for q in [5u32, 7, 17] {
            for j in 1..q as i64 {
                let x = &C::one(q) - &C::zeta_pow(q, j);
                let y = C::inv_one_minus(q, j).unwrap();
                assert_eq!(&x * &y, C::one(q));
            }
            assert!(C::inv_one_minus(q, q as i64).is_none());
        }
    }

    #[test]
    fn rationality_and_trace() {
        let q = 7;
        let s = (1..q as i64).fold(C::zero(q), |acc, j| &acc + &C::zeta_pow(q, j));
        assert_eq!(s.as_scalar(), Some(rat(-1, 1)));
        assert!(!C::zeta_pow(q, 1).is_rational());
        let x = &C::zeta_pow(q, 2) + &C::constant(q, rat(3, 2));
        let literal = (1..q as i64).fold(C::zero(q), |acc, l| &acc + &x.galois(l));
        assert_eq!(literal.as_scalar().unwrap(), x.trace());
        assert_eq!(x.trace(), rat(-1, 1) + rat(9, 1));
        for n in 0..q as i64 {
            assert_eq!((&C::zeta_pow(q, n) * &x).trace(), x.trace_shifted(n));
        }
    }

    #[test]
    fn zeta_power_q_is_one() {
        let z = C::zeta_pow(11, 1);
        assert_eq!(z.pow(11), C::one(11));
    }
}
