use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::padic::PadicNum;

/// `r/s` with `|r|, s <= bound` and `r ≡ s x mod n`, if any; unique when `2 bound^2 < n`.
pub fn rational_reconstruction(x: &BigInt, n: &BigInt, bound: &BigInt) -> Option<BigRational> {
    let (mut r0, mut r1) = (n.clone(), x.mod_floor(n));
    let (mut s0, mut s1) = (BigInt::zero(), BigInt::one());
    while &r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let s2 = &s0 - &q * &s1;
        r0 = std::mem::replace(&mut r1, r2);
        s0 = std::mem::replace(&mut s1, s2);
    }
    if s1.is_zero() || s1.abs() > *bound || !r1.gcd(&s1).is_one() {
        return None;
    }
    Some(BigRational::new(r1, s1))
}

fn reconstruct(x: &PadicNum, bound: &BigInt) -> Option<BigRational> {
    if x.is_zero() {
        return Some(BigRational::zero());
    }
    let p = BigInt::from(x.p());
    let v = x.valuation()?;
    let n = num_traits::pow(p.clone(), x.relative_precision().max(0) as usize);
    if bound * bound * 2 >= n {
        return None;
    }
    let r = rational_reconstruction(x.unit_part(), &n, bound)?;
    let pv = BigRational::from_integer(num_traits::pow(p, v.unsigned_abs() as usize));
    Some(if v >= 0 { r * pv } else { r / pv })
}

/// Candidate `Π (X - u_τ)` over `Q`, coefficients from constant term up, when every
/// elementary symmetric function reconstructs with height at most `bound`.
pub fn recognize(values: &[PadicNum], bound: i64) -> Option<Vec<BigRational>> {
    let p = values.first()?.p();
    let prec = values.iter().map(|v| v.precision()).min()?;
    // coefficients of Π (X - u) in Q_p, low degree first
    let mut poly = vec![PadicNum::from_i64(p, 1, prec)];
    for u in values {
        let mut next = vec![PadicNum::zero(p, prec); poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i + 1] = next[i + 1].add(c);
            next[i] = next[i].sub(&c.mul(u));
        }
        poly = next;
    }
    let b = BigInt::from(bound);
    poly.iter().map(|c| reconstruct(c, &b)).collect()
}
