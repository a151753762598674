use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::num::{inv_mod, ppow, PadicNum};
use crate::error::{Error, Result};
use crate::quadfield::{FieldElem, PrimeIdeal, QuadField};

/// The `(p-1)`-st root of unity congruent to a unit `x` mod `p`.
pub fn teichmuller(x: &PadicNum) -> Result<PadicNum> {
    if !x.is_unit() {
        return Err(Error::Precondition("teichmuller of a non-unit".into()));
    }
    let p = x.p();
    let n = x.relative_precision();
    let m = ppow(p, n);
    let pb = BigInt::from(p);
    let mut y = x.unit_part().clone();
    for _ in 0..n {
        y = y.modpow(&pb, &m);
    }
    Ok(PadicNum::from_int(p, &y, n))
}

fn ilog(p: i64, k: i64) -> i64 {
    let mut v = 0;
    let mut t = k;
    while t >= p {
        t /= p;
        v += 1;
    }
    v
}

fn vp_small(mut k: i64, p: i64) -> i64 {
    let mut v = 0;
    while k % p == 0 {
        k /= p;
        v += 1;
    }
    v
}

/// `log(1 + y) mod p^n` for an integer `y` with `ord_p(y) >= 1`.
///
/// Term `k` has valuation at least `k - floor(log_p k)`, which is
/// non-decreasing in `k`; summation stops once it reaches `n`.
fn log_one_plus(y: &BigInt, p: i64, n: i64) -> BigInt {
    let mut kmax = 1;
    while kmax - ilog(p, kmax) < n {
        kmax += 1;
    }
    let guard = ilog(p, kmax.max(1));
    let big = ppow(p, n + guard);
    let target = ppow(p, n);
    let mut acc = BigInt::zero();
    let mut yk = BigInt::one();
    for k in 1..kmax {
        yk = (&yk * y).mod_floor(&big);
        let s = vp_small(k, p);
        let kp = BigInt::from(k / p.pow(s as u32));
        let term = (&yk / ppow(p, s)) * inv_mod(&kp, &target).unwrap();
        if k % 2 == 1 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc.mod_floor(&target)
}

/// Iwasawa logarithm: `log_p(p) = 0`, zero on roots of unity.
pub fn iwasawa_log(x: &PadicNum) -> Result<PadicNum> {
    if x.is_zero() {
        return Err(Error::Precondition("log of p-adic zero".into()));
    }
    let p = x.p();
    let n = x.relative_precision();
    let u = x.unit_part();
    // `u^{p-1}` (`u^2` for p = 2) is a principal unit
    let (e, lost) = if p == 2 { (2i64, 1) } else { (p - 1, 0) };
    let big = ppow(p, n + lost);
    let y: BigInt = (u.modpow(&BigInt::from(e), &big) - BigInt::one()).mod_floor(&big);
    let l = log_one_plus(&y, p, n + lost);
    let res = PadicNum::from_int(p, &l, n + lost);
    Ok(res.scale_rational(&BigRational::new(BigInt::one(), BigInt::from(e))).truncate(n))
}

/// The embedding `F → Q_p` attached to a degree-one prime `𝔭`.
#[derive(Clone, Debug)]
pub struct PadicEmbedding {
    pub field: QuadField,
    pub prime: PrimeIdeal,
}

impl PadicEmbedding {
    pub fn new(prime: &PrimeIdeal) -> Result<Self> {
        if prime.residue_degree != 1 || prime.ramification != 1 || prime.root.is_none() {
            return Err(Error::Unsupported("completion at p must be Q_p (split prime)".into()));
        }
        Ok(PadicEmbedding { field: *prime.ideal.field(), prime: prime.clone() })
    }

    pub fn p(&self) -> i64 {
        self.prime.ell
    }

    /// `omega mod p^n`, Hensel-lifted from the residue fixed by `𝔭`.
    pub fn omega_root(&self, n: i64) -> BigInt {
        let p = self.p();
        let (t, c) = self.field.omega_relation();
        let (t, c) = (BigInt::from(t), BigInt::from(c));
        let mut r = BigInt::from(self.prime.root.unwrap());
        for k in 2..=n.max(1) {
            let m = ppow(p, k);
            let fr = (&r * &r - &t * &r - &c).mod_floor(&m);
            let dfr = (BigInt::from(2) * &r - &t).mod_floor(&m);
            r = (&r - fr * inv_mod(&dfr, &m).expect("simple root")).mod_floor(&m);
        }
        r.mod_floor(&ppow(p, n.max(1)))
    }

    /// Image of `x` with relative precision at least `n`.
    pub fn embed(&self, x: &FieldElem, n: i64) -> PadicNum {
        let p = self.p();
        if x.is_zero() {
            return PadicNum::zero(p, n);
        }
        let x = x.clone().in_field(&self.field);
        // x = (A + B ω) / D with A, B, D integers
        let den = x.a().denom().lcm(x.b().denom());
        let big_a = x.a().numer() * (&den / x.a().denom());
        let big_b = x.b().numer() * (&den / x.b().denom());
        let image = |k: i64| (&big_a + &big_b * self.omega_root(k)).mod_floor(&ppow(p, k));
        // ord_𝔭(A + Bω) is seen once it drops below the working exponent
        let mut k = n.max(1) + 4;
        let vx = loop {
            let y = image(k);
            if !y.is_zero() {
                let v = PadicNum::from_int(p, &y, k).valuation().unwrap();
                if v < k {
                    break v;
                }
            }
            k *= 2;
        };
        let top = vx + n + 1;
        let num = PadicNum::from_int(p, &image(top), top);
        let inv_den = BigRational::new(BigInt::one(), den);
        let dv = -PadicNum::from_rational(p, &inv_den, 1).valuation().unwrap_or(0);
        let v = vx - dv;
        num.mul(&PadicNum::from_rational(p, &inv_den, top)).truncate(v + n)
    }

    pub fn log(&self, x: &FieldElem, n: i64) -> Result<PadicNum> {
        iwasawa_log(&self.embed(x, n))
    }
}

/// A formal `Σ q_i log(α_i) + c·π` with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlgLogCombo {
    pub terms: Vec<(LogCoeff, FieldElem)>,
    /// coefficient of the symbol `π`, sent to zero by the bracket
    pub pi_part: LogCoeff,
}

/// An exact rational serialized as `p/q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LogCoeff(#[serde(with = "crate::scalar::rat_serde")] pub BigRational);

impl AlgLogCombo {
    pub fn new() -> Self {
        AlgLogCombo { terms: Vec::new(), pi_part: LogCoeff(BigRational::zero()) }
    }

    pub fn push(&mut self, q: BigRational, alpha: FieldElem) -> Result<()> {
        if alpha.is_zero() {
            return Err(Error::Precondition("log of zero".into()));
        }
        if !q.is_zero() {
            self.terms.push((LogCoeff(q), alpha));
        }
        Ok(())
    }
}

impl Default for AlgLogCombo {
    fn default() -> Self {
        Self::new()
    }
}

/// `[Σ q_i log α_i + cπ]_p = Σ q_i log_p α_i`.
pub fn bracket_p(c: &AlgLogCombo, emb: &PadicEmbedding, n: i64) -> Result<PadicNum> {
    let p = emb.p();
    let mut acc = PadicNum::zero(p, n);
    for (q, alpha) in &c.terms {
        let l = emb.log(alpha, n + 8)?;
        acc = acc.add(&l.scale_rational(&q.0));
    }
    Ok(acc.truncate(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadfield::primes_above;
    use crate::scalar::rat;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn emb2() -> PadicEmbedding {
        let f = QuadField::new(2).unwrap();
        let p = primes_above(&f, 7).into_iter().find(|p| p.root == Some(3)).unwrap();
        PadicEmbedding::new(&p).unwrap()
    }

    // brute force: the x in [0, 125) with x^4 = 1 and x = 2 mod 5
    #[test]
    fn teichmuller_of_two_mod_125() {
        let oracle = (0..125i64).find(|x| x % 5 == 2 && (x * x % 125) * (x * x % 125) % 125 == 1).unwrap();
        assert_eq!(oracle, 57);
        let t = teichmuller(&PadicNum::from_i64(5, 2, 3)).unwrap();
        assert_eq!(t.to_integer(), Some(BigInt::from(57)));
        assert_eq!(teichmuller(&t).unwrap(), t);
        assert!(iwasawa_log(&t).unwrap().is_zero());
        assert_eq!(teichmuller(&PadicNum::from_i64(5, 1, 3)).unwrap().to_integer(), Some(BigInt::one()));
    }

    // rational partial sums of the series against the integer routine
    #[test]
    fn log_of_six_mod_125() {
        let mut s = BigRational::zero();
        for k in 1..40i64 {
            let t = BigRational::new(num_traits::pow(BigInt::from(5), k as usize), k.into());
            s = if k % 2 == 1 { s + t } else { s - t };
        }
        let oracle = PadicNum::from_rational(5, &s, 3).to_integer().unwrap();
        assert_eq!(oracle, BigInt::from(55));
        let l = iwasawa_log(&PadicNum::from_i64(5, 6, 3)).unwrap();
        assert_eq!(l.to_integer(), Some(BigInt::from(55)));
    }

    #[test]
    fn log_branch_and_homomorphism() {
        assert!(iwasawa_log(&PadicNum::from_i64(7, 7, 10)).unwrap().is_zero());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let a = rng.gen_range(1..10_000i64);
            let b = rng.gen_range(1..10_000i64);
            if a % 7 == 0 || b % 7 == 0 {
                continue;
            }
            let x = PadicNum::from_i64(7, a, 12);
            let y = PadicNum::from_i64(7, b, 12);
            let lhs = iwasawa_log(&x.mul(&y)).unwrap();
            let rhs = iwasawa_log(&x).unwrap().add(&iwasawa_log(&y).unwrap());
            assert!(lhs.residual_valuation(&rhs) >= 12);
        }
        // p = 2 goes through squares
        let l = iwasawa_log(&PadicNum::from_i64(2, 5, 10)).unwrap();
        let l3 = iwasawa_log(&PadicNum::from_i64(2, 125, 10)).unwrap();
        assert!(l.scale_int(3).residual_valuation(&l3) >= 9);
        assert!(iwasawa_log(&PadicNum::from_i64(2, -1, 10)).unwrap().is_zero());
    }

    #[test]
    fn sqrt2_mod_343() {
        let e = emb2();
        assert_eq!(e.omega_root(3), BigInt::from(108));
        assert_eq!(e.prime.root_mod_power(3), Some(108));
        let s = e.embed(&e.field.elem(0, 1), 3);
        assert_eq!(s.to_integer(), Some(BigInt::from(108)));
        assert_eq!((108 * 108) % 343, 2);
    }

    #[test]
    fn embedding_is_a_ring_map() {
        let e = emb2();
        let f = e.field;
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..40 {
            let x = FieldElem::new(&f, rat(rng.gen_range(-50..50), rng.gen_range(1..6)), rat(rng.gen_range(-50..50), 1));
            let y = f.elem(rng.gen_range(-50..50), rng.gen_range(-50..50));
            if x.is_zero() || y.is_zero() {
                continue;
            }
            let xy = e.embed(&(&x * &y), 10);
            let prod = e.embed(&x, 10).mul(&e.embed(&y, 10));
            assert!(xy.residual_valuation(&prod) >= prod.precision());
            assert!(xy.relative_precision() >= 10);
            let s = e.embed(&(&x + &y), 10);
            let sum = e.embed(&x, 12).add(&e.embed(&y, 12));
            assert!(s.residual_valuation(&sum) >= s.precision().min(sum.precision()));
        }
        // an element of 𝔭 has positive valuation
        let pi = f.elem(3, 1);
        assert_eq!(pi.norm(), rat(7, 1));
        let v = e.embed(&pi, 5);
        assert_eq!(v.valuation().unwrap(), e.prime.valuation(&pi));
        // coordinates far beyond i128
        let eps = f.elem(1, 1);
        let big = e.embed(&eps.pow(300), 10);
        assert!(big.residual_valuation(&e.embed(&eps, 10).pow(300).unwrap()) >= 10);
        let q = e.embed(&(&pi.pow(40) * &eps.pow(-200)), 6);
        assert_eq!(q.valuation(), Some(40 * e.prime.valuation(&pi)));
        let q = e.embed(&(&pi.conj().pow(40) * &eps.pow(-200)), 6);
        assert_eq!(q.valuation(), Some(40 * e.prime.valuation(&pi.conj())));
    }

    #[test]
    fn bracket_map() {
        let e = emb2();
        let f = e.field;
        let mut c = AlgLogCombo::new();
        c.push(rat(1, 1), FieldElem::from_integer(2)).unwrap();
        let b = bracket_p(&c, &e, 8).unwrap();
        assert_eq!(b, iwasawa_log(&PadicNum::from_i64(7, 2, 8)).unwrap());
        let mut pi_only = AlgLogCombo::new();
        pi_only.pi_part = LogCoeff(rat(3, 1));
        assert!(bracket_p(&pi_only, &e, 8).unwrap().is_zero());
        let (a, bb) = (f.elem(3, 2), f.elem(5, -1));
        let mut sep = AlgLogCombo::new();
        sep.push(rat(1, 1), a.clone()).unwrap();
        sep.push(rat(1, 1), bb.clone()).unwrap();
        let mut joint = AlgLogCombo::new();
        joint.push(rat(1, 1), &a * &bb).unwrap();
        let (l, r) = (bracket_p(&sep, &e, 8).unwrap(), bracket_p(&joint, &e, 8).unwrap());
        assert!(l.residual_valuation(&r) >= 8);
        // units of the field have log in p Z_p
        let u = f.elem(1, 1);
        assert!(e.log(&u, 6).unwrap().valuation().is_none_or(|v| v >= 1));
    }
}
