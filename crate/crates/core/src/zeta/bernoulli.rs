use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::scalar::Scalar;

fn binom(n: u32, k: u32) -> BigRational {
    let mut r = BigRational::one();
    for i in 0..k {
        r = r * BigRational::from_integer((n - i).into()) / BigRational::from_integer((i + 1).into());
    }
    r
}

/// Bernoulli numbers with `B_1 = -1/2`.
pub fn bernoulli_number(n: u32) -> BigRational {
    let mut b = vec![BigRational::one()];
    for m in 1..=n {
        let mut s = BigRational::zero();
        for k in 0..m {
            s += binom(m + 1, k) * &b[k as usize];
        }
        b.push(-s / BigRational::from_integer((m + 1).into()));
    }
    b[n as usize].clone()
}

/// `B_n(x) = Σ_k C(n,k) B_k x^{n-k}`.
pub fn bernoulli_poly<S: Scalar>(n: u32, x: &S) -> S {
    let mut acc = S::zero();
    for k in 0..=n {
        acc = acc + S::from_rational(&(binom(n, k) * bernoulli_number(k))) * x.pow_u32(n - k);
    }
    acc
}

/// Barnes `ζ(0, v, x) = Σ_{m ≥ 0} (Σ (m_i + x_i) v_i)^{-s}` at `s = 0`, for `r = 1, 2`.
///
/// Only the ratio `v1/v2` enters; `None` for `r > 2`.
pub fn barnes_zeta0<S: Scalar>(v: &[S], x: &[S]) -> Option<S> {
    let half = S::from_rational(&BigRational::new(1.into(), 2.into()));
    match (v.len(), x.len()) {
        (1, 1) => Some(-bernoulli_poly(1, &x[0])),
        (2, 2) => {
            let r12 = v[0].clone() / v[1].clone();
            let r21 = v[1].clone() / v[0].clone();
            Some(
                bernoulli_poly(1, &x[0]) * bernoulli_poly(1, &x[1])
                    + half.clone() * r12 * bernoulli_poly(2, &x[0])
                    + half * r21 * bernoulli_poly(2, &x[1]),
            )
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn numbers() {
        assert_eq!(bernoulli_number(1), rat(-1, 2));
        assert_eq!(bernoulli_number(2), rat(1, 6));
        assert_eq!(bernoulli_number(3), rat(0, 1));
        assert_eq!(bernoulli_number(4), rat(-1, 30));
        assert_eq!(bernoulli_poly(2, &rat(1, 1)), rat(1, 6));
    }

    #[test]
    fn reductions() {
        // Hurwitz: 1/2 - x
        assert_eq!(barnes_zeta0(&[rat(3, 1)], &[rat(1, 3)]).unwrap(), rat(1, 6));
        // ζ(-1) - ζ(0)
        assert_eq!(barnes_zeta0(&[rat(1, 1), rat(1, 1)], &[rat(1, 1), rat(1, 1)]).unwrap(), rat(5, 12));
        // z = x1 + x2 = 1: z^2/2 - z + 5/12
        for (a, b) in [(1, 2), (1, 3), (3, 4)] {
            let x1 = rat(a, b);
            let x2 = rat(1, 1) - x1.clone();
            assert_eq!(barnes_zeta0(&[rat(1, 1), rat(1, 1)], &[x1, x2]).unwrap(), rat(-1, 12));
        }
        let ones = vec![rat(1, 1); 3];
        assert!(barnes_zeta0::<BigRational>(&ones, &ones).is_none());
    }

    #[test]
    fn float_agrees_with_regularized_sum() {
        // ζ(0,(1,2),(x1,x2)) via the exact formula in f64 against the
        // direct two-variable Hurwitz reduction with v = (1,1) scaled
        let v = [1.0f64, 1.0];
        let x = [0.25f64, 0.5];
        let exact = barnes_zeta0(&v, &x).unwrap();
        let z = x[0] + x[1];
        // Σ_{n} (n + 1 - ... ) reduction: Σ_{m1,m2} (m1+m2+z)^{-s} = ζ_H(s-1, z) + (1 - z) ζ_H(s, z)
        let h_m1 = -(z * z - z + 1.0 / 6.0) / 2.0;
        let h_0 = 0.5 - z;
        assert!((exact - (h_m1 + (1.0 - z) * h_0)).abs() < 1e-12);
    }
}
