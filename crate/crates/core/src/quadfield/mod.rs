//! Exact arithmetic in a real quadratic field `Q(sqrt D)`.
//!
//! Elements are stored in the integral basis `(1, omega)`: `omega = sqrt D`
//! when `D = 2, 3 mod 4` and `omega = (1 + sqrt D)/2` when `D = 1 mod 4`.

mod classgroup;
mod elem;
mod ideal;
mod primes;
mod units;

pub use classgroup::{phi, ClassLabel, RayClassGroup};
pub use elem::FieldElem;
pub use ideal::{mod_inverse, Ideal, IdealRepr, PrimeIdeal};
pub(crate) use ideal::hnf_of;
pub use primes::{is_prime as is_rational_prime, narrow_generator, principal_generator, factor_ideal, eta_acceptable, choose_pi, find_good_eta, integral_ideals_up_to, primes_above};
pub use units::{is_one_mod_star, fundamental_unit, unit_data, UnitData};

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};

/// Which integral basis generator the field uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Omega {
    /// `omega = sqrt D`
    SqrtD,
    /// `omega = (1 + sqrt D)/2`
    HalfOnePlusSqrtD,
}

/// A real quadratic field `Q(sqrt D)` with `D > 1` squarefree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct QuadField {
    d: i64,
    disc: i64,
    omega: Omega,
}

pub(crate) fn is_squarefree(n: i64) -> bool {
    let mut n = n.abs();
    let mut k = 2i64;
    while k * k <= n {
        if n % (k * k) == 0 {
            return false;
        }
        if n % k == 0 {
            n /= k;
        }
        k += 1;
    }
    true
}

impl QuadField {
    /// Builds `Q(sqrt D)`; rejects `D < 2` and non-squarefree `D`.
    pub fn new(d: i64) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidField(format!("D = {d} must be at least 2")));
        }
        if !is_squarefree(d) {
            return Err(Error::InvalidField(format!("D = {d} is not squarefree")));
        }
        let (disc, omega) = if d.mod_floor(&4) == 1 {
            (d, Omega::HalfOnePlusSqrtD)
        } else {
            (4 * d, Omega::SqrtD)
        };
        Ok(QuadField { d, disc, omega })
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn omega(&self) -> Omega {
        self.omega
    }

    /// Degree over `Q`; always 2.
    pub fn degree(&self) -> u32 {
        2
    }

    /// `(t, n)` with `omega^2 = t*omega + n`.
    pub fn omega_relation(&self) -> (i64, i64) {
        omega_relation(self.d)
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem::from_int_in(self, 0)
    }

    pub fn one(&self) -> FieldElem {
        FieldElem::from_int_in(self, 1)
    }

    pub fn omega_elem(&self) -> FieldElem {
        FieldElem::from_ints(self, 0, 1)
    }

    /// `a + b*omega` with integer coordinates.
    pub fn elem(&self, a: i64, b: i64) -> FieldElem {
        FieldElem::from_ints(self, a, b)
    }

    /// `sqrt D` as a field element.
    pub fn sqrt_d(&self) -> FieldElem {
        match self.omega {
            Omega::SqrtD => self.elem(0, 1),
            Omega::HalfOnePlusSqrtD => self.elem(-1, 2),
        }
    }

    /// Roots of the minimal polynomial of `omega` modulo a prime `l`,
    /// ascending, with multiplicity collapsed.
    pub fn omega_roots_mod(&self, l: i64) -> Vec<i64> {
        let (t, n) = self.omega_relation();
        (0..l)
            .filter(|&r| (r * r - t * r - n).mod_floor(&l) == 0)
            .collect()
    }
}

pub(crate) fn omega_relation(d: i64) -> (i64, i64) {
    if d.mod_floor(&4) == 1 {
        (1, (d - 1) / 4)
    } else {
        (0, d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn make_field_examples() {
        let f2 = QuadField::new(2).unwrap();
        assert_eq!(f2.disc(), 8);
        assert_eq!(f2.omega(), Omega::SqrtD);
        let f5 = QuadField::new(5).unwrap();
        assert_eq!(f5.disc(), 5);
        assert_eq!(f5.omega(), Omega::HalfOnePlusSqrtD);
        let err = QuadField::new(4).unwrap_err();
        assert!(err.to_string().contains("not squarefree"));
        assert!(QuadField::new(1).is_err());
        assert!(QuadField::new(-3).is_err());
    }

    #[test]
    fn sqrt_d_squares_to_d() {
        for d in [2, 3, 5, 13, 17] {
            let f = QuadField::new(d).unwrap();
            let s = f.sqrt_d();
            assert_eq!(&s * &s, f.elem(d, 0));
        }
    }
}
