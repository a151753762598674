use num_integer::Roots;
use num_traits::Zero;
use serde::Serialize;

use super::primes::factor_ideal;
use super::{FieldElem, Ideal, QuadField};
use crate::error::{Error, Result};

/// Unit groups attached to a modulus `f`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnitData {
    /// fundamental unit, `> 1` in the first embedding
    pub eps: FieldElem,
    /// generator of the totally positive units
    pub eps_plus: FieldElem,
    /// generator of the totally positive units congruent to 1 mod* f
    pub eps_f: FieldElem,
    /// `eps_f = eps_plus^k_f`
    pub k_f: u32,
    /// `eps_f = eps^unit_index`
    pub unit_index: u32,
}

impl UnitData {
    /// Representatives of `O^x / E_{f,+}`: `±eps^k`, `0 <= k < unit_index`.
    pub fn coset_reps(&self) -> Vec<FieldElem> {
        let mut out = Vec::new();
        let mut u = self.eps.pow(0);
        for _ in 0..self.unit_index {
            out.push(u.clone());
            out.push(-&u);
            u = &u * &self.eps;
        }
        out
    }
}

/// Fundamental unit from the continued-fraction expansion of omega.
pub fn fundamental_unit(field: &QuadField) -> FieldElem {
    let d = field.d();
    let (t, n) = field.omega_relation();
    let s = d.sqrt();
    // omega = (p + sqrt d)/q
    let (mut p, mut q) = if t == 1 { (1i128, 2i128) } else { (0i128, 1i128) };
    let d = d as i128;
    let (mut h_prev, mut h) = (1i128, 0i128);
    let (mut k_prev, mut k) = (0i128, 1i128);
    for _ in 0..10_000 {
        let a = (p + s as i128).div_euclid(q);
        let h_new = a * h_prev + h;
        let k_new = a * k_prev + k;
        h = h_prev;
        k = k_prev;
        h_prev = h_new;
        k_prev = k_new;
        // convergent h_prev / k_prev of omega
        let nm = h_prev * h_prev - h_prev * k_prev * t as i128 - k_prev * k_prev * n as i128;
        if nm == 1 || nm == -1 {
            // eps = h - k*omega' = (h - k t) + k omega
            let a = i64::try_from(h_prev - k_prev * t as i128).expect("unit too large");
            let b = i64::try_from(k_prev).expect("unit too large");
            return field.elem(a, b);
        }
        let p_new = a * q - p;
        q = (d - p_new * p_new) / q;
        p = p_new;
    }
    panic!("continued fraction did not produce a unit")
}

/// Whether a field element is `≡ 1 mod* f`.
pub fn is_one_mod_star(field: &QuadField, x: &FieldElem, f: &Ideal) -> bool {
    if x.is_zero() {
        return false;
    }
    if f.is_one() {
        return true;
    }
    let y = x - &field.one();
    if y.is_zero() {
        return true;
    }
    if x.is_integral() {
        return f.contains(&y);
    }
    factor_ideal(f)
        .iter()
        .all(|(pr, a)| pr.valuation(x) == 0 && pr.valuation(&y) >= *a as i64)
}

pub fn unit_data(field: &QuadField, f: &Ideal) -> Result<UnitData> {
    if !f.is_integral() {
        return Err(Error::Precondition("modulus must be integral".into()));
    }
    let eps = fundamental_unit(field);
    let (eps_plus, step) = if eps.is_totally_positive() { (eps.clone(), 1) } else { (&eps * &eps, 2) };
    let cap = f.norm().to_integer().try_into().unwrap_or(u32::MAX).saturating_add(2);
    let mut u = eps_plus.clone();
    for k in 1..=cap.max(2) {
        if is_one_mod_star(field, &u, f) {
            return Ok(UnitData { eps, eps_plus, eps_f: u, k_f: k, unit_index: k * step });
        }
        u = &u * &eps_plus;
    }
    Err(Error::SearchCap("no power of eps_plus is 1 mod f".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Smallest unit > 1 found by direct search over the omega coordinate.
    fn brute_force_unit(field: &QuadField) -> FieldElem {
        let (t, n) = field.omega_relation();
        for b in 1i64..100_000 {
            let mut best: Option<FieldElem> = None;
            for sgn in [1i64, -1] {
                // a^2 + t b a - (n b^2 + sgn) = 0
                let disc = t * t * b * b + 4 * (n * b * b + sgn);
                if disc < 0 {
                    continue;
                }
                let r = disc.sqrt();
                if r * r != disc {
                    continue;
                }
                for num in [-t * b + r, -t * b - r] {
                    if num % 2 == 0 {
                        let e = field.elem(num / 2, b);
                        let v = e.embeddings_f64().0;
                        if v > 1.0 && best.as_ref().is_none_or(|x| v < x.embeddings_f64().0) {
                            best = Some(e);
                        }
                    }
                }
            }
            if let Some(e) = best {
                return e;
            }
        }
        unreachable!()
    }

    #[test]
    fn continued_fraction_matches_brute_force() {
        for d in [2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19, 21, 22, 23, 29, 31] {
            let f = QuadField::new(d).unwrap();
            assert_eq!(fundamental_unit(&f), brute_force_unit(&f), "D = {d}");
        }
    }

    #[test]
    fn q_sqrt2_units() {
        let f = QuadField::new(2).unwrap();
        let u = unit_data(&f, &Ideal::unit(&f)).unwrap();
        assert_eq!(u.eps, f.elem(1, 1));
        assert_eq!(u.eps_plus, f.elem(3, 2));
        assert_eq!(u.eps_f, u.eps_plus);
        assert_eq!(u.k_f, 1);
    }

    #[test]
    fn q_sqrt3_units() {
        let f = QuadField::new(3).unwrap();
        let u = unit_data(&f, &Ideal::unit(&f)).unwrap();
        assert_eq!(u.eps, f.elem(2, 1));
        assert_eq!(u.eps_plus, u.eps);
        assert_eq!(u.k_f, 1);
    }

    #[test]
    fn eps_f_minimal_for_modulus_three() {
        let f = QuadField::new(2).unwrap();
        let m = Ideal::from_integer(&f, 3).unwrap();
        let u = unit_data(&f, &m).unwrap();
        assert_eq!(u.k_f, 4);
        assert!(u.eps_f.is_totally_positive());
        assert!(is_one_mod_star(&f, &u.eps_f, &m));
        for k in 1..u.k_f {
            assert!(!is_one_mod_star(&f, &u.eps_plus.pow(k as i64), &m));
        }
    }
}
