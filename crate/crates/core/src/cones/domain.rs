use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{Cone, ShintaniSet};
use crate::error::{Error, Result};
use crate::quadfield::{FieldElem, QuadField, UnitData};

/// `⊔_{i<k_f} eps_plus^i (C(w, eps_plus w) ⊔ C(w))`, fundamental mod `E_{f,+}`.
pub fn shintani_domain_with_base(field: &QuadField, units: &UnitData, w: &FieldElem) -> Result<ShintaniSet> {
    if field.degree() != 2 {
        return Err(Error::Unsupported("only quadratic fields".into()));
    }
    let w = w.clone().in_field(field);
    if !w.is_totally_positive() {
        return Err(Error::Precondition("base ray must be totally positive".into()));
    }
    let e = &units.eps_plus;
    let mut cones = Vec::new();
    let mut t = w;
    for _ in 0..units.k_f {
        let next = &t * e;
        cones.push(Cone::new(&[t.clone(), next.clone()])?);
        cones.push(Cone::ray(&t)?);
        t = next;
    }
    Ok(ShintaniSet::new(cones))
}

/// The standard domain built on the ray through 1.
pub fn shintani_domain(field: &QuadField, units: &UnitData) -> Result<ShintaniSet> {
    shintani_domain_with_base(field, units, &field.one())
}

/// `π^{-1} D`, with generators rescaled to primitive integral vectors.
pub fn pi_inverse_domain(d: &ShintaniSet, pi: &FieldElem) -> Result<ShintaniSet> {
    if !pi.is_totally_positive() {
        return Err(Error::Precondition("pi must be totally positive".into()));
    }
    // π^{-1} v is a positive multiple of π' v
    Ok(d.translate(&pi.conj()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FdReport {
    pub samples: usize,
    pub violations: usize,
    /// exponent found for the first few samples
    pub exponents: Vec<i64>,
}

fn log_slope(z: &FieldElem) -> f64 {
    let (a, b) = z.embeddings_f64();
    (b / a).ln()
}

/// For random totally positive `z`, counts exponents `i` with `unit^i z ∈ S`
/// and reports samples where that count is not exactly one.
pub fn fundamental_domain_check(
    field: &QuadField,
    s: &ShintaniSet,
    unit: &FieldElem,
    n_samples: usize,
    seed: u64,
) -> FdReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let step = log_slope(unit);
    let gens = s.generators();
    let anchor = gens.iter().map(log_slope).sum::<f64>() / gens.len().max(1) as f64;
    let inv = unit.inverse().expect("unit");
    let mut violations = 0;
    let mut exponents = Vec::new();
    let mut done = 0;
    while done < n_samples {
        let a: i64 = rng.gen_range(1..1_000_000);
        let b: i64 = rng.gen_range(-1_000_000..1_000_000);
        let z = field.elem(a, b);
        if !z.is_totally_positive() {
            continue;
        }
        done += 1;
        let i0 = ((anchor - log_slope(&z)) / step).round() as i64;
        let mut hits = Vec::new();
        for i in (i0 - 4)..=(i0 + 4) {
            let u = if i >= 0 { unit.pow(i) } else { inv.pow(-i) };
            if s.contains(&(&u * &z)) {
                hits.push(i);
            }
        }
        if hits.len() != 1 || s.multiplicity(&(&unit.pow(hits[0]) * &z)) != 1 {
            violations += 1;
        }
        if exponents.len() < 8 {
            exponents.push(hits.first().copied().unwrap_or(i64::MIN));
        }
    }
    FdReport { samples: n_samples, violations, exponents }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadfield::{unit_data, Ideal};

    #[test]
    fn domains_are_fundamental() {
        for (d, m) in [(2, 1), (3, 1), (2, 3), (5, 1), (3, 2)] {
            let f = QuadField::new(d).unwrap();
            let modulus = Ideal::from_integer(&f, m).unwrap();
            let u = unit_data(&f, &modulus).unwrap();
            let s = shintani_domain(&f, &u).unwrap();
            assert_eq!(s.cones.len(), 2 * u.k_f as usize);
            assert!(s.is_disjoint());
            let r = fundamental_domain_check(&f, &s, &u.eps_f, 200, 7);
            assert_eq!(r.violations, 0, "D = {d}, f = ({m})");
        }
    }

    #[test]
    fn alternative_base_is_fundamental() {
        let f = QuadField::new(2).unwrap();
        let u = unit_data(&f, &Ideal::unit(&f)).unwrap();
        let s = shintani_domain_with_base(&f, &u, &f.elem(2, 1)).unwrap();
        assert_eq!(fundamental_domain_check(&f, &s, &u.eps_f, 200, 3).violations, 0);
    }

    #[test]
    fn duplicate_cone_is_reported() {
        let f = QuadField::new(2).unwrap();
        let u = unit_data(&f, &Ideal::unit(&f)).unwrap();
        let mut s = shintani_domain(&f, &u).unwrap();
        s.cones.push(s.cones[0].clone());
        assert!(fundamental_domain_check(&f, &s, &u.eps_f, 100, 1).violations > 0);
    }

    #[test]
    fn point_in_domain_has_exponent_zero() {
        let f = QuadField::new(3).unwrap();
        let u = unit_data(&f, &Ideal::unit(&f)).unwrap();
        let s = shintani_domain(&f, &u).unwrap();
        let z = &f.one() + &f.elem(2, 1);
        assert!(s.contains(&z));
        let inv = u.eps_f.inverse().unwrap();
        for k in 1..4 {
            assert!(!s.contains(&(&u.eps_f.pow(k) * &z)));
            assert!(!s.contains(&(&inv.pow(k) * &z)));
        }
    }
}
