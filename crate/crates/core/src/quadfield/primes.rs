use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use super::units::is_one_mod_star;
use super::{FieldElem, Ideal, PrimeIdeal, QuadField, RayClassGroup, UnitData};
use crate::error::{Error, Result};

pub fn is_prime(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

/// Prime ideals above the rational prime `ell`, ordered by the residue of omega.
pub fn primes_above(field: &QuadField, ell: i64) -> Vec<PrimeIdeal> {
    let roots = field.omega_roots_mod(ell);
    let make = |r: i64| {
        Ideal::from_generators(field, &[field.elem(ell, 0), field.elem(-r, 1)]).expect("prime ideal")
    };
    match roots.len() {
        0 => vec![PrimeIdeal {
            ideal: Ideal::from_integer(field, ell).expect("inert prime"),
            ell,
            residue_degree: 2,
            ramification: 1,
            root: None,
        }],
        1 => vec![PrimeIdeal { ideal: make(roots[0]), ell, residue_degree: 1, ramification: 2, root: Some(roots[0]) }],
        _ => roots
            .iter()
            .map(|&r| PrimeIdeal { ideal: make(r), ell, residue_degree: 1, ramification: 1, root: Some(r) })
            .collect(),
    }
}

pub(crate) fn rational_prime_factors(mut n: i64) -> Vec<i64> {
    let mut out = Vec::new();
    let mut k = 2;
    while k * k <= n {
        if n % k == 0 {
            out.push(k);
            while n % k == 0 {
                n /= k;
            }
        }
        k += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Prime factorization of a nonzero integral ideal.
pub fn factor_ideal(i: &Ideal) -> Vec<(PrimeIdeal, u32)> {
    let n = i.norm().to_integer().to_i64().expect("norm too large");
    let field = *i.field();
    let mut out = Vec::new();
    for ell in rational_prime_factors(n) {
        for p in primes_above(&field, ell) {
            let v = p.valuation_of_ideal(i);
            if v > 0 {
                out.push((p, v as u32));
            }
        }
    }
    out
}

/// All integral ideals of norm at most `bound`, sorted by norm then HNF.
pub fn integral_ideals_up_to(field: &QuadField, bound: i64) -> Vec<Ideal> {
    let mut out = Vec::new();
    for a in 1..=bound {
        for d in 1..=bound / a {
            if a % d != 0 {
                continue;
            }
            for b in 0..a {
                if b % d != 0 {
                    continue;
                }
                if let Ok(i) = Ideal::from_hnf(field, a, b, d) {
                    out.push(i);
                }
            }
        }
    }
    out.sort_by(|x, y| x.norm().cmp(&y.norm()).then(x.hnf().cmp(&y.hnf())));
    out
}

/// A generator of a nonzero integral ideal, if principal.
pub fn principal_generator(i: &Ideal, eps: &FieldElem) -> Option<FieldElem> {
    let field = *i.field();
    let n = i.norm();
    let nf = n.to_f64()?;
    let e = eps.embeddings_f64().0;
    let bound = (nf * e).sqrt() * 1.0001 + 1e-9;
    let [g1, g2] = i.basis();
    let (a1, a2) = g1.embeddings_f64();
    let (b1, b2) = g2.embeddings_f64();
    let det = a1 * b2 - a2 * b1;
    // (u, v) = (s1, s2) * M^{-1}, M = [[a1, a2], [b1, b2]]
    let iu = (b2.abs() + b1.abs()) * bound / det.abs() + 1.0;
    let iv = (a2.abs() + a1.abs()) * bound / det.abs() + 1.0;
    let (iu, iv) = (iu.ceil() as i64, iv.ceil() as i64);
    for u in -iu..=iu {
        for v in 0..=iv {
            let x = &g1.scale(&BigRational::from_integer(u.into())) + &g2.scale(&BigRational::from_integer(v.into()));
            if x.norm().abs() == n {
                return Some(x.in_field(&field));
            }
        }
    }
    None
}

/// A generator `g` of the fractional ideal `j` with `g` totally positive and
/// `g ≡ 1 mod* f`, balanced so that its two embeddings are as close as the
/// unit group allows.
pub fn narrow_generator(j: &Ideal, f: &Ideal, units: &UnitData) -> Option<FieldElem> {
    let field = *j.field();
    // scale j to an integral ideal by a positive integer c
    let den: BigInt = j.basis().iter().map(|e| e.denominator()).fold(BigInt::from(1), |a, b| num_integer::Integer::lcm(&a, &b));
    let c = BigRational::from_integer(den);
    let gens: Vec<FieldElem> = j.basis().iter().map(|e| e.scale(&c)).collect();
    let ji = Ideal::from_generators(&field, &gens).ok()?;
    let beta = principal_generator(&ji, &units.eps)?.scale(&c.recip());
    let found = units.coset_reps().into_iter().map(|u| &u * &beta).find(|g| {
        g.is_totally_positive() && is_one_mod_star(&field, g, f)
    })?;
    Some(balance(&found, &units.eps_f))
}

/// Multiplies by powers of `unit` to make the embeddings of `x` balanced.
pub(crate) fn balance(x: &FieldElem, unit: &FieldElem) -> FieldElem {
    let ratio = |y: &FieldElem| {
        let (s1, s2) = y.embeddings_f64();
        (s1.abs() / s2.abs()).ln().abs()
    };
    let mut cur = x.clone();
    let inv = unit.inverse().expect("unit");
    loop {
        let up = &cur * unit;
        let down = &cur * &inv;
        let r = ratio(&cur);
        if ratio(&up) < r - 1e-12 {
            cur = up;
        } else if ratio(&down) < r - 1e-12 {
            cur = down;
        } else {
            return cur;
        }
    }
}

/// Searches ascending rational primes for a smoothing prime `eta`.
///
/// Accepts `eta` of prime norm `ell >= 4`, `ell` coprime to `N(f) * p`,
/// ramification at most `ell - 2`, with no generator in `eta`.
pub fn find_good_eta(
    field: &QuadField,
    f: &Ideal,
    p_id: &PrimeIdeal,
    generators: &[FieldElem],
    skip: &[Ideal],
    cap: i64,
) -> Result<PrimeIdeal> {
    let nf = f.norm().to_integer();
    for ell in 4..=cap {
        if !is_prime(ell) || ell == p_id.ell || (&nf % BigInt::from(ell)) == BigInt::from(0) {
            continue;
        }
        for cand in primes_above(field, ell) {
            if eta_acceptable(&cand, generators) && !skip.contains(&cand.ideal) {
                return Ok(cand);
            }
        }
    }
    Err(Error::SearchCap(format!("no good eta below {cap}")))
}

/// Degree/ramification/generator conditions on a smoothing prime.
pub fn eta_acceptable(cand: &PrimeIdeal, generators: &[FieldElem]) -> bool {
    cand.residue_degree == 1
        && cand.ell >= 4
        && (cand.ramification as i64) <= cand.ell - 2
        && generators.iter().all(|g| !cand.contains(g))
}

/// Returns `(pi, e)`: `e` is the order of `[p]` in `C_f` and `pi` a totally
/// positive generator of `p^e` with `pi ≡ 1 mod* f`.
pub fn choose_pi(p_id: &PrimeIdeal, f: &Ideal, cf: &RayClassGroup) -> Result<(FieldElem, u32)> {
    if !p_id.ideal.is_coprime_to(f) {
        return Err(Error::Precondition("p divides f".into()));
    }
    let label = cf.class_of(&p_id.ideal)?;
    let e = cf.order_of(label);
    let pe = p_id.ideal.pow(e as i64);
    let pi = narrow_generator(&pe, f, cf.units())
        .ok_or_else(|| Error::SearchCap("no narrow generator of p^e".into()))?;
    Ok((pi, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eta_for_q_sqrt2_skips_to_17() {
        let f = QuadField::new(2).unwrap();
        let one = Ideal::unit(&f);
        let p7 = primes_above(&f, 7).remove(0);
        let eta = find_good_eta(&f, &one, &p7, &[f.one()], &[], 200).unwrap();
        assert_eq!(eta.ell, 17);
        assert_eq!(eta.norm(), 17);
        // 5 is inert
        let five = primes_above(&f, 5);
        assert_eq!(five[0].residue_degree, 2);
        assert!(!eta_acceptable(&five[0], &[f.one()]));
    }

    #[test]
    fn generator_in_eta_rejected() {
        let f = QuadField::new(2).unwrap();
        let ps = primes_above(&f, 17);
        let eta = &ps[0];
        let g = eta.ideal.basis()[1].clone();
        assert!(eta.contains(&g));
        assert!(!eta_acceptable(eta, &[f.one(), g]));
    }

    #[test]
    fn split_and_ramified_counts() {
        let f = QuadField::new(3).unwrap();
        assert_eq!(primes_above(&f, 13).len(), 2);
        assert_eq!(primes_above(&f, 3)[0].ramification, 2);
        assert_eq!(primes_above(&f, 2)[0].ramification, 2);
        assert_eq!(primes_above(&f, 5)[0].residue_degree, 2);
        let f5 = QuadField::new(5).unwrap();
        assert_eq!(primes_above(&f5, 5)[0].ramification, 2);
        assert_eq!(primes_above(&f5, 11).len(), 2);
        assert_eq!(primes_above(&f5, 2)[0].residue_degree, 2);
    }

    #[test]
    fn integral_ideals_count_matches_dedekind() {
        // Q(sqrt 2): number of ideals of norm n is sum over d | n of chi_8(d)
        let f = QuadField::new(2).unwrap();
        let ideals = integral_ideals_up_to(&f, 30);
        let chi8 = |d: i64| match d.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        };
        for n in 1..=30i64 {
            let expected: i64 = (1..=n).filter(|d| n % d == 0).map(chi8).sum();
            let got = ideals.iter().filter(|i| i.norm() == BigRational::from_integer(n.into())).count();
            assert_eq!(got as i64, expected, "norm {n}");
        }
    }
}
