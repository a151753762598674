use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use super::primes::{factor_ideal, is_prime, narrow_generator, primes_above, principal_generator};
use super::{unit_data, Ideal, QuadField, UnitData};
use crate::error::{Error, Result};

/// Index of a class in [`RayClassGroup::reps`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ClassLabel(pub usize);

/// The narrow ray class group `C_f`, with integral representatives coprime to `f`.
#[derive(Clone, Debug)]
pub struct RayClassGroup {
    field: QuadField,
    modulus: Ideal,
    units: UnitData,
    reps: Vec<Ideal>,
    table: Vec<Vec<usize>>,
    wide_class_number: usize,
}

/// `|(O/f)^x|`.
pub fn phi(f: &Ideal) -> BigRational {
    let mut out = f.norm();
    for (p, _) in factor_ideal(f) {
        let np = BigRational::from_integer(p.norm().into());
        out *= BigRational::one() - np.recip();
    }
    out
}

fn wide_class_number(field: &QuadField, eps: &super::FieldElem) -> Result<usize> {
    // classes of primes below the Minkowski bound generate Cl
    let bound = ((field.disc() as f64).sqrt() / 2.0).floor() as i64;
    let mut gens = Vec::new();
    for ell in 2..=bound.max(2) {
        if is_prime(ell) {
            gens.extend(primes_above(field, ell).into_iter().filter(|p| p.residue_degree == 1));
        }
    }
    let equiv = |x: &Ideal, y: &Ideal| -> bool {
        let j = x.mul(&y.conj());
        principal_generator(&j, eps).is_some()
    };
    let mut reps = vec![Ideal::unit(field)];
    let mut i = 0;
    while i < reps.len() {
        for g in &gens {
            let cand = reps[i].mul(&g.ideal);
            if !reps.iter().any(|r| equiv(&cand, r)) {
                reps.push(cand);
                if reps.len() > 10_000 {
                    return Err(Error::SearchCap("class group too large".into()));
                }
            }
        }
        i += 1;
    }
    Ok(reps.len())
}

impl RayClassGroup {
    /// Builds `C_f` by ascending through prime ideals coprime to `f` until
    /// the class count reaches `h * 4 * phi(f) / [O^x : E_{f,+}]`.
    pub fn new(field: &QuadField, f: &Ideal, prime_cap: i64) -> Result<Self> {
        let units = unit_data(field, f)?;
        let h = wide_class_number(field, &units.eps)?;
        let target = (BigRational::from_integer((4 * h).into()) * phi(f)
            / BigRational::from_integer((2 * units.unit_index).into()))
        .to_integer()
        .to_usize()
        .ok_or_else(|| Error::Internal("class count overflow".into()))?;
        let mut g = RayClassGroup {
            field: *field,
            modulus: f.clone(),
            units,
            reps: vec![Ideal::unit(field)],
            table: Vec::new(),
            wide_class_number: h,
        };
        let mut ell = 2;
        while g.reps.len() < target {
            if ell > prime_cap {
                return Err(Error::SearchCap(format!("ray class group not generated below {prime_cap}")));
            }
            if is_prime(ell) {
                for p in primes_above(field, ell) {
                    if p.ideal.is_coprime_to(f) {
                        g.close_under(&p.ideal)?;
                    }
                }
            }
            ell += 1;
        }
        if g.reps.len() != target {
            return Err(Error::Internal(format!("found {} ray classes, expected {target}", g.reps.len())));
        }
        let n = g.reps.len();
        let mut table = vec![vec![0; n]; n];
        #[allow(clippy::needless_range_loop)]
        for i in 0..n {
            for j in i..n {
                let c = g.find(&g.reps[i].mul(&g.reps[j])).ok_or_else(|| Error::Internal("product not classified".into()))?;
                table[i][j] = c;
                table[j][i] = c;
            }
        }
        g.table = table;
        Ok(g)
    }

    fn equivalent(&self, x: &Ideal, y: &Ideal) -> bool {
        narrow_generator(&x.mul(&y.inverse()), &self.modulus, &self.units).is_some()
    }

    fn find(&self, x: &Ideal) -> Option<usize> {
        self.reps.iter().position(|r| self.equivalent(x, r))
    }

    fn close_under(&mut self, g: &Ideal) -> Result<()> {
        let mut i = 0;
        while i < self.reps.len() {
            let cand = self.reps[i].mul(g);
            if self.find(&cand).is_none() {
                self.reps.push(cand);
                if self.reps.len() > 2_000 {
                    return Err(Error::SearchCap("ray class group too large".into()));
                }
            }
            i += 1;
        }
        Ok(())
    }

    pub fn field(&self) -> &QuadField {
        &self.field
    }

    pub fn modulus(&self) -> &Ideal {
        &self.modulus
    }

    pub fn units(&self) -> &UnitData {
        &self.units
    }

    pub fn order(&self) -> usize {
        self.reps.len()
    }

    pub fn wide_class_number(&self) -> usize {
        self.wide_class_number
    }

    pub fn reps(&self) -> &[Ideal] {
        &self.reps
    }

    pub fn labels(&self) -> impl Iterator<Item = ClassLabel> {
        (0..self.reps.len()).map(ClassLabel)
    }

    pub fn rep(&self, c: ClassLabel) -> &Ideal {
        &self.reps[c.0]
    }

    /// Class of a fractional ideal coprime to `f`.
    pub fn class_of(&self, x: &Ideal) -> Result<ClassLabel> {
        if factor_ideal(&self.modulus).iter().any(|(p, _)| p.valuation_of_ideal(x) != 0) {
            return Err(Error::Precondition("ideal not coprime to the modulus".into()));
        }
        self.find(x).map(ClassLabel).ok_or_else(|| Error::Internal("unclassified ideal".into()))
    }

    pub fn mul(&self, x: ClassLabel, y: ClassLabel) -> ClassLabel {
        ClassLabel(self.table[x.0][y.0])
    }

    pub fn identity(&self) -> ClassLabel {
        ClassLabel(0)
    }

    pub fn inverse(&self, x: ClassLabel) -> ClassLabel {
        self.labels().find(|&y| self.mul(x, y) == self.identity()).expect("group inverse")
    }

    pub fn order_of(&self, x: ClassLabel) -> u32 {
        let mut acc = x;
        let mut e = 1;
        while acc != self.identity() {
            acc = self.mul(acc, x);
            e += 1;
        }
        e
    }

    /// Cosets of the subgroup generated by `x`, each sorted, in order of least element.
    pub fn cosets_mod(&self, x: ClassLabel) -> Vec<Vec<ClassLabel>> {
        let mut sub = vec![self.identity()];
        let mut acc = x;
        while acc != self.identity() {
            sub.push(acc);
            acc = self.mul(acc, x);
        }
        let mut seen = vec![false; self.order()];
        let mut out = Vec::new();
        for c in self.labels() {
            if seen[c.0] {
                continue;
            }
            let mut coset: Vec<ClassLabel> = sub.iter().map(|&s| self.mul(c, s)).collect();
            coset.sort();
            for d in &coset {
                seen[d.0] = true;
            }
            out.push(coset);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn narrow_class_numbers() {
        let f3 = QuadField::new(3).unwrap();
        let g = RayClassGroup::new(&f3, &Ideal::unit(&f3), 100).unwrap();
        assert_eq!(g.wide_class_number(), 1);
        assert_eq!(g.order(), 2);
        let f2 = QuadField::new(2).unwrap();
        assert_eq!(RayClassGroup::new(&f2, &Ideal::unit(&f2), 100).unwrap().order(), 1);
        let m = Ideal::from_integer(&f2, 3).unwrap();
        let g = RayClassGroup::new(&f2, &m, 100).unwrap();
        assert_eq!(g.units().unit_index, 8);
        assert_eq!(g.order(), 2);
    }

    #[test]
    fn wide_class_number_of_q_sqrt10() {
        let f = QuadField::new(10).unwrap();
        let g = RayClassGroup::new(&f, &Ideal::unit(&f), 100).unwrap();
        assert_eq!(g.wide_class_number(), 2);
        // N(eps) = -1 so narrow = wide
        assert_eq!(g.order(), 2);
    }

    #[test]
    fn group_axioms() {
        let f = QuadField::new(3).unwrap();
        let g = RayClassGroup::new(&f, &Ideal::unit(&f), 100).unwrap();
        for x in g.labels() {
            assert_eq!(g.mul(x, g.inverse(x)), g.identity());
            for y in g.labels() {
                for z in g.labels() {
                    assert_eq!(g.mul(g.mul(x, y), z), g.mul(x, g.mul(y, z)));
                }
            }
        }
        // (sqrt 3) = (3, sqrt3) has a generator of norm -3: nontrivial narrow class
        let s = Ideal::principal(&f, &f.sqrt_d()).unwrap();
        assert_ne!(g.class_of(&s).unwrap(), g.identity());
    }
}
