use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadfield::{FieldElem, Ideal};

/// `C(v) = { t1 v1 (+ t2 v2) : t_i > 0 }` with primitive integral totally
/// positive generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Cone {
    basis: Vec<FieldElem>,
}

impl Cone {
    pub fn new(gens: &[FieldElem]) -> Result<Self> {
        if gens.is_empty() || gens.len() > 2 {
            return Err(Error::Precondition(format!("a cone needs 1 or 2 generators, got {}", gens.len())));
        }
        let mut basis = Vec::with_capacity(gens.len());
        for g in gens {
            if !g.is_totally_positive() {
                return Err(Error::Precondition(format!("generator {g} is not totally positive")));
            }
            basis.push(g.primitive());
        }
        if basis.len() == 2 && basis[0] == basis[1] {
            return Err(Error::Precondition("cone generators are dependent".into()));
        }
        Ok(Cone { basis })
    }

    pub fn ray(v: &FieldElem) -> Result<Self> {
        Self::new(std::slice::from_ref(v))
    }

    pub fn basis(&self) -> &[FieldElem] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Exact membership: solves `z = t1 v1 (+ t2 v2)` over `Q`.
    pub fn contains(&self, z: &FieldElem) -> bool {
        let v = &self.basis;
        if v.len() == 1 {
            // z / v rational and positive
            let q = z * &v[0].inverse().expect("nonzero generator");
            return q.is_rational() && q.a().is_positive();
        }
        let (a1, b1) = (v[0].a(), v[0].b());
        let (a2, b2) = (v[1].a(), v[1].b());
        let det = a1 * b2 - a2 * b1;
        if det.is_zero() {
            return false;
        }
        let t1 = (z.a() * b2 - a2 * z.b()) / &det;
        let t2 = (a1 * z.b() - z.a() * b1) / &det;
        t1.is_positive() && t2.is_positive()
    }

    /// `u * C`, for a totally positive `u`.
    pub fn translate(&self, u: &FieldElem) -> Cone {
        let gens: Vec<FieldElem> = self.basis.iter().map(|g| g * u).collect();
        Cone::new(&gens).expect("translate by a totally positive element")
    }

    /// An element of the cone: sum of the generators.
    pub fn interior_point(&self) -> FieldElem {
        self.basis.iter().fold(FieldElem::from_integer(0), |acc, g| &acc + g)
    }

    /// Splits a 2-dim cone along the ray through `w`, which must lie inside.
    pub fn subdivide(&self, w: &FieldElem) -> Result<Vec<Cone>> {
        if self.dim() != 2 || !self.contains(w) {
            return Err(Error::Precondition("subdivision ray not inside a 2-dim cone".into()));
        }
        Ok(vec![
            Cone::new(&[self.basis[0].clone(), w.clone()])?,
            Cone::ray(w)?,
            Cone::new(&[w.clone(), self.basis[1].clone()])?,
        ])
    }
}

/// A finite union of cones, meant to be disjoint.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize)]
#[serde(transparent)]
pub struct ShintaniSet {
    pub cones: Vec<Cone>,
}

impl ShintaniSet {
    pub fn new(cones: Vec<Cone>) -> Self {
        ShintaniSet { cones }
    }

    pub fn contains(&self, z: &FieldElem) -> bool {
        self.cones.iter().any(|c| c.contains(z))
    }

    /// Number of cones containing `z`.
    pub fn multiplicity(&self, z: &FieldElem) -> usize {
        self.cones.iter().filter(|c| c.contains(z)).count()
    }

    pub fn translate(&self, u: &FieldElem) -> ShintaniSet {
        ShintaniSet { cones: self.cones.iter().map(|c| c.translate(u)).collect() }
    }

    pub fn generators(&self) -> Vec<FieldElem> {
        let mut out: Vec<FieldElem> = Vec::new();
        for c in &self.cones {
            for g in c.basis() {
                if !out.contains(g) {
                    out.push(g.clone());
                }
            }
        }
        out
    }

    /// `Nη` a rational prime and no generator in `η`.
    pub fn is_good_for(&self, eta: &Ideal) -> bool {
        let n = eta.norm();
        if !eta.is_integral() || !n.is_integer() {
            return false;
        }
        let n = n.to_integer();
        let Ok(n) = i64::try_from(n) else { return false };
        crate::quadfield::is_rational_prime(n) && self.generators().iter().all(|g| !eta.contains(g))
    }
}
