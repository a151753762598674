use std::cmp::Ordering;

use serde::Serialize;

use super::{Cone, ShintaniSet};
use crate::quadfield::FieldElem;

/// Compares `σ2(z)/σ1(z)` with `σ2(w)/σ1(w)` for totally positive `z, w`.
pub fn cmp_slope(z: &FieldElem, w: &FieldElem) -> Ordering {
    // σ2(z)σ1(w) - σ1(z)σ2(w) = σ1(z̄w - zw̄)
    let x = &(&z.conj() * w) - &(z * &w.conj());
    x.embedding_signs().0
}

/// A slope interval with endpoints given by primitive rays.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Segment {
    pub lo: FieldElem,
    pub hi: FieldElem,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Segment {
    fn point(v: &FieldElem) -> Self {
        Segment { lo: v.clone(), hi: v.clone(), lo_closed: true, hi_closed: true }
    }

    fn open(a: &FieldElem, b: &FieldElem) -> Self {
        Segment { lo: a.clone(), hi: b.clone(), lo_closed: false, hi_closed: false }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// Cones whose disjoint union is the segment.
    pub fn to_cones(&self) -> Vec<Cone> {
        if self.is_point() {
            return vec![Cone::ray(&self.lo).expect("ray")];
        }
        let mut out = Vec::new();
        if self.lo_closed {
            out.push(Cone::ray(&self.lo).expect("ray"));
        }
        out.push(Cone::new(&[self.lo.clone(), self.hi.clone()]).expect("cone"));
        if self.hi_closed {
            out.push(Cone::ray(&self.hi).expect("ray"));
        }
        out
    }
}

/// Elementary pieces between consecutive breakpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Atom {
    Point(FieldElem),
    Open(FieldElem, FieldElem),
}

impl Atom {
    pub(crate) fn witness(&self) -> FieldElem {
        match self {
            Atom::Point(v) => v.clone(),
            Atom::Open(a, b) => a + b,
        }
    }

    pub(crate) fn segment(&self) -> Segment {
        match self {
            Atom::Point(v) => Segment::point(v),
            Atom::Open(a, b) => Segment::open(a, b),
        }
    }
}

/// Sorted distinct primitive rays.
pub(crate) fn sort_rays(mut rays: Vec<FieldElem>) -> Vec<FieldElem> {
    rays.sort_by(cmp_slope);
    rays.dedup();
    rays
}

pub(crate) fn atoms_of(breaks: &[FieldElem]) -> Vec<Atom> {
    let mut out = Vec::new();
    for (i, b) in breaks.iter().enumerate() {
        out.push(Atom::Point(b.clone()));
        if let Some(n) = breaks.get(i + 1) {
            out.push(Atom::Open(b.clone(), n.clone()));
        }
    }
    out
}

/// Merges consecutive atoms (in slope order) into maximal segments.
pub(crate) fn merge_atoms(atoms: &[Atom]) -> Vec<Segment> {
    let mut out: Vec<Segment> = Vec::new();
    for a in atoms {
        let s = a.segment();
        if let Some(last) = out.last_mut() {
            if last.hi == s.lo && (last.hi_closed || s.lo_closed) {
                last.hi = s.hi;
                last.hi_closed = s.hi_closed;
                continue;
            }
        }
        out.push(s);
    }
    out
}

/// Canonical sector normal form of a Shintani set: merged disjoint segments in slope order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SectorForm {
    pub segments: Vec<Segment>,
}

impl ShintaniSet {
    pub(crate) fn breakpoints(&self) -> Vec<FieldElem> {
        self.generators()
    }

    /// Atoms of this set relative to the given sorted breakpoints.
    pub(crate) fn atoms_within(&self, breaks: &[FieldElem]) -> Vec<Atom> {
        atoms_of(breaks).into_iter().filter(|a| self.contains(&a.witness())).collect()
    }

    pub fn sector_form(&self) -> SectorForm {
        let breaks = sort_rays(self.breakpoints());
        SectorForm { segments: merge_atoms(&self.atoms_within(&breaks)) }
    }

    /// Whether no point lies in two cones.
    pub fn is_disjoint(&self) -> bool {
        let breaks = sort_rays(self.breakpoints());
        atoms_of(&breaks).iter().all(|a| self.multiplicity(&a.witness()) <= 1)
    }

    fn combine(&self, other: &ShintaniSet, keep: impl Fn(bool, bool) -> bool) -> ShintaniSet {
        let mut rays = self.breakpoints();
        rays.extend(other.breakpoints());
        let breaks = sort_rays(rays);
        let atoms: Vec<Atom> = atoms_of(&breaks)
            .into_iter()
            .filter(|a| {
                let w = a.witness();
                keep(self.contains(&w), other.contains(&w))
            })
            .collect();
        ShintaniSet::from_segments(&merge_atoms(&atoms))
    }

    pub fn intersection(&self, other: &ShintaniSet) -> ShintaniSet {
        self.combine(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &ShintaniSet) -> ShintaniSet {
        self.combine(other, |a, b| a && !b)
    }

    pub fn union(&self, other: &ShintaniSet) -> ShintaniSet {
        self.combine(other, |a, b| a || b)
    }

    pub fn from_segments(segs: &[Segment]) -> ShintaniSet {
        ShintaniSet::new(segs.iter().flat_map(|s| s.to_cones()).collect())
    }

    pub fn is_empty(&self) -> bool {
        self.cones.is_empty()
    }

    /// Equality as point sets.
    pub fn same_set(&self, other: &ShintaniSet) -> bool {
        self.sector_form() == other.sector_form()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadfield::QuadField;

    fn domain(f: &QuadField, u: &FieldElem) -> ShintaniSet {
        ShintaniSet::new(vec![Cone::ray(&f.one()).unwrap(), Cone::new(&[f.one(), u.clone()]).unwrap()])
    }

    #[test]
    fn slope_order() {
        let f = QuadField::new(2).unwrap();
        let u = f.elem(3, 2);
        // slope(u) = 1/u^2 < 1 = slope(1)
        assert_eq!(cmp_slope(&u, &f.one()), Ordering::Less);
        assert_eq!(cmp_slope(&f.elem(2, 0), &f.one()), Ordering::Equal);
    }

    #[test]
    fn set_identities() {
        let f = QuadField::new(2).unwrap();
        let u = f.elem(3, 2);
        let a = domain(&f, &u);
        assert!(a.intersection(&a).same_set(&a));
        let open = ShintaniSet::new(vec![Cone::new(&[f.one(), u.clone()]).unwrap()]);
        let ray_u = ShintaniSet::new(vec![Cone::ray(&u).unwrap()]);
        assert!(open.intersection(&ray_u).is_empty());
        let b = ShintaniSet::new(vec![Cone::new(&[f.elem(2, 1), f.elem(5, 1)]).unwrap()]);
        let diff = a.difference(&b);
        let inter = a.intersection(&b);
        assert!(diff.union(&inter).same_set(&a));
        assert!(diff.intersection(&inter).is_empty());
        let mut dup = a.clone();
        dup.cones.push(Cone::ray(&f.one()).unwrap());
        assert!(!dup.is_disjoint());
        assert!(a.is_disjoint());
    }

    #[test]
    fn normal_form_merges_boundary() {
        let f = QuadField::new(3).unwrap();
        let u = f.elem(2, 1);
        let w = &f.one() + &u;
        let split = ShintaniSet::new(Cone::new(&[f.one(), u.clone()]).unwrap().subdivide(&w).unwrap());
        let whole = ShintaniSet::new(vec![Cone::new(&[f.one(), u]).unwrap()]);
        assert!(split.same_set(&whole));
        assert_eq!(whole.sector_form().segments.len(), 1);
    }
}
