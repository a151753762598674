use serde::Serialize;

use super::sector::{atoms_of, merge_atoms, sort_rays, Atom};
use super::{Cone, ShintaniSet};
use crate::error::{Error, Result};
use crate::quadfield::{FieldElem, Ideal, UnitData};

/// One cone `C(v_j)` of `D_f` and the unit `ε_j` with `ε_j C(v_j) ⊆ π^{-1} D_f`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Piece {
    pub cone: Cone,
    /// `ε_j = eps_f^exponent`
    pub exponent: i64,
    pub unit: FieldElem,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GoodDecomposition {
    pub pieces: Vec<Piece>,
    /// exponent window that was searched
    pub window: i64,
}

impl GoodDecomposition {
    pub fn untranslated(&self) -> ShintaniSet {
        ShintaniSet::new(self.pieces.iter().map(|p| p.cone.clone()).collect())
    }

    pub fn translated(&self) -> ShintaniSet {
        ShintaniSet::new(self.pieces.iter().map(|p| p.cone.translate(&p.unit)).collect())
    }

    pub fn generators(&self) -> Vec<FieldElem> {
        self.untranslated().generators()
    }

    /// Distinct exponents in increasing order.
    pub fn exponents(&self) -> Vec<i64> {
        let mut e: Vec<i64> = self.pieces.iter().map(|p| p.exponent).collect();
        e.sort();
        e.dedup();
        e
    }
}

fn unit_power(u: &FieldElem, k: i64) -> FieldElem {
    u.pow(k)
}

/// Cuts `D_f` along the translates `eps_f^{-k} π^{-1} D_f` so that every
/// piece is carried into `π^{-1} D_f` by a single power of `eps_f`.
///
/// `dfp` is `π^{-1} D_f`. Fails with `NotGood` when a generator lies in `eta`.
pub fn simultaneous_decomposition(
    df: &ShintaniSet,
    dfp: &ShintaniSet,
    units: &UnitData,
    eta: &Ideal,
) -> Result<GoodDecomposition> {
    let kf = units.k_f.max(1) as i64;
    let mut window = 2 * kf;
    while window <= 64 * kf {
        if let Some(pieces) = try_window(df, dfp, units, window) {
            let dec = GoodDecomposition { pieces, window };
            verify(&dec, df, dfp)?;
            if let Some(g) = dec.generators().into_iter().find(|g| eta.contains(g)) {
                return Err(Error::NotGood(format!("generator {g} lies in eta")));
            }
            return Ok(dec);
        }
        window *= 2;
    }
    Err(Error::SearchCap("unit window exhausted in simultaneous decomposition".into()))
}

fn try_window(df: &ShintaniSet, dfp: &ShintaniSet, units: &UnitData, window: i64) -> Option<Vec<Piece>> {
    let translates: Vec<(i64, ShintaniSet)> = (-window..=window)
        .map(|k| (k, dfp.translate(&unit_power(&units.eps_f, -k))))
        .collect();
    let mut rays = df.breakpoints();
    for (_, t) in &translates {
        rays.extend(t.breakpoints());
    }
    let breaks = sort_rays(rays);
    let atoms = df.atoms_within(&breaks);
    // assign every atom to the unique translate containing it
    let mut assigned: Vec<(i64, Atom)> = Vec::new();
    for a in atoms {
        let w = a.witness();
        let k = translates.iter().find(|(_, t)| t.contains(&w))?.0;
        assigned.push((k, a));
    }
    let mut pieces = Vec::new();
    let mut ks: Vec<i64> = assigned.iter().map(|(k, _)| *k).collect();
    ks.sort();
    ks.dedup();
    // keep the slope ordering when merging atoms of one exponent
    let all = atoms_of(&breaks);
    for k in ks {
        let mine: Vec<Atom> = all.iter().filter(|a| assigned.iter().any(|(kk, b)| *kk == k && b == *a)).cloned().collect();
        let unit = unit_power(&units.eps_f, k);
        for seg in merge_atoms(&mine) {
            for cone in seg.to_cones() {
                pieces.push(Piece { cone, exponent: k, unit: unit.clone() });
            }
        }
    }
    Some(pieces)
}

fn verify(dec: &GoodDecomposition, df: &ShintaniSet, dfp: &ShintaniSet) -> Result<()> {
    let un = dec.untranslated();
    let tr = dec.translated();
    if !un.is_disjoint() || !un.same_set(df) {
        return Err(Error::Internal("pieces do not tile D_f".into()));
    }
    if !tr.is_disjoint() || !tr.same_set(dfp) {
        return Err(Error::Internal("translated pieces do not tile pi^-1 D_f".into()));
    }
    Ok(())
}
