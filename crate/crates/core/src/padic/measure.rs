use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use super::log::iwasawa_log;
use super::num::{ppow, PadicNum};
use crate::cones::ShintaniSet;
use crate::error::{Error, Result};
use crate::quadfield::{FieldElem, Ideal};
use crate::zeta::lattice::vp;
use crate::zeta::{ConeData, EnumContext};

/// The multiplicative coset `p^j u (1 + p^m)`, i.e. the ball `p^j u + p^{m+j}`,
/// with `j < e` and `u` a unit in `[1, p^m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct BallLabel {
    pub j: u32,
    pub u: i64,
}

impl BallLabel {
    /// Least non-negative integer in the ball.
    pub fn representative(&self, p: i64) -> BigInt {
        ppow(p, self.j as i64) * BigInt::from(self.u)
    }
}

/// Integer values of `ν_η(b, D_f)` on the cosets of `𝐎 = O_p - πO_p` at level `m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidueMeasure {
    pub p: i64,
    pub m: u32,
    /// `ord_p(π)`; `𝐎` is the set of `x` with `ord_p x < e`
    pub e: u32,
    #[serde(serialize_with = "serialize_entries")]
    pub entries: BTreeMap<BallLabel, i64>,
    /// mass of `πO_p`, outside `𝐎`
    pub pi_mass: i64,
    pub total_variation: i64,
}

fn serialize_entries<S: Serializer>(e: &BTreeMap<BallLabel, i64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Row {
        j: u32,
        u: i64,
        nu: i64,
    }
    let mut seq = s.serialize_seq(Some(e.len()))?;
    for (k, v) in e {
        seq.serialize_element(&Row { j: k.j, u: k.u, nu: *v })?;
    }
    seq.end()
}

impl ResidueMeasure {
    /// A measure with prescribed entries; zero entries are dropped.
    pub fn from_entries(p: i64, m: u32, e: u32, entries: impl IntoIterator<Item = (BallLabel, i64)>) -> Result<Self> {
        let pm = p.pow(m);
        let mut map = BTreeMap::new();
        for (k, v) in entries {
            if k.j >= e || k.u <= 0 || k.u >= pm || k.u % p == 0 {
                return Err(Error::Precondition(format!("bad ball label {k:?}")));
            }
            if v != 0 {
                *map.entry(k).or_insert(0) += v;
            }
        }
        map.retain(|_, v| *v != 0);
        let total_variation = map.values().map(|v: &i64| v.abs()).sum();
        Ok(ResidueMeasure { p, m, e, entries: map, pi_mass: 0, total_variation })
    }

    pub fn get(&self, k: &BallLabel) -> i64 {
        self.entries.get(k).copied().unwrap_or(0)
    }

    /// Adds `delta` to one entry.
    pub fn perturb(&mut self, k: BallLabel, delta: i64) {
        *self.entries.entry(k).or_insert(0) += delta;
        self.entries.retain(|_, v| *v != 0);
        self.total_variation = self.entries.values().map(|v| v.abs()).sum();
    }

    /// `ν(𝐎)`.
    pub fn total(&self) -> i64 {
        self.entries.values().sum()
    }

    /// `δ = ceil(log_p(total variation))`.
    pub fn delta(&self) -> u32 {
        let mut d = 0;
        let mut pk: i128 = 1;
        while pk < self.total_variation as i128 {
            pk *= self.p as i128;
            d += 1;
        }
        d
    }

    /// `m - δ`, possibly negative.
    pub fn certified_precision(&self) -> i64 {
        self.m as i64 - self.delta() as i64
    }

    /// Default working precision `m + δ + 4`.
    pub fn working_precision(&self) -> i64 {
        self.m as i64 + self.delta() as i64 + 4
    }

    /// The same measure on the coarser cosets of level `m2 <= m`.
    pub fn coarsen(&self, m2: u32) -> Result<Self> {
        if m2 > self.m || m2 == 0 {
            return Err(Error::Precondition("coarsening must lower the level".into()));
        }
        let pm = self.p.pow(m2);
        let mut out = Self::from_entries(
            self.p,
            m2,
            self.e,
            self.entries.iter().map(|(k, v)| (BallLabel { j: k.j, u: k.u % pm }, *v)),
        )?;
        out.pi_mass = self.pi_mass;
        Ok(out)
    }

    /// Pushforward along `x ↦ c x` for an integer unit `c`.
    pub fn pushforward_unit(&self, c: i64) -> Result<Self> {
        if c % self.p == 0 {
            return Err(Error::Precondition("multiplier must be a p-adic unit".into()));
        }
        let pm = self.p.pow(self.m) as i128;
        let mut out = Self::from_entries(
            self.p,
            self.m,
            self.e,
            self.entries
                .iter()
                .map(|(k, v)| (BallLabel { j: k.j, u: ((k.u as i128 * c as i128).rem_euclid(pm)) as i64 }, *v)),
        )?;
        out.pi_mass = self.pi_mass;
        Ok(out)
    }
}

/// Tabulates `ν_η(b, D_f, ·)` on every coset of `𝐎` at level `m`, together
/// with the exact smoothed `ζ(-k, F_f^x ∩ b^{-1} ∩ D_f ∩ 𝐎)` for `k <= kmax`.
pub fn build_measure_with_moments(
    ctx: &EnumContext,
    b: &Ideal,
    df: &ShintaniSet,
    e: u32,
    m: u32,
    kmax: u32,
) -> Result<(ResidueMeasure, Vec<FieldElem>)> {
    if m == 0 || e == 0 {
        return Err(Error::Precondition("level and e must be positive".into()));
    }
    let p = ctx.p();
    let pm = p.pow(m) as i128;
    let level = m + e - 1;
    let nb = e as usize * pm as usize + 1;
    let pi_bucket = nb - 1;
    let classify = move |rho: i128| -> Option<usize> {
        let j = vp(rho, p);
        if j >= e {
            return Some(pi_bucket);
        }
        let u = (rho / (p as i128).pow(j)).rem_euclid(pm);
        Some(j as usize * pm as usize + u as usize)
    };
    let mut vals = vec![BigRational::zero(); nb];
    let mut moments = vec![FieldElem::from_integer(0); kmax as usize + 1];
    for cone in &df.cones {
        let data = ConeData::build(ctx, b, cone, level, nb, kmax, classify)?;
        for (k, v) in vals.iter_mut().enumerate() {
            if data.accum.buckets[k].iter().any(|m| m[0] != 0) {
                *v += data.nu(|i| i == k);
            }
        }
        for (k, mo) in moments.iter_mut().enumerate() {
            *mo = &*mo + &data.zeta_neg_k(|i| i != pi_bucket, k as u32)?;
        }
    }
    let as_int = |v: &BigRational| -> Result<i64> {
        if !v.is_integer() {
            return Err(Error::Internal(format!("measure value {v} not integral")));
        }
        v.to_integer().to_i64().ok_or_else(|| Error::Internal("measure value overflow".into()))
    };
    let mut entries = Vec::new();
    for (k, v) in vals[..pi_bucket].iter().enumerate() {
        if !v.is_zero() {
            let label = BallLabel { j: (k / pm as usize) as u32, u: (k % pm as usize) as i64 };
            entries.push((label, as_int(v)?));
        }
    }
    let mut mu = ResidueMeasure::from_entries(p, m, e, entries)?;
    mu.pi_mass = as_int(&vals[pi_bucket])?;
    Ok((mu, moments))
}

pub fn build_measure(ctx: &EnumContext, b: &Ideal, df: &ShintaniSet, e: u32, m: u32) -> Result<ResidueMeasure> {
    Ok(build_measure_with_moments(ctx, b, df, e, m, 0)?.0)
}

/// `Σ_a ν(a) a^k` over the representatives, modulo `p^prec`.
pub fn integrate_moment(mu: &ResidueMeasure, k: u32, prec: i64) -> PadicNum {
    let mut s = BigInt::zero();
    for (l, v) in &mu.entries {
        s += num_traits::pow(l.representative(mu.p), k as usize) * BigInt::from(*v);
    }
    PadicNum::from_int(mu.p, &s, prec)
}

/// `Σ_a ν(a) log_p(a)` at absolute precision `prec`.
pub fn integrate_log(mu: &ResidueMeasure, prec: i64) -> PadicNum {
    let mut acc = PadicNum::zero(mu.p, prec);
    for (l, v) in &mu.entries {
        let a = PadicNum::from_int(mu.p, &l.representative(mu.p), prec + l.j as i64);
        let la = iwasawa_log(&a).expect("nonzero representative");
        acc = acc.add(&la.scale_int(*v));
    }
    acc.truncate(prec)
}

/// `Π_a a^{ν(a)}` with relative precision `prec`.
pub fn integrate_mult(mu: &ResidueMeasure, prec: i64) -> PadicNum {
    let mut acc = PadicNum::from_i64(mu.p, 1, prec);
    for (l, v) in &mu.entries {
        let a = PadicNum::from_int(mu.p, &l.representative(mu.p), prec + l.j as i64);
        acc = acc.mul(&a.pow(*v).expect("nonzero representative"));
    }
    acc
}
