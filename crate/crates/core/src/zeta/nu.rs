use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::bernoulli::barnes_zeta0;
use super::cn::{barnes_coeffs, twisted0_from_moments, twisted_from_moments, MomentView, TwistTable};
use super::lattice::{accumulate, BallCondition, ConeAccum, ConePlan, EnumContext, LatticeConeSet, Moments};
use crate::cones::{Cone, ShintaniSet};
use crate::error::{Error, Result};
use crate::quadfield::{FieldElem, Ideal};
use crate::scalar::Scalar;

/// Binned lattice data of one cone together with its twist table.
#[derive(Clone, Debug)]
pub struct ConeData {
    pub accum: ConeAccum,
    pub table: TwistTable,
    pub index: i128,
}

impl ConeData {
    /// Enumerates `F_f^x ∩ b^{-1} ∩ C(v)` once, binning by `classify` of the `p^level` residue.
    pub fn build<C>(ctx: &EnumContext, b: &Ideal, cone: &Cone, level: u32, nbuckets: usize, kmax: u32, classify: C) -> Result<Self>
    where
        C: Fn(i128) -> Option<usize> + Sync,
    {
        let plan = ConePlan::new(ctx, b, cone, level)?;
        let accum = accumulate(&plan, nbuckets, ctx.jobs, classify);
        let table = TwistTable::new(ctx.q() as u32, &plan.n_w, kmax)?;
        Ok(ConeData { accum, table, index: plan.index })
    }

    pub fn moments(&self, which: impl Fn(usize) -> bool) -> Vec<Moments> {
        self.accum.combined(which)
    }

    /// `ν_η` of the selected buckets.
    pub fn nu(&self, which: impl Fn(usize) -> bool) -> BigRational {
        twisted0_from_moments(&self.table, &self.moments(which))
    }

    /// `ζ(-k, ·) - Nη ζ(-k, ·η)` of the selected buckets.
    pub fn zeta_neg_k(&self, which: impl Fn(usize) -> bool, k: u32) -> Result<FieldElem> {
        twisted_from_moments(&self.table, &self.accum.w, self.accum.den, &self.moments(which), k)
    }

    pub fn routes(&self, which: impl Fn(usize) -> bool) -> NuRoutes {
        let by_n = self.moments(which);
        let a = &self.accum;
        let twisted = twisted0_from_moments(&self.table, &by_n);
        let (rho, rho_inv) = if a.r == 2 {
            let r = &a.w[0] * &a.w[1].inverse().expect("nonzero");
            let ri = r.inverse().expect("nonzero");
            (r, ri)
        } else {
            (FieldElem::from_integer(1), FieldElem::from_integer(1))
        };
        let half = BigRational::new(1.into(), 2.into());
        let barnes = barnes_smoothed(a, &by_n, &rho, &rho_inv);
        let barnes_norm = barnes_smoothed(a, &by_n, &(rho.trace() * &half), &(rho_inv.trace() * &half));
        NuRoutes { twisted, barnes, barnes_norm }
    }

    /// Unsmoothed `ζ_N(0, ·)` of the selected buckets.
    pub fn unsmoothed_norm(&self, which: impl Fn(usize) -> bool) -> BigRational {
        let by_n = self.moments(which);
        let a = &self.accum;
        let (rt, rit) = if a.r == 2 {
            let r = &a.w[0] * &a.w[1].inverse().expect("nonzero");
            let half = BigRational::new(1.into(), 2.into());
            (r.trace() * &half, r.inverse().unwrap().trace() * half)
        } else {
            (BigRational::one(), BigRational::one())
        };
        let total = sum_moments(&by_n);
        let den = BigRational::from_integer(a.den.into());
        let coeffs = barnes_coeffs(a.r, &rt, &rit);
        dot_monomials(a.r, &coeffs, &MomentView { m: &total, den: &den })
    }
}

fn sum_moments(by_n: &[Moments]) -> Moments {
    let mut t = [0i128; 6];
    for m in by_n {
        for i in 0..6 {
            t[i] += m[i];
        }
    }
    t
}

fn dot_monomials<S: Scalar>(r: usize, c: &[S], mv: &MomentView<'_>) -> S {
    let q = |x: BigRational| S::from_rational(&x);
    if r == 1 {
        return c[0].clone() * q(mv.count()) + c[1].clone() * q(mv.first(0));
    }
    c[0].clone() * q(mv.count())
        + c[1].clone() * q(mv.first(0))
        + c[2].clone() * q(mv.first(1))
        + c[3].clone() * q(mv.second(0, 0))
        + c[4].clone() * q(mv.second(0, 1))
        + c[5].clone() * q(mv.second(1, 1))
}

/// Power sums `[#S, Σm1, Σm2, Σm1², Σm1m2, Σm2²]` over
/// `S(n) = { m ∈ [0,q)^r : n + m·n_w ≡ 0 mod q }`.
fn coset_power_sums(n_w: &[i64], q: i64, n: i64) -> [i128; 6] {
    let mut out = [0i128; 6];
    let r = n_w.len();
    let inv_last = crate::quadfield::mod_inverse(n_w[r - 1] as i128, q as i128).expect("n_i invertible") as i64;
    let firsts: Vec<i64> = if r == 1 { vec![0] } else { (0..q).collect() };
    for m1 in firsts {
        let rest = if r == 1 { n } else { n + m1 * n_w[0] };
        let last = ((-rest).rem_euclid(q) * inv_last).rem_euclid(q);
        let (a, b) = if r == 1 { (last as i128, 0) } else { (m1 as i128, last as i128) };
        out[0] += 1;
        out[1] += a;
        out[2] += b;
        out[3] += a * a;
        out[4] += a * b;
        out[5] += b * b;
    }
    out
}

/// `Σ_x ζ_B(0, w, x) - q Σ_x Σ_{m ∈ S(n_x)} ζ_B(0, qw, (x + m)/q)`.
fn barnes_smoothed<S: Scalar>(a: &ConeAccum, by_n: &[Moments], rho: &S, rho_inv: &S) -> S {
    let q = a.q;
    let den = BigRational::from_integer(a.den.into());
    let coeffs = barnes_coeffs(a.r, rho, rho_inv);
    let total = sum_moments(by_n);
    let part1 = dot_monomials(a.r, &coeffs, &MomentView { m: &total, den: &den });
    let qr = BigRational::from_integer(q.into());
    let mut part2 = S::zero();
    for (n, m) in by_n.iter().enumerate() {
        if m[0] == 0 {
            continue;
        }
        let mv = MomentView { m, den: &den };
        let ps = coset_power_sums(&a.n_w, q, n as i64);
        let p = |i: usize| BigRational::from_integer(ps[i].into());
        let c = mv.count();
        // Σ_x Σ_m (x + m)^α
        let mut mono = vec![c.clone() * p(0), mv.first(0) * p(0) + &c * p(1)];
        if a.r == 2 {
            mono.push(mv.first(1) * p(0) + &c * p(2));
            mono.push(mv.second(0, 0) * p(0) + BigRational::from_integer(2.into()) * mv.first(0) * p(1) + &c * p(3));
            mono.push(mv.second(0, 1) * p(0) + mv.first(0) * p(2) + mv.first(1) * p(1) + &c * p(4));
            mono.push(mv.second(1, 1) * p(0) + BigRational::from_integer(2.into()) * mv.first(1) * p(2) + &c * p(5));
        }
        let degs: &[i32] = if a.r == 2 { &[0, 1, 1, 2, 2, 2] } else { &[0, 1] };
        for ((cf, mo), &d) in coeffs.iter().zip(&mono).zip(degs) {
            let scale = mo / num_traits::pow(qr.clone(), d as usize);
            part2 = part2 + cf.clone() * S::from_rational(&scale);
        }
    }
    part1 - S::from_rational(&qr) * part2
}

/// `ν_η` by three independent routes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NuRoutes {
    /// twisted finite sums at `k = 0`
    #[serde(with = "crate::scalar::rat_serde")]
    pub twisted: BigRational,
    /// Barnes values along the identity embedding, smoothed; an element of `F`
    pub barnes: FieldElem,
    /// Barnes values averaged over both embeddings (the norm variant)
    #[serde(with = "crate::scalar::rat_serde")]
    pub barnes_norm: BigRational,
}

impl NuRoutes {
    pub fn agree(&self) -> bool {
        self.barnes.as_rational().as_ref() == Some(&self.twisted) && self.barnes_norm == self.twisted
    }

    fn add(&mut self, o: &NuRoutes) {
        self.twisted += &o.twisted;
        self.barnes = &self.barnes + &o.barnes;
        self.barnes_norm += &o.barnes_norm;
    }
}

fn check_integrality(v: &BigRational, q: i64, n: i64) -> Result<()> {
    let mut d = v.denom().clone();
    let qb = BigInt::from(q);
    while (&d % &qb).is_zero() {
        d /= &qb;
    }
    if !d.is_one() {
        return Err(Error::Internal(format!("nu value {v} not in Z[1/{q}]")));
    }
    if q >= n + 2 && !v.is_integer() {
        return Err(Error::Internal(format!("nu value {v} not integral")));
    }
    Ok(())
}

fn single_bucket(ctx: &EnumContext, cond: &BallCondition) -> impl Fn(i128) -> Option<usize> + Sync {
    let p = ctx.p();
    let cond = cond.clone();
    move |rho| if cond.matches(rho, p) { Some(0) } else { None }
}

/// `ν_η(b, S, U)` with all three routes, each asserted in `Z`.
pub fn nu_eta_routes(ctx: &EnumContext, b: &Ideal, s: &ShintaniSet, cond: &BallCondition) -> Result<NuRoutes> {
    if *cond == BallCondition::EtaDivisible {
        return Err(Error::Precondition("eta-divisibility is not a p-adic ball condition".into()));
    }
    let mut total = NuRoutes { twisted: BigRational::zero(), barnes: FieldElem::from_integer(0), barnes_norm: BigRational::zero() };
    for cone in &s.cones {
        let data = ConeData::build(ctx, b, cone, cond.level(ctx.p()), 1, 0, single_bucket(ctx, cond))?;
        total.add(&data.routes(|_| true));
    }
    check_integrality(&total.twisted, ctx.q(), 2)?;
    if !total.agree() {
        return Err(Error::Internal(format!("routes disagree: {total:?}")));
    }
    Ok(total)
}

/// `ν_η(b, S, U)` by the twisted route.
pub fn nu_eta(ctx: &EnumContext, b: &Ideal, s: &ShintaniSet, cond: &BallCondition) -> Result<BigRational> {
    if *cond == BallCondition::EtaDivisible {
        return Err(Error::Precondition("eta-divisibility is not a p-adic ball condition".into()));
    }
    let mut total = BigRational::zero();
    for cone in &s.cones {
        let data = ConeData::build(ctx, b, cone, cond.level(ctx.p()), 1, 0, single_bucket(ctx, cond))?;
        total += data.nu(|_| true);
    }
    check_integrality(&total, ctx.q(), 2)?;
    Ok(total)
}

/// `ζ_{f,η}(0, Frob_b) = ν_η(b, D_f, O_p)`.
pub fn smoothed_partial_zeta0(ctx: &EnumContext, b: &Ideal, df: &ShintaniSet) -> Result<BigInt> {
    Ok(nu_eta(ctx, b, df, &BallCondition::All)?.to_integer())
}

/// Smoothed `ζ(-k, F_f^x ∩ b^{-1} ∩ S ∩ U) - Nη ζ(-k, ... b^{-1}η ...)` in `F`.
pub fn smoothed_zeta_neg_k(ctx: &EnumContext, b: &Ideal, s: &ShintaniSet, cond: &BallCondition, k: u32) -> Result<FieldElem> {
    let mut total = FieldElem::from_integer(0);
    for cone in &s.cones {
        let data = ConeData::build(ctx, b, cone, cond.level(ctx.p()), 1, k, single_bucket(ctx, cond))?;
        total = &total + &data.zeta_neg_k(|_| true, k)?;
    }
    Ok(total)
}

/// Unsmoothed `ζ_N(0, F_f^x ∩ b^{-1} ∩ S)`, i.e. `ζ_f(0, [b])` when `S` is a Shintani domain.
pub fn partial_zeta0(ctx: &EnumContext, b: &Ideal, s: &ShintaniSet) -> Result<BigRational> {
    let mut total = BigRational::zero();
    for cone in &s.cones {
        let data = ConeData::build(ctx, b, cone, 0, 1, 0, |_| Some(0))?;
        total += data.unsmoothed_norm(|_| true);
    }
    Ok(total)
}

/// Barnes `ζ(0, R)` along the identity embedding, for an explicit set.
pub fn zeta0_unsmoothed(set: &LatticeConeSet) -> Result<FieldElem> {
    let mut total = FieldElem::from_integer(0);
    for x in &set.shifts {
        let xs: Vec<FieldElem> = x.iter().map(|t| FieldElem::rational(t.clone())).collect();
        total = &total + &barnes_zeta0(&set.lv, &xs).ok_or_else(|| Error::Unsupported("r > 2".into()))?;
    }
    Ok(total)
}

/// `ζ_N(0, R)`: the average of the Barnes values over both embeddings.
pub fn zeta0_unsmoothed_norm(set: &LatticeConeSet) -> Result<BigRational> {
    Ok(zeta0_unsmoothed(set)?.trace() / BigRational::from_integer(2.into()))
}
