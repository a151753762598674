use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::cones::Cone;
use crate::error::{Error, Result};
use crate::quadfield::{factor_ideal, hnf_of, mod_inverse, FieldElem, Ideal, PrimeIdeal, QuadField};

/// Subsets of `O_p` (and the η-divisibility filter) used to cut lattice sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum BallCondition {
    All,
    /// `a + p^level`
    Ball { a: i64, level: u32 },
    /// `p^e O_p`
    OrdAtLeast(u32),
    /// `O_p - p^e O_p`
    OrdLess(u32),
    /// `a (1 + p^level)` for a unit-times-power `a`
    UnitCoset { a: i64, level: u32 },
    /// points with `ord_η > 0`; not an open subset of `O_p`
    EtaDivisible,
}

impl BallCondition {
    /// p-adic level needed to decide membership.
    pub fn level(&self, p: i64) -> u32 {
        match self {
            BallCondition::All | BallCondition::EtaDivisible => 0,
            BallCondition::Ball { level, .. } => *level,
            BallCondition::OrdAtLeast(e) | BallCondition::OrdLess(e) => *e,
            BallCondition::UnitCoset { a, level } => level + vp(*a as i128, p),
        }
    }

    /// Membership of a point with residue `rho` mod `p^level(p)`.
    pub fn matches(&self, rho: i128, p: i64) -> bool {
        let pl = |k: u32| (p as i128).pow(k);
        match self {
            BallCondition::All | BallCondition::EtaDivisible => true,
            BallCondition::Ball { a, level } => (rho - *a as i128).rem_euclid(pl(*level)) == 0,
            BallCondition::OrdAtLeast(e) => rho.rem_euclid(pl(*e)) == 0,
            BallCondition::OrdLess(e) => rho.rem_euclid(pl(*e)) != 0,
            BallCondition::UnitCoset { a, level } => {
                let m = pl(*level + vp(*a as i128, p));
                (rho - *a as i128).rem_euclid(m) == 0
            }
        }
    }
}

/// `p`-adic valuation of an integer; `u32::MAX` for 0.
pub(crate) fn vp(x: i128, p: i64) -> u32 {
    if x == 0 {
        return u32::MAX;
    }
    let mut x = x.abs();
    let mut v = 0;
    while x % p as i128 == 0 {
        x /= p as i128;
        v += 1;
    }
    v
}

/// Field data fixed across one computation.
#[derive(Clone, Debug)]
pub struct EnumContext {
    pub field: QuadField,
    pub f: Ideal,
    /// prime `𝔭` above `p` fixing the embedding
    pub p_ideal: PrimeIdeal,
    pub eta: PrimeIdeal,
    pub jobs: usize,
}

impl EnumContext {
    pub fn new(f: &Ideal, p_ideal: &PrimeIdeal, eta: &PrimeIdeal) -> Result<Self> {
        if p_ideal.residue_degree != 1 || p_ideal.ramification != 1 {
            return Err(Error::Unsupported("p must be split or unramified of degree 1".into()));
        }
        if eta.residue_degree != 1 {
            return Err(Error::NotGood("N eta is not a rational prime".into()));
        }
        Ok(EnumContext { field: *f.field(), f: f.clone(), p_ideal: p_ideal.clone(), eta: eta.clone(), jobs: 1 })
    }

    pub fn p(&self) -> i64 {
        self.p_ideal.ell
    }

    pub fn q(&self) -> i64 {
        self.eta.ell
    }
}

fn int_coords(x: &FieldElem) -> (i128, i128) {
    let (a, b) = x.int_coords().expect("integral element with small coordinates");
    (a as i128, b as i128)
}

fn lift(x: &BigRational) -> i128 {
    x.to_integer().to_i128().expect("coordinate overflow")
}

/// Membership in an integral ideal with integer HNF `[[a, b], [0, d]]`.
#[derive(Clone, Copy, Debug)]
struct IntHnf {
    a: i128,
    b: i128,
    d: i128,
}

impl IntHnf {
    fn of(i: &Ideal) -> IntHnf {
        let [g1, g2] = i.basis();
        let (a, _) = int_coords(&g1);
        let (b, d) = int_coords(&g2);
        IntHnf { a, b, d }
    }

    fn contains(&self, x: i128, y: i128) -> bool {
        y % self.d == 0 && (x - self.b * (y / self.d)) % self.a == 0
    }
}

/// Precomputed data for enumerating `F_f^x ∩ b^{-1} ∩ C(v)` modulo `Z(Lv_1) + Z(Lv_2)`.
#[derive(Clone, Debug)]
pub struct ConePlan {
    pub r: usize,
    /// scaled generators `L v_i`
    pub w: Vec<FieldElem>,
    pub big_l: i128,
    /// `L v_i mod η`
    pub n_w: Vec<i64>,
    /// common denominator of the shifts
    pub den: i128,
    pub level: u32,
    /// number of lattice points before filtering
    pub index: i128,
    t: i128,
    n: i128,
    nb: i128,
    // b̄ basis in (1, omega) coordinates
    g1: (i128, i128),
    g2: (i128, i128),
    // Nb * L v_i coordinates
    u: Vec<(i128, i128)>,
    // coset representatives range: 0 <= y1 < h1, 0 <= y2 < h2, with shear
    h1: i128,
    h2: i128,
    // y*adj, for r = 2
    adj: [[i128; 2]; 2],
    beta: (i128, i128),
    f_hnf: Option<IntHnf>,
    pl: i128,
    rp: i128,
    beta_p_inv: i128,
    q: i128,
    rq: i128,
    beta_q_inv: i128,
    ray_step: Option<(i128, i128)>,
}

/// One enumerated point `z = x·(Lv)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LatticePoint {
    /// `x_i = t[i] / den`, `0 < t[i] <= den`
    pub t: [i128; 2],
    /// `η`-residue of `z`
    pub n_x: i64,
    /// `𝔭`-adic residue of `z` mod `p^level`
    pub rho: i128,
    /// whether `z ≡ 1 mod* f`
    pub in_ray: bool,
}

fn mul_coords(t: i128, n: i128, x: (i128, i128), y: (i128, i128)) -> (i128, i128) {
    (x.0 * y.0 + x.1 * y.1 * n, x.0 * y.1 + x.1 * y.0 + x.1 * y.1 * t)
}

/// An element of `b` outside all the given primes.
fn avoiding_element(b: &Ideal, avoid: &[&Ideal]) -> Result<FieldElem> {
    let [g1, g2] = b.basis();
    for s in 0i64..60 {
        for x in -s..=s {
            for y in [-(s - x.abs()), s - x.abs()] {
                let e = &g1.scale(&BigRational::from_integer(x.into())) + &g2.scale(&BigRational::from_integer(y.into()));
                if !e.is_zero() && avoid.iter().all(|p| !p.contains(&e)) {
                    return Ok(e);
                }
            }
        }
    }
    Err(Error::SearchCap("no element of b avoiding the given primes".into()))
}

impl ConePlan {
    /// Plans the enumeration for an integral `b` coprime to `f`, `p` and `η`.
    pub fn new(ctx: &EnumContext, b: &Ideal, cone: &Cone, level: u32) -> Result<ConePlan> {
        let field = ctx.field;
        if !b.is_integral() {
            return Err(Error::Precondition("b must be integral".into()));
        }
        let p_ideal = &ctx.p_ideal;
        let eta = &ctx.eta;
        let fac_f = factor_ideal(&ctx.f);
        let mut avoid: Vec<&Ideal> = fac_f.iter().map(|(p, _)| &p.ideal).collect();
        avoid.push(&p_ideal.ideal);
        avoid.push(&eta.ideal);
        for pr in &avoid {
            if pr.contains_ideal(b) {
                return Err(Error::Precondition("b must be coprime to f, p and eta".into()));
            }
        }
        let beta = avoiding_element(b, &avoid)?;
        let (t, n) = field.omega_relation();
        let (t, n) = (t as i128, n as i128);
        let nb = lift(&b.norm());
        let bbar = b.conj();
        let [g1, g2] = bbar.basis();
        let (g1, g2) = (int_coords(&g1), int_coords(&g2));
        // L: least positive integer of f p^level b^{-1}
        let j = ctx.f.mul(&p_ideal.ideal.pow(level as i64)).mul(&b.inverse());
        let big_l = j.least_positive_integer().to_i128().ok_or_else(|| Error::SearchCap("L too large".into()))?;
        let q = ctx.q() as i128;
        if big_l % q == 0 {
            return Err(Error::SearchCap("no L coprime to eta".into()));
        }
        let w: Vec<FieldElem> = cone.basis().iter().map(|v| v.scale(&BigRational::from_integer(big_l.into()))).collect();
        let pl = (ctx.p() as i128).pow(level);
        let rp = p_ideal.root_mod_power(level.max(1)).expect("split prime") % pl.max(1);
        let rq = eta.root.expect("degree one") as i128;
        let beta_c = int_coords(&beta);
        let red = |x: (i128, i128), r: i128, m: i128| (x.0 + x.1 * r).rem_euclid(m);
        let beta_p_inv = if pl == 1 { 0 } else { mod_inverse(red(beta_c, rp, pl), pl).ok_or_else(|| Error::Internal("beta in p".into()))? };
        let beta_q_inv = mod_inverse(red(beta_c, rq, q), q).ok_or_else(|| Error::Internal("beta in eta".into()))?;
        let n_w: Vec<i64> = w.iter().map(|x| red(int_coords(x), rq, q) as i64).collect();
        if n_w.contains(&0) {
            return Err(Error::NotGood("a cone generator lies in eta".into()));
        }
        let u: Vec<(i128, i128)> = w.iter().map(|x| { let (a, bb) = int_coords(x); (a * nb, bb * nb) }).collect();
        let f_hnf = if ctx.f.is_one() { None } else { Some(IntHnf::of(&ctx.f)) };
        let mut plan = ConePlan {
            r: w.len(),
            w,
            big_l,
            n_w,
            den: 1,
            level,
            index: 0,
            t,
            n,
            nb,
            g1,
            g2,
            u: u.clone(),
            h1: 0,
            h2: 0,
            adj: [[0; 2]; 2],
            beta: beta_c,
            f_hnf,
            pl,
            rp,
            beta_p_inv,
            q,
            rq,
            beta_q_inv,
            ray_step: None,
        };
        // coordinates of u_i in the basis (g1, g2) of b̄
        let coords = |x: (i128, i128)| -> (i128, i128) {
            let c2 = x.1 / g2.1;
            let c1 = (x.0 - c2 * g2.0) / g1.0;
            debug_assert_eq!(c1 * g1.0 + c2 * g2.0, x.0);
            (c1, c2)
        };
        if plan.r == 1 {
            // points of b̄ on the ray: multiples of the least lattice vector
            let (a, bb) = plan.u[0];
            let g = num_integer::Integer::gcd(&a, &bb);
            let prim = (a / g, bb / g);
            let lat = IntHnf { a: g1.0, b: g2.0, d: g2.1 };
            let k = (1..=g).find(|k| g % k == 0 && lat.contains(prim.0 * k, prim.1 * k)).expect("u lies in b");
            let step = (prim.0 * k, prim.1 * k);
            let count = g / k;
            plan.den = count;
            plan.index = count;
            plan.ray_step = Some(step);
            return Ok(plan);
        }
        let (c11, c12) = coords(plan.u[0]);
        let (c21, c22) = coords(plan.u[1]);
        let det = c11 * c22 - c12 * c21;
        let (sgn, den) = if det < 0 { (-1, -det) } else { (1, det) };
        plan.adj = [[sgn * c22, -sgn * c12], [-sgn * c21, sgn * c11]];
        plan.den = den;
        plan.index = den;
        let (h1, _, h2) = hnf_of(&[(c11, c12), (c21, c22)]).ok_or_else(|| Error::Internal("degenerate cone".into()))?;
        // lattice spanned by (h1, 0) and (sh, h2)
        plan.h1 = h1;
        plan.h2 = h2;
        if h1 * h2 != den {
            return Err(Error::Internal("lattice index mismatch".into()));
        }
        Ok(plan)
    }

    /// Real-unit shift data as rationals.
    pub fn shift(&self, p: &LatticePoint) -> Vec<BigRational> {
        (0..self.r).map(|i| BigRational::new(p.t[i].into(), self.den.into())).collect()
    }

    /// The field element of a point.
    pub fn point(&self, p: &LatticePoint) -> FieldElem {
        let x = self.shift(p);
        self.w.iter().zip(&x).fold(FieldElem::from_integer(0), |acc, (w, x)| &acc + &w.scale(x))
    }

    fn classify(&self, wc: (i128, i128), t: [i128; 2]) -> LatticePoint {
        // Y = beta * z = beta * W / Nb, integral
        let bw = mul_coords(self.t, self.n, self.beta, wc);
        debug_assert!(bw.0 % self.nb == 0 && bw.1 % self.nb == 0);
        let y = (bw.0 / self.nb, bw.1 / self.nb);
        let in_ray = match &self.f_hnf {
            None => true,
            Some(h) => h.contains(y.0 - self.beta.0, y.1 - self.beta.1),
        };
        let rho = if self.pl == 1 {
            0
        } else {
            ((y.0 + y.1 * self.rp).rem_euclid(self.pl) * self.beta_p_inv).rem_euclid(self.pl)
        };
        let n_x = (((y.0 + y.1 * self.rq).rem_euclid(self.q)) * self.beta_q_inv).rem_euclid(self.q) as i64;
        LatticePoint { t, n_x, rho, in_ray }
    }

    /// Visits every point with first coset coordinate in `range` (all when `r = 1`).
    pub fn scan<F: FnMut(&LatticePoint)>(&self, range: std::ops::Range<i128>, mut visit: F) {
        if let Some(step) = self.ray_step {
            for k in 1..=self.den {
                if k < range.start || k >= range.end {
                    continue;
                }
                let p = self.classify((step.0 * k, step.1 * k), [k, 0]);
                visit(&p);
            }
            return;
        }
        let den = self.den;
        for y1 in range {
            for y2 in 0..self.h2 {
                let (c1, c2) = (y1, y2);
                let wc = (c1 * self.g1.0 + c2 * self.g2.0, c2 * self.g2.1);
                let mut tt = [
                    c1 * self.adj[0][0] + c2 * self.adj[1][0],
                    c1 * self.adj[0][1] + c2 * self.adj[1][1],
                ];
                let mut wc2 = wc;
                for (i, ti) in tt.iter_mut().enumerate() {
                    // k = ceil(t/den) - 1
                    let k = (*ti + den - 1).div_euclid(den) - 1;
                    *ti -= k * den;
                    wc2 = (wc2.0 - k * self.u[i].0, wc2.1 - k * self.u[i].1);
                }
                let p = self.classify(wc2, tt);
                visit(&p);
            }
        }
    }

    /// Range of the first coset coordinate.
    pub fn outer_range(&self) -> std::ops::Range<i128> {
        if self.r == 1 {
            1..self.den + 1
        } else {
            0..self.h1
        }
    }
}

/// Moment sums `[count, Σt1, Σt2, Σt1², Σt1t2, Σt2²]` in units of `den`.
pub type Moments = [i128; 6];

fn add_point(m: &mut Moments, t: [i128; 2]) {
    m[0] += 1;
    m[1] += t[0];
    m[2] += t[1];
    m[3] += t[0] * t[0];
    m[4] += t[0] * t[1];
    m[5] += t[1] * t[1];
}

/// Per-bucket, per-η-residue moments of one cone's lattice set.
#[derive(Clone, Debug)]
pub struct ConeAccum {
    pub r: usize,
    pub w: Vec<FieldElem>,
    pub n_w: Vec<i64>,
    pub q: i64,
    pub den: i128,
    /// `buckets[k][n]`
    pub buckets: Vec<Vec<Moments>>,
}

impl ConeAccum {
    fn empty(plan: &ConePlan, nbuckets: usize) -> Self {
        ConeAccum {
            r: plan.r,
            w: plan.w.clone(),
            n_w: plan.n_w.clone(),
            q: plan.q as i64,
            den: plan.den,
            buckets: vec![vec![[0; 6]; plan.q as usize]; nbuckets],
        }
    }

    fn merge(&mut self, o: &ConeAccum) {
        for (a, b) in self.buckets.iter_mut().zip(&o.buckets) {
            for (x, y) in a.iter_mut().zip(b) {
                for i in 0..6 {
                    x[i] += y[i];
                }
            }
        }
    }

    /// Moments of the union of the given buckets.
    pub fn combined(&self, which: impl Fn(usize) -> bool) -> Vec<Moments> {
        let mut out = vec![[0i128; 6]; self.q as usize];
        for (k, b) in self.buckets.iter().enumerate() {
            if which(k) {
                for (x, y) in out.iter_mut().zip(b) {
                    for i in 0..6 {
                        x[i] += y[i];
                    }
                }
            }
        }
        out
    }
}

/// Enumerates and bins all ray points of one cone, in parallel over `jobs` threads.
///
/// `classify` maps the `𝔭`-residue (mod `p^plan.level`) to a bucket, or drops the point.
pub fn accumulate<C>(plan: &ConePlan, nbuckets: usize, jobs: usize, classify: C) -> ConeAccum
where
    C: Fn(i128) -> Option<usize> + Sync,
{
    let range = plan.outer_range();
    let jobs = jobs.max(1).min((range.end - range.start).max(1) as usize);
    let run = |r: std::ops::Range<i128>| {
        let mut acc = ConeAccum::empty(plan, nbuckets);
        plan.scan(r, |pt| {
            if !pt.in_ray {
                return;
            }
            if let Some(k) = classify(pt.rho) {
                add_point(&mut acc.buckets[k][pt.n_x as usize], pt.t);
            }
        });
        acc
    };
    if jobs == 1 {
        return run(range);
    }
    let len = range.end - range.start;
    let chunk = (len + jobs as i128 - 1) / jobs as i128;
    let parts: Vec<ConeAccum> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..jobs as i128)
            .map(|j| {
                let lo = range.start + j * chunk;
                let hi = (lo + chunk).min(range.end);
                let run = &run;
                s.spawn(move || run(lo..hi))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut out = ConeAccum::empty(plan, nbuckets);
    for p in &parts {
        out.merge(p);
    }
    out
}

/// An explicit lattice cone set: generators `Lv` and the shifts `x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeConeSet {
    pub lv: Vec<FieldElem>,
    #[serde(serialize_with = "crate::scalar::rat_vec_serde::serialize")]
    pub shifts: Vec<Vec<BigRational>>,
    /// η-residue of each shifted point
    pub eta_residues: Vec<i64>,
    /// η-residues of the generators
    pub n_lv: Vec<i64>,
    /// lattice index before filtering
    pub index: i128,
}

/// Explicit `F_f^x ∩ b^{-1} ∩ C(v) ∩ U` as shifts of `Lv`; for small inputs.
pub fn build_rset(ctx: &EnumContext, b: &Ideal, cone: &Cone, cond: &BallCondition) -> Result<LatticeConeSet> {
    let plan = ConePlan::new(ctx, b, cone, cond.level(ctx.p()))?;
    let mut shifts = Vec::new();
    let mut eta_residues = Vec::new();
    let p = ctx.p();
    plan.scan(plan.outer_range(), |pt| {
        if pt.in_ray && cond.matches(pt.rho, p) && (*cond != BallCondition::EtaDivisible || pt.n_x == 0) {
            shifts.push(plan.shift(pt));
            eta_residues.push(pt.n_x);
        }
    });
    Ok(LatticeConeSet { lv: plan.w.clone(), shifts, eta_residues, n_lv: plan.n_w.clone(), index: plan.index })
}

impl LatticeConeSet {
    pub fn points(&self) -> Vec<FieldElem> {
        self.shifts
            .iter()
            .map(|x| self.lv.iter().zip(x).fold(FieldElem::from_integer(0), |acc, (w, t)| &acc + &w.scale(t)))
            .collect()
    }
}
