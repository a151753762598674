use serde::Serialize;

use crate::cones::{pi_inverse_domain, shintani_domain_with_base, simultaneous_decomposition, GoodDecomposition, ShintaniSet};
use crate::error::{Error, Result};
use crate::quadfield::{
    choose_pi, eta_acceptable, find_good_eta, integral_ideals_up_to, is_one_mod_star, primes_above, ClassLabel,
    FieldElem, Ideal, PrimeIdeal, QuadField, RayClassGroup,
};
use crate::padic::PadicEmbedding;
use crate::zeta::EnumContext;

/// How the smoothing prime is chosen.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum EtaSpec {
    Auto,
    /// a degree-one prime above this rational prime
    Norm(i64),
}

/// Candidate smoothing primes tried in auto mode.
pub const ETA_RETRIES: usize = 5;

const CLASS_GROUP_PRIME_CAP: i64 = 2_000;

/// Next acceptable η, skipping the listed ideals.
type EtaSource<'a> = dyn Fn(&[Ideal]) -> Result<PrimeIdeal> + 'a;
const ETA_CAP: i64 = 2_000;

/// User-level description of a computation.
#[derive(Clone, Debug, Serialize)]
pub struct ConfigSpec {
    pub d: i64,
    /// generator of the modulus `f = (f)`
    pub f: i64,
    pub p: i64,
    pub eta: EtaSpec,
    pub m: u32,
    /// working precision; `m + δ + 4` when absent
    pub prec: Option<i64>,
    pub jobs: usize,
    /// base ray `w` of `D_f` as `(a, b)` for `a + b ω`; the ray through 1 by default
    pub base: Option<(i64, i64)>,
    /// replaces `π` by `π eps_f^k`
    pub pi_unit_power: i64,
}

impl ConfigSpec {
    pub fn new(d: i64, f: i64, p: i64, m: u32) -> Self {
        ConfigSpec { d, f, p, eta: EtaSpec::Auto, m, prec: None, jobs: 1, base: None, pi_unit_power: 0 }
    }
}

/// A validated configuration: every standing assumption on `π`, `η` and `D_f` holds.
#[derive(Clone, Debug)]
pub struct GSConfig {
    pub spec: ConfigSpec,
    pub field: QuadField,
    pub f: Ideal,
    pub class_group: RayClassGroup,
    pub p_ideal: PrimeIdeal,
    pub eta: PrimeIdeal,
    pub pi: FieldElem,
    pub e: u32,
    pub df: ShintaniSet,
    pub dfp: ShintaniSet,
    pub decomposition: GoodDecomposition,
    pub b: Ideal,
    pub m: u32,
    pub ctx: EnumContext,
    pub embedding: PadicEmbedding,
    /// η candidates rejected before this one, with reasons
    pub eta_rejections: Vec<String>,
}

/// Serializable summary of a configuration.
#[derive(Clone, Debug, Serialize)]
pub struct ConfigSummary {
    pub d: i64,
    pub f: crate::quadfield::IdealRepr,
    pub p: i64,
    pub p_root: Option<i64>,
    pub eta_norm: i64,
    pub eta: crate::quadfield::IdealRepr,
    pub pi: FieldElem,
    pub e: u32,
    pub b: crate::quadfield::IdealRepr,
    pub m: u32,
    pub class_number: usize,
    pub df: ShintaniSet,
    pub decomposition_pieces: usize,
    pub eta_rejections: Vec<String>,
}

fn split_prime(field: &QuadField, p: i64, f: &Ideal) -> Result<PrimeIdeal> {
    if !crate::quadfield::is_rational_prime(p) {
        return Err(Error::Precondition(format!("{p} is not prime")));
    }
    primes_above(field, p)
        .into_iter()
        .find(|q| q.residue_degree == 1 && q.ramification == 1 && q.ideal.is_coprime_to(f))
        .ok_or_else(|| Error::Unsupported(format!("{p} does not split in Q(sqrt {}) away from f", field.d())))
}

impl GSConfig {
    pub fn discover(spec: &ConfigSpec) -> Result<GSConfig> {
        Self::discover_with_b(spec, None)
    }

    pub fn discover_with_b(spec: &ConfigSpec, b: Option<Ideal>) -> Result<GSConfig> {
        if spec.m == 0 {
            return Err(Error::Precondition("level m must be positive".into()));
        }
        let field = QuadField::new(spec.d)?;
        if spec.f < 1 {
            return Err(Error::Precondition("modulus must be a positive integer".into()));
        }
        let f = Ideal::from_integer(&field, spec.f)?;
        let cg = RayClassGroup::new(&field, &f, CLASS_GROUP_PRIME_CAP)?;
        let p_ideal = split_prime(&field, spec.p, &f)?;
        let (pi0, e) = choose_pi(&p_ideal, &f, &cg)?;
        let pi = &pi0 * &cg.units().eps_f.pow(spec.pi_unit_power);
        let base = match spec.base {
            Some((a, b)) => field.elem(a, b),
            None => field.one(),
        };
        let df = shintani_domain_with_base(&field, cg.units(), &base)?;
        let dfp = pi_inverse_domain(&df, &pi)?;
        let b = b.unwrap_or_else(|| Ideal::unit(&field));
        if !b.is_integral() {
            return Err(Error::Precondition("b must be an integral ideal".into()));
        }
        if !b.is_coprime_to(&f) || !b.is_coprime_to(&p_ideal.ideal) {
            return Err(Error::Precondition("b must be coprime to f p".into()));
        }
        let mut gens = df.generators();
        gens.extend(dfp.generators());
        let mut rejections = Vec::new();
        let mut skip: Vec<Ideal> = Vec::new();
        let candidates: Box<EtaSource> = match spec.eta {
            EtaSpec::Auto => Box::new(|skip: &[Ideal]| find_good_eta(&field, &f, &p_ideal, &gens, skip, ETA_CAP)),
            EtaSpec::Norm(ell) => {
                let nf = f.norm().to_integer();
                if ell == spec.p || (&nf % num_bigint::BigInt::from(ell)) == 0.into() {
                    return Err(Error::NotGood(format!("N eta = {ell} is not coprime to f p")));
                }
                let ps = primes_above(&field, ell);
                let gens = gens.clone();
                Box::new(move |skip: &[Ideal]| {
                    ps.iter()
                        .find(|c| !skip.contains(&c.ideal) && eta_acceptable(c, &gens))
                        .cloned()
                        .ok_or_else(|| Error::NotGood(format!("no good prime above {ell}")))
                })
            }
        };
        for _ in 0..ETA_RETRIES {
            let eta = candidates(&skip)?;
            skip.push(eta.ideal.clone());
            let ell_ideal = Ideal::from_integer(&field, eta.ell)?;
            if !b.is_coprime_to(&ell_ideal) {
                rejections.push(format!("N eta = {}: b not coprime", eta.ell));
                continue;
            }
            let decomposition = match simultaneous_decomposition(&df, &dfp, cg.units(), &eta.ideal) {
                Ok(d) => d,
                Err(Error::NotGood(why)) => {
                    rejections.push(format!("N eta = {}: {why}", eta.ell));
                    continue;
                }
                Err(e) => return Err(e),
            };
            let mut ctx = EnumContext::new(&f, &p_ideal, &eta)?;
            ctx.jobs = spec.jobs.max(1);
            let embedding = PadicEmbedding::new(&p_ideal)?;
            let cfg = GSConfig {
                spec: spec.clone(),
                field,
                f: f.clone(),
                class_group: cg.clone(),
                p_ideal: p_ideal.clone(),
                eta,
                pi: pi.clone(),
                e,
                df: df.clone(),
                dfp: dfp.clone(),
                decomposition,
                b: b.clone(),
                m: spec.m,
                ctx,
                embedding,
                eta_rejections: rejections,
            };
            cfg.validate()?;
            return Ok(cfg);
        }
        Err(Error::NotGood(format!("no good eta after {ETA_RETRIES} candidates: {}", rejections.join("; "))))
    }

    /// Re-checks the standing assumptions.
    pub fn validate(&self) -> Result<()> {
        let pi = &self.pi;
        if !pi.is_totally_positive() || !is_one_mod_star(&self.field, pi, &self.f) {
            return Err(Error::Precondition("pi must be totally positive and 1 mod* f".into()));
        }
        if Ideal::principal(&self.field, pi)? != self.p_ideal.ideal.pow(self.e as i64) {
            return Err(Error::Precondition("pi must generate p^e".into()));
        }
        let eta = &self.eta;
        if eta.residue_degree != 1 || eta.ell < 4 || eta.ramification as i64 > eta.ell - 2 {
            return Err(Error::NotGood("eta must have prime norm >= 4 and small ramification".into()));
        }
        let fp = self.f.mul(&self.p_ideal.ideal);
        if !Ideal::from_integer(&self.field, eta.ell)?.is_coprime_to(&fp) {
            return Err(Error::NotGood("N eta must be coprime to f p".into()));
        }
        if self.decomposition.generators().iter().any(|g| eta.contains(g)) || !self.df.is_good_for(&eta.ideal) {
            return Err(Error::NotGood("a cone generator lies in eta".into()));
        }
        if !self.b.is_coprime_to(&fp.mul(&Ideal::from_integer(&self.field, eta.ell)?)) {
            return Err(Error::Precondition("b must be coprime to f p N(eta)".into()));
        }
        Ok(())
    }

    /// Same data with another `b`.
    pub fn with_b(&self, b: &Ideal) -> Result<GSConfig> {
        let mut c = self.clone();
        c.b = b.clone();
        c.validate()?;
        Ok(c)
    }

    pub fn p(&self) -> i64 {
        self.p_ideal.ell
    }

    pub fn summary(&self) -> ConfigSummary {
        ConfigSummary {
            d: self.field.d(),
            f: self.f.to_repr(),
            p: self.p(),
            p_root: self.p_ideal.root,
            eta_norm: self.eta.ell,
            eta: self.eta.ideal.to_repr(),
            pi: self.pi.clone(),
            e: self.e,
            b: self.b.to_repr(),
            m: self.m,
            class_number: self.class_group.order(),
            df: self.df.clone(),
            decomposition_pieces: self.decomposition.pieces.len(),
            eta_rejections: self.eta_rejections.clone(),
        }
    }

    /// Least-norm integral representative, coprime to `f 𝔭 Nη`, of each class.
    pub fn class_reps(&self) -> Result<Vec<(ClassLabel, Ideal)>> {
        let avoid = self.f.mul(&self.p_ideal.ideal).mul(&Ideal::from_integer(&self.field, self.eta.ell)?);
        let n = self.class_group.order();
        let mut bound = 64;
        while bound <= 1 << 16 {
            let mut found: Vec<Option<Ideal>> = vec![None; n];
            for i in integral_ideals_up_to(&self.field, bound) {
                if !i.is_coprime_to(&avoid) {
                    continue;
                }
                let c = self.class_group.class_of(&i)?;
                if found[c.0].is_none() {
                    found[c.0] = Some(i);
                }
            }
            if found.iter().all(|x| x.is_some()) {
                return Ok(found.into_iter().enumerate().map(|(k, i)| (ClassLabel(k), i.unwrap())).collect());
            }
            bound *= 4;
        }
        Err(Error::SearchCap("class representatives coprime to f p N(eta)".into()))
    }

    /// `Gal(H/F)`: classes of `C_f` modulo the class of `𝔭`, with a representative each.
    pub fn galois_reps(&self) -> Result<Vec<Ideal>> {
        let reps = self.class_reps()?;
        let lp = self.class_group.class_of(&self.p_ideal.ideal)?;
        Ok(self
            .class_group
            .cosets_mod(lp)
            .into_iter()
            .map(|coset| reps.iter().find(|(c, _)| *c == coset[0]).unwrap().1.clone())
            .collect())
    }
}
