use serde::Serialize;

use super::config::{ConfigSpec, GSConfig};
use super::unit::{required_precision, u_eta, UEta};
use crate::error::Result;
use crate::quadfield::{integral_ideals_up_to, Ideal};

/// Outcome of one variant comparison; informational.
#[derive(Clone, Debug, Serialize)]
pub struct ProbeOutcome {
    pub name: String,
    /// residual valuation of `u_η(variant) / u_η(base) - 1`; `None` when skipped
    pub residual: Option<i64>,
    /// `max(m - δ, m)`
    pub required_precision: i64,
    pub agree: Option<bool>,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeReport {
    pub schema: &'static str,
    pub base_valuation: i64,
    pub expected_valuation: i64,
    /// `ord_𝔭(u_η) = ζ_{f,η}(0, Frob_b) e`
    pub valuation_matches: bool,
    pub outcomes: Vec<ProbeOutcome>,
    /// `u_η ≡ 1 mod η` needs a global recognition of `u_η`
    pub eta_congruence: &'static str,
}

fn compare(name: &str, m: u32, base: &UEta, other: Result<UEta>, detail: String) -> ProbeOutcome {
    let cert = required_precision(m, base.certified_precision);
    match other {
        Ok(u) => {
            let r = if u.valuation == base.valuation { u.unit.residual_valuation(&base.unit) } else { 0 };
            ProbeOutcome { name: name.into(), residual: Some(r), required_precision: cert, agree: Some(r >= cert), detail }
        }
        Err(e) => ProbeOutcome {
            name: name.into(),
            residual: None,
            required_precision: cert,
            agree: None,
            detail: format!("{detail}; skipped: {e}"),
        },
    }
}

/// The least-norm integral ideal other than `b` in the class of `b`, coprime to `f 𝔭 Nη`.
pub fn second_representative(cfg: &GSConfig) -> Result<Option<Ideal>> {
    let avoid = cfg.f.mul(&cfg.p_ideal.ideal).mul(&Ideal::from_integer(&cfg.field, cfg.eta.ell)?);
    let target = cfg.class_group.class_of(&cfg.b)?;
    for bound in [64, 512, 4096] {
        let mut best: Option<Ideal> = None;
        for i in integral_ideals_up_to(&cfg.field, bound) {
            if i == cfg.b || !i.is_coprime_to(&avoid) || cfg.class_group.class_of(&i)? != target {
                continue;
            }
            if best.as_ref().is_none_or(|j| i.norm() < j.norm()) {
                best = Some(i);
            }
        }
        if best.is_some() {
            return Ok(best);
        }
    }
    Ok(None)
}

/// A totally positive base ray other than 1 for a second Shintani domain.
fn alternative_base(cfg: &GSConfig) -> (i64, i64) {
    for s in 2..50i64 {
        for b in 1..s {
            let w = cfg.field.elem(s - b, b);
            if w.is_totally_positive() && w.norm().numer() != w.norm().denom() {
                return (s - b, b);
            }
        }
    }
    (2, 1)
}

/// Compares `u_η` across a second Shintani domain, a second integral
/// representative of the class of `b`, and `π eps_f` in place of `π`.
pub fn probe_conjecture(cfg: &GSConfig) -> Result<ProbeReport> {
    let base = u_eta(cfg)?;
    let mut outcomes = Vec::new();

    let mut spec: ConfigSpec = cfg.spec.clone();
    spec.eta = super::config::EtaSpec::Norm(cfg.eta.ell);
    let w = alternative_base(cfg);
    spec.base = Some(w);
    let v = GSConfig::discover_with_b(&spec, Some(cfg.b.clone())).and_then(|c| u_eta(&c));
    outcomes.push(compare("shintani_domain", cfg.m, &base, v, format!("base ray {} + {}*w", w.0, w.1)));

    match second_representative(cfg)? {
        Some(b2) => {
            let detail = format!("b' = {:?}", b2.to_repr().hnf);
            let v = cfg.with_b(&b2).and_then(|c| u_eta(&c));
            outcomes.push(compare("class_representative", cfg.m, &base, v, detail));
        }
        None => outcomes.push(ProbeOutcome {
            name: "class_representative".into(),
            residual: None,
            required_precision: required_precision(cfg.m, base.certified_precision),
            agree: None,
            detail: "no second representative below the search cap".into(),
        }),
    }

    let mut spec = cfg.spec.clone();
    spec.eta = super::config::EtaSpec::Norm(cfg.eta.ell);
    spec.pi_unit_power += 1;
    let v = GSConfig::discover_with_b(&spec, Some(cfg.b.clone())).and_then(|c| u_eta(&c));
    outcomes.push(compare("pi_choice", cfg.m, &base, v, "pi * eps_f".into()));

    let expected = base.exact.zeta * cfg.e as i64;
    Ok(ProbeReport {
        schema: super::unit::SCHEMA,
        base_valuation: base.valuation,
        expected_valuation: expected,
        valuation_matches: base.valuation == expected,
        outcomes,
        eta_congruence: "unchecked",
    })
}
