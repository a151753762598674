use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::config::{ConfigSummary, GSConfig};
use crate::cones::ShintaniSet;
use crate::error::{Error, Result};
use crate::padic::{
    bracket_p, build_measure, integrate_log, integrate_mult, iwasawa_log, AlgLogCombo, BallLabel, PadicNum,
    ResidueMeasure,
};
use crate::quadfield::FieldElem;
use crate::zeta::{nu_eta, BallCondition};

fn to_i64(v: &BigRational) -> Result<i64> {
    if !v.is_integer() {
        return Err(Error::Internal(format!("expected an integer, got {v}")));
    }
    v.to_integer().to_i64().ok_or_else(|| Error::Internal("integer overflow".into()))
}

/// `ε_η(b, D_f, π) = eps_f^total` with the per-exponent masses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EpsilonEta {
    /// `ν_η(b, ε_j C(v_j), O_p)` for each piece `j`
    pub piece_values: Vec<i64>,
    /// exponent `k` of `ε = eps_f^k` ↦ `ν_η(b, εD_f ∩ π^{-1}D_f, O_p)`
    pub exponents: BTreeMap<i64, i64>,
    /// `Σ_k k · exponents[k]`
    pub total: i64,
    pub unit: FieldElem,
}

pub fn epsilon_eta(cfg: &GSConfig) -> Result<EpsilonEta> {
    let mut piece_values = Vec::new();
    let mut exponents = BTreeMap::new();
    for piece in &cfg.decomposition.pieces {
        let s = ShintaniSet::new(vec![piece.cone.translate(&piece.unit)]);
        let v = to_i64(&nu_eta(&cfg.ctx, &cfg.b, &s, &BallCondition::All)?)?;
        piece_values.push(v);
        *exponents.entry(piece.exponent).or_insert(0) += v;
    }
    exponents.retain(|_, v| *v != 0);
    let total: i64 = exponents.iter().map(|(k, v)| k * v).sum();
    let unit = cfg.class_group.units().eps_f.pow(total);
    Ok(EpsilonEta { piece_values, exponents, total, unit })
}

/// Everything the exact side contributes to `u_η`.
#[derive(Clone, Debug, Serialize)]
pub struct ExactSide {
    /// `ζ_{f,η}(0, Frob_b) = ν_η(b, D_f, O_p)`
    pub zeta: i64,
    /// `ν_η(b, D_f, πO_p)`, enumerated separately
    pub pi_divisible: i64,
    /// `ν_η(b, π^{-1}D_f, O_p)`
    pub zeta_dfp: i64,
    pub epsilon: EpsilonEta,
    pub measure: ResidueMeasure,
}

pub fn exact_side(cfg: &GSConfig) -> Result<ExactSide> {
    let zeta = to_i64(&nu_eta(&cfg.ctx, &cfg.b, &cfg.df, &BallCondition::All)?)?;
    let pi_divisible = to_i64(&nu_eta(&cfg.ctx, &cfg.b, &cfg.df, &BallCondition::OrdAtLeast(cfg.e))?)?;
    let zeta_dfp = to_i64(&nu_eta(&cfg.ctx, &cfg.b, &cfg.dfp, &BallCondition::All)?)?;
    let epsilon = epsilon_eta(cfg)?;
    let measure = build_measure(&cfg.ctx, &cfg.b, &cfg.df, cfg.e, cfg.m)?;
    Ok(ExactSide { zeta, pi_divisible, zeta_dfp, epsilon, measure })
}

/// `u_η(b, D_f) = ε_η π^{ζ_{f,η}(0)} ×∫_𝐎 x dν_η` in `Q_p`.
#[derive(Clone, Debug, Serialize)]
pub struct UEta {
    pub valuation: i64,
    pub value: PadicNum,
    /// `p^{-valuation} u_η`
    pub unit: PadicNum,
    pub certified_precision: i64,
    pub working_precision: i64,
    /// `ord_p` of the multiplicative integral (nonzero only when `e > 1`)
    pub integral_valuation: i64,
    pub integral: PadicNum,
    pub exact: ExactSide,
}

fn working_precision(cfg: &GSConfig, mu: &ResidueMeasure) -> i64 {
    cfg.spec.prec.unwrap_or_else(|| mu.working_precision())
}

fn assemble(cfg: &GSConfig, exact: ExactSide, integral: PadicNum, prec: i64) -> Result<UEta> {
    let emb = &cfg.embedding;
    let eps = emb.embed(&exact.epsilon.unit, prec);
    let pi_pow = emb.embed(&cfg.pi, prec).pow(exact.zeta)?;
    let value = eps.mul(&pi_pow).mul(&integral);
    let valuation = value.valuation().ok_or_else(|| Error::Internal("u_eta vanished".into()))?;
    let unit = value.mul(&PadicNum::from_i64(cfg.p(), cfg.p(), prec + 1).pow(-valuation)?);
    Ok(UEta {
        valuation,
        value,
        unit,
        certified_precision: exact.measure.certified_precision(),
        working_precision: prec,
        integral_valuation: integral.valuation().unwrap_or(0),
        integral,
        exact,
    })
}

pub fn u_eta(cfg: &GSConfig) -> Result<UEta> {
    let exact = exact_side(cfg)?;
    let prec = working_precision(cfg, &exact.measure);
    let integral = integrate_mult(&exact.measure, prec);
    assemble(cfg, exact, integral, prec)
}

/// The explicit algebraic-log combination `Σ_j ν_j log ε_j + ζ log π`.
pub fn theorem_combo(cfg: &GSConfig, exact: &ExactSide) -> Result<AlgLogCombo> {
    let mut c = AlgLogCombo::new();
    for (piece, v) in cfg.decomposition.pieces.iter().zip(&exact.epsilon.piece_values) {
        c.push(BigRational::from_integer((*v).into()), piece.unit.clone())?;
    }
    c.push(BigRational::from_integer(exact.zeta.into()), cfg.pi.clone())?;
    Ok(c)
}

/// A perturbation of one measure entry, seen only by the multiplicative integral.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Fault {
    pub ball: BallLabel,
    pub delta: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Residual {
    pub name: &'static str,
    pub valuation: i64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExactCheck {
    pub name: &'static str,
    pub lhs: i64,
    pub rhs: i64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Subterms {
    pub zeta: i64,
    pub epsilon_exponents: BTreeMap<i64, i64>,
    pub epsilon_total: i64,
    pub measure_total: i64,
    pub total_variation: i64,
    pub delta: u32,
    pub log_integral: PadicNum,
    pub mult_integral: PadicNum,
    pub bracket: PadicNum,
    pub combo: AlgLogCombo,
    pub u_valuation: i64,
    pub u_unit: PadicNum,
    pub measure: ResidueMeasure,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub schema: &'static str,
    pub config: ConfigSummary,
    pub subterms: Subterms,
    pub residual_valuations: Vec<Residual>,
    pub exact_checks: Vec<ExactCheck>,
    pub certified_precision: i64,
    /// threshold every residual must reach
    pub required_precision: i64,
    pub working_precision: i64,
    pub pass: bool,
    /// the identity holds modulo the kernel of `log_p`
    pub note: &'static str,
}

impl VerificationReport {
    pub fn residual(&self, name: &str) -> Option<&Residual> {
        self.residual_valuations.iter().find(|r| r.name == name)
    }

    pub fn min_residual(&self) -> i64 {
        self.residual_valuations.iter().map(|r| r.valuation).min().unwrap_or(i64::MAX)
    }
}

pub const SCHEMA: &str = "gslab/1";

/// `max(m - δ, m)`: the `m - δ` bound goes negative once the total variation
/// exceeds `p^m`, while the level-`m` sums reach `m` in practice.
pub fn required_precision(m: u32, certified: i64) -> i64 {
    certified.max(m as i64)
}

/// Checks the three identities whose conjunction is the main theorem, plus
/// the exact bookkeeping behind them.
pub fn verify_theorem(cfg: &GSConfig, fault: Option<Fault>) -> Result<VerificationReport> {
    let exact = exact_side(cfg)?;
    let mu = exact.measure.clone();
    let prec = working_precision(cfg, &mu);
    let certified = mu.certified_precision();
    let required = required_precision(cfg.m, certified);
    let emb = &cfg.embedding;

    let mut mu_mult = mu.clone();
    if let Some(f) = fault {
        mu_mult.perturb(f.ball, f.delta);
    }
    let mult = integrate_mult(&mu_mult, prec);
    let log_int = integrate_log(&mu, prec);
    let combo = theorem_combo(cfg, &exact)?;
    let bracket = bracket_p(&combo, emb, prec)?;
    let u = assemble(cfg, exact.clone(), mult.clone(), prec)?;

    // (a) log_p ×∫ x dν = ∫ log_p x dν
    let a = iwasawa_log(&mult)?.residual_valuation(&log_int);
    // (b) log_p(ε_η π^ζ) = [Σ ν_j log ε_j + ζ log π]_p
    let lhs_b = emb.log(&exact.epsilon.unit, prec)?.add(&emb.log(&cfg.pi, prec)?.scale_int(exact.zeta));
    let b = lhs_b.residual_valuation(&bracket);
    // (c) log_p u_η = ∫ log_p x dν + [combo]_p
    let c = iwasawa_log(&u.value)?.residual_valuation(&log_int.add(&bracket));
    let residuals = vec![
        Residual { name: "integral_consistency", valuation: a, pass: a >= required },
        Residual { name: "epsilon_pi_bracket", valuation: b, pass: b >= required },
        Residual { name: "end_to_end", valuation: c, pass: c >= required },
    ];

    let integral_val: i64 = mu_mult.entries.iter().map(|(k, v)| k.j as i64 * v).sum();
    let check = |name, lhs: i64, rhs: i64| ExactCheck { name, lhs, rhs, pass: lhs == rhs };
    let exact_checks = vec![
        check("measure_mass_equals_zeta_minus_pi_part", mu.total(), exact.zeta - exact.pi_divisible),
        check("tabulated_pi_part", mu.pi_mass, exact.pi_divisible),
        check("epsilon_mass_equals_zeta", exact.epsilon.piece_values.iter().sum(), exact.zeta),
        check("pi_inverse_domain_zeta", exact.zeta_dfp, exact.zeta),
        check("u_valuation", u.valuation, exact.zeta * cfg.e as i64 + integral_val),
    ];
    let pass = residuals.iter().all(|r| r.pass) && exact_checks.iter().all(|c| c.pass);
    Ok(VerificationReport {
        schema: SCHEMA,
        config: cfg.summary(),
        subterms: Subterms {
            zeta: exact.zeta,
            epsilon_exponents: exact.epsilon.exponents.clone(),
            epsilon_total: exact.epsilon.total,
            measure_total: mu.total(),
            total_variation: mu.total_variation,
            delta: mu.delta(),
            log_integral: log_int,
            mult_integral: mult,
            bracket,
            combo,
            u_valuation: u.valuation,
            u_unit: u.unit.clone(),
            measure: mu,
        },
        residual_valuations: residuals,
        exact_checks,
        certified_precision: certified,
        required_precision: required,
        working_precision: prec,
        pass,
        note: "log_p identities hold modulo ker log_p",
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gs::ConfigSpec;

    #[test]
    fn theorem_on_trivial_modulus() {
        let cfg = GSConfig::discover(&ConfigSpec::new(2, 1, 7, 2)).unwrap();
        assert_eq!(cfg.eta.ell, 17);
        let r = verify_theorem(&cfg, None).unwrap();
        assert!(r.pass);
    }
}
