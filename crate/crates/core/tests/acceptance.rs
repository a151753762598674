//! Acceptance battery. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gslab::cones::{fundamental_domain_check, shintani_domain_with_base, Cone, ShintaniSet};
use gslab::gs::{probe_conjecture, required_precision, verify_theorem, ConfigSpec, EtaSpec, Fault, GSConfig};
use gslab::padic::measure::build_measure_with_moments;
use gslab::padic::{
    build_measure, integrate_log, integrate_moment, integrate_mult, iwasawa_log, teichmuller, BallLabel, PadicEmbedding,
    PadicNum, ResidueMeasure,
};
use gslab::quadfield::{integral_ideals_up_to, primes_above, FieldElem, Ideal, QuadField};
use gslab::zeta::{build_rset, nu_eta, nu_eta_routes, zeta0_unsmoothed_norm, BallCondition};

const SEED: u64 = 20_240_917;
const LEVEL: u32 = 3;

const C1_TRIPLES: usize = 50;
const C1_BUDGET: Duration = Duration::from_secs(60);
const C2_SUBDIVISIONS: usize = 20;
const C2_BALL_SPLITS: usize = 20;
const C3_BUDGET_PER_CONFIG: Duration = Duration::from_secs(300);
const C3_KMAX: u32 = 2;
const C4_SYNTHETIC: usize = 20;
const C5_MAX_CLASSES: usize = 8;
const C7_SAMPLES: usize = 500;
/// precision of the exact moments when compared with Riemann sums
const MOMENT_PREC: i64 = 12;

const TEICHMULLER_2_MOD_125: i64 = 57;
const LOG5_6_MOD_125: i64 = 55;
const SQRT2_MOD_343: i64 = 108;

/// `(D, f, p)` run end to end at level `LEVEL`.
const FULL_CONFIGS: [(i64, i64, i64); 3] = [(2, 1, 7), (2, 3, 7), (3, 1, 13)];
/// smoothing primes for the key-identity battery
const ROUTE_CONFIGS: [(i64, i64, i64, i64); 4] = [(2, 1, 7, 17), (2, 3, 7, 23), (3, 1, 13, 23), (3, 2, 13, 23)];

type Criterion = (u32, &'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

/// Every class of every full configuration, discovered once.
fn full_configs() -> &'static Vec<GSConfig> {
    static CACHE: OnceLock<Vec<GSConfig>> = OnceLock::new();
    CACHE.get_or_init(|| {
        let mut out = Vec::new();
        for (d, f, p) in FULL_CONFIGS {
            let base = GSConfig::discover(&ConfigSpec::new(d, f, p, LEVEL)).expect("discover");
            for (_, b) in base.class_reps().expect("class reps") {
                out.push(base.with_b(&b).expect("class rep"));
            }
        }
        out
    })
}

fn label(c: &GSConfig) -> String {
    let b = c.b.to_repr().hnf;
    format!("D={} f={} p={} b=[{},{},{}]", c.field.d(), c.spec.f, c.p(), b[0][0], b[0][1], b[1][1])
}

fn route_config(d: i64, f: i64, p: i64, eta: i64) -> GSConfig {
    let mut spec = ConfigSpec::new(d, f, p, 1);
    spec.eta = EtaSpec::Norm(eta);
    GSConfig::discover(&spec).expect("route config")
}

/// Small integral ideals coprime to `f p Nη`, usable as `b`.
fn b_pool(c: &GSConfig) -> Vec<Ideal> {
    let avoid = c.f.mul(&c.p_ideal.ideal).mul(&Ideal::from_integer(&c.field, c.eta.ell).unwrap());
    integral_ideals_up_to(&c.field, 30).into_iter().filter(|i| i.is_coprime_to(&avoid)).collect()
}

/// A totally positive point strictly inside a 2-dim cone, away from η.
fn inner_ray(c: &GSConfig, cone: &Cone, rng: &mut ChaCha8Rng) -> Option<FieldElem> {
    let [v0, v1] = cone.basis() else { return None };
    for _ in 0..20 {
        let (s, t) = (rng.gen_range(1..5i64), rng.gen_range(1..5i64));
        let w = &v0.scale(&BigRational::from_integer(s.into())) + &v1.scale(&BigRational::from_integer(t.into()));
        if !c.eta.contains(&w) && cone.contains(&w) {
            return Some(w);
        }
    }
    None
}

fn random_cone(c: &GSConfig, rng: &mut ChaCha8Rng) -> Cone {
    let mut pool: Vec<Cone> = c.df.cones.clone();
    pool.extend(c.dfp.cones.iter().cloned());
    pool.extend(c.decomposition.pieces.iter().map(|p| p.cone.translate(&p.unit)));
    let cone = pool[rng.gen_range(0..pool.len())].clone();
    if cone.dim() == 2 && rng.gen_bool(0.3) {
        if let Some(w) = inner_ray(c, &cone, rng) {
            let parts = cone.subdivide(&w).unwrap();
            return parts[rng.gen_range(0..parts.len())].clone();
        }
    }
    cone
}

fn random_ball(p: i64, rng: &mut ChaCha8Rng) -> BallCondition {
    match rng.gen_range(0..5) {
        0 => BallCondition::All,
        1 => BallCondition::Ball { a: rng.gen_range(0..p), level: 1 },
        2 => BallCondition::Ball { a: rng.gen_range(0..p * p), level: 2 },
        3 => BallCondition::OrdAtLeast(1),
        _ => BallCondition::OrdLess(1),
    }
}

fn criterion_1_2() -> (Outcome, Outcome) {
    let t0 = Instant::now();
    let cfgs: Vec<GSConfig> = ROUTE_CONFIGS.iter().map(|&(d, f, p, e)| route_config(d, f, p, e)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut agree, mut integral, mut total) = (0, 0, 0);
    let mut triples = Vec::new();
    for i in 0..C1_TRIPLES {
        let c = &cfgs[i % cfgs.len()];
        let pool = b_pool(c);
        let b = pool[rng.gen_range(0..pool.len().min(12))].clone();
        let cone = random_cone(c, &mut rng);
        let ball = random_ball(c.p(), &mut rng);
        let r = nu_eta_routes(&c.ctx, &b, &ShintaniSet::new(vec![cone.clone()]), &ball).expect("routes");
        total += 1;
        agree += r.agree() as usize;
        integral += r.twisted.is_integer() as usize;
        triples.push((i % cfgs.len(), b, cone, ball));
    }
    let elapsed = t0.elapsed();
    let c1 = outcome(
        agree == total && total >= C1_TRIPLES && elapsed < C1_BUDGET,
        format!("{agree}/{total} triples agree exactly, {:.1}s of {}s", elapsed.as_secs_f64(), C1_BUDGET.as_secs()),
    );

    // additivity under subdivision and ball splitting
    let mut sub_ok = 0;
    let mut sub_n = 0;
    let mut tries = 0;
    while sub_n < C2_SUBDIVISIONS && tries < 10 * C2_SUBDIVISIONS {
        tries += 1;
        let c = &cfgs[tries % cfgs.len()];
        let pool = b_pool(c);
        let b = &pool[rng.gen_range(0..pool.len().min(12))];
        let cone = c.df.cones[rng.gen_range(0..c.df.cones.len())].clone();
        let Some(w) = (cone.dim() == 2).then(|| inner_ray(c, &cone, &mut rng)).flatten() else { continue };
        let ball = random_ball(c.p(), &mut rng);
        let whole = nu_eta(&c.ctx, b, &ShintaniSet::new(vec![cone.clone()]), &ball).unwrap();
        let parts = nu_eta(&c.ctx, b, &ShintaniSet::new(cone.subdivide(&w).unwrap()), &ball).unwrap();
        sub_n += 1;
        sub_ok += (whole == parts) as usize;
    }
    let mut split_ok = 0;
    for i in 0..C2_BALL_SPLITS {
        let c = &cfgs[i % cfgs.len()];
        let pool = b_pool(c);
        let b = &pool[rng.gen_range(0..pool.len().min(12))];
        let s = ShintaniSet::new(vec![random_cone(c, &mut rng)]);
        let p = c.p();
        let a = rng.gen_range(0..p);
        let whole = nu_eta(&c.ctx, b, &s, &BallCondition::Ball { a, level: 1 }).unwrap();
        let mut parts = BigRational::zero();
        for t in 0..p {
            parts += nu_eta(&c.ctx, b, &s, &BallCondition::Ball { a: a + t * p, level: 2 }).unwrap();
        }
        split_ok += (whole == parts) as usize;
    }
    // refinement: the level-2 table coarsens to the level-1 table
    let c = &cfgs[1];
    let fine = build_measure(&c.ctx, &c.b, &c.df, c.e, 2).unwrap();
    let coarse = build_measure(&c.ctx, &c.b, &c.df, c.e, 1).unwrap();
    let refined = fine.coarsen(1).unwrap();
    let refine_ok = refined.entries == coarse.entries && refined.pi_mass == coarse.pi_mass;
    let c2 = outcome(
        integral == total && sub_ok == sub_n && sub_n >= C2_SUBDIVISIONS && split_ok == C2_BALL_SPLITS && refine_ok,
        format!(
            "{integral}/{total} integral, {sub_ok}/{sub_n} subdivisions, {split_ok}/{C2_BALL_SPLITS} ball splits, refinement {}",
            if refine_ok { "exact" } else { "differs" }
        ),
    );
    (c1, c2)
}

/// Configurations for the moment criterion: `p = 7`, level 3.
fn moment_configs() -> Vec<&'static GSConfig> {
    full_configs().iter().filter(|c| c.p() == 7).collect()
}

fn criterion_3() -> Outcome {
    let mut lines = Vec::new();
    let mut pass = true;
    let cfgs = moment_configs();
    for c in &cfgs {
        let t0 = Instant::now();
        let (mu, exact) = build_measure_with_moments(&c.ctx, &c.b, &c.df, c.e, c.m, C3_KMAX).unwrap();
        let cert = mu.certified_precision();
        let req = required_precision(c.m, cert);
        let mut worst = i64::MAX;
        for (k, z) in exact.iter().enumerate() {
            let ex = c.embedding.embed(z, MOMENT_PREC);
            let riemann = integrate_moment(&mu, k as u32, MOMENT_PREC);
            worst = worst.min(riemann.residual_valuation(&ex));
        }
        let dt = t0.elapsed();
        let ok = worst >= cert && worst >= req && dt < C3_BUDGET_PER_CONFIG;
        pass &= ok;
        lines.push(format!("{} min residual {worst} (m-δ={cert}, required {req}, {:.1}s)", label(c), dt.as_secs_f64()));
    }
    pass &= cfgs.len() >= 3;
    outcome(pass, lines.join("; "))
}

fn random_pm1_measure(rng: &mut ChaCha8Rng, p: i64, m: u32, e: u32) -> ResidueMeasure {
    let pm = p.pow(m);
    let mut entries = Vec::new();
    for _ in 0..rng.gen_range(3..25) {
        let j = rng.gen_range(0..e);
        let mut u = rng.gen_range(1..pm);
        if u % p == 0 {
            u += 1;
        }
        entries.push((BallLabel { j, u }, if rng.gen_bool(0.5) { 1 } else { -1 }));
    }
    entries.sort();
    entries.dedup_by_key(|(k, _)| *k);
    ResidueMeasure::from_entries(p, m, e, entries).unwrap()
}

/// Ball `1 + p`, whose log has valuation exactly one.
fn fault_ball(p: i64) -> BallLabel {
    BallLabel { j: 0, u: 1 + p }
}

fn criterion_4() -> Outcome {
    let mut pass = true;
    let mut config_ok = 0;
    let mut faults_caught = 0;
    let cfgs = full_configs();
    for c in cfgs {
        let r = verify_theorem(c, None).unwrap();
        let a = r.residual("integral_consistency").unwrap();
        config_ok += (a.pass && a.valuation >= r.certified_precision) as usize;
        let bad = verify_theorem(c, Some(Fault { ball: fault_ball(c.p()), delta: 1 })).unwrap();
        faults_caught += (!bad.residual("integral_consistency").unwrap().pass && !bad.pass) as usize;
    }
    pass &= config_ok == cfgs.len() && faults_caught == cfgs.len();

    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 4);
    let (mut synth_ok, mut synth_caught) = (0, 0);
    for i in 0..C4_SYNTHETIC {
        let (p, e) = [(7, 1), (7, 2), (5, 1), (13, 1)][i % 4];
        let mu = random_pm1_measure(&mut rng, p, LEVEL, e);
        let prec = mu.working_precision();
        let req = required_precision(LEVEL, mu.certified_precision());
        let lhs = iwasawa_log(&integrate_mult(&mu, prec)).unwrap();
        let rhs = integrate_log(&mu, prec);
        synth_ok += (lhs.residual_valuation(&rhs) >= req) as usize;
        let mut faulty = mu.clone();
        faulty.perturb(fault_ball(p), 1);
        let lhs = iwasawa_log(&integrate_mult(&faulty, prec)).unwrap();
        synth_caught += (lhs.residual_valuation(&rhs) < req) as usize;
    }
    pass &= synth_ok == C4_SYNTHETIC && synth_caught == C4_SYNTHETIC;
    outcome(
        pass,
        format!(
            "{config_ok}/{} configs, {synth_ok}/{C4_SYNTHETIC} synthetic; faults caught {faults_caught}/{} and {synth_caught}/{C4_SYNTHETIC}",
            cfgs.len(),
            cfgs.len()
        ),
    )
}

fn criterion_5() -> Outcome {
    let mut lines = Vec::new();
    let mut pass = true;
    let cfgs = full_configs();
    for c in cfgs {
        let r = verify_theorem(c, None).unwrap();
        let floor = r.certified_precision;
        let ok = r.pass
            && r.residual_valuations.iter().all(|x| x.valuation >= floor)
            && c.class_group.order() <= C5_MAX_CLASSES
            && c.m == LEVEL;
        pass &= ok;
        lines.push(format!("{} residual {} (m-δ={floor}) {}", label(c), r.min_residual(), if ok { "ok" } else { "FAILED" }));
    }
    pass &= cfgs.len() >= 3;
    outcome(pass, lines.join("; "))
}

fn criterion_6() -> Outcome {
    let mut lines = Vec::new();
    let mut pass = true;
    for (d, p) in [(2, 7), (3, 13)] {
        let base = GSConfig::discover(&ConfigSpec::new(d, 1, p, 1)).unwrap();
        let reps = base.class_reps().unwrap();
        let mut bernoulli = BigRational::zero();
        let mut measured = 0i64;
        for (_, b) in &reps {
            let c = base.with_b(b).unwrap();
            for cone in &c.df.cones {
                bernoulli += zeta0_unsmoothed_norm(&build_rset(&c.ctx, b, cone, &BallCondition::All).unwrap()).unwrap();
            }
            let mu = build_measure(&c.ctx, b, &c.df, c.e, 1).unwrap();
            measured += mu.total() + mu.pi_mass;
        }
        let ok = bernoulli.is_zero() && measured == 0;
        pass &= ok;
        lines.push(format!("D={d}: {} classes, sums {bernoulli} and {measured}", reps.len()));
    }
    outcome(pass, lines.join("; "))
}

fn criterion_7() -> Outcome {
    let mut domains: Vec<(String, QuadField, ShintaniSet, FieldElem)> = Vec::new();
    let mut seen = Vec::new();
    for c in full_configs() {
        let key = (c.field.d(), c.spec.f);
        if seen.contains(&key) {
            continue;
        }
        seen.push(key);
        let eps = c.class_group.units().eps_f.clone();
        domains.push((format!("D_f {key:?}"), c.field, c.df.clone(), eps.clone()));
        domains.push((format!("pi^-1 D_f {key:?}"), c.field, c.dfp.clone(), eps.clone()));
        let w = c.field.elem(1, 1);
        if w.is_totally_positive() {
            let alt = shintani_domain_with_base(&c.field, c.class_group.units(), &w).unwrap();
            domains.push((format!("D_f base 1+w {key:?}"), c.field, alt, eps));
        }
    }
    let mut bad = Vec::new();
    for (name, field, s, eps) in &domains {
        let r = fundamental_domain_check(field, s, eps, C7_SAMPLES, SEED);
        if r.violations != 0 || r.samples != C7_SAMPLES {
            bad.push(format!("{name}: {} violations", r.violations));
        }
    }
    outcome(bad.is_empty(), format!("{} domains x {C7_SAMPLES} samples, violations: {}", domains.len(), if bad.is_empty() { "0".into() } else { bad.join(", ") }))
}

fn criterion_8() -> Outcome {
    let mut lines = Vec::new();
    let mut gate = true;
    for c in full_configs().iter().filter(|c| c.e == 1) {
        let r = probe_conjecture(c).unwrap();
        gate &= r.valuation_matches;
        let probes: Vec<String> = r
            .outcomes
            .iter()
            .map(|o| format!("{}={}", o.name, o.residual.map_or("skipped".into(), |v| format!("{v}/{}", o.required_precision))))
            .collect();
        lines.push(format!("{} ord {}={} [{}]", label(c), r.base_valuation, r.expected_valuation, probes.join(" ")));
    }
    outcome(gate, lines.join("; "))
}

/// `x` with `x^(p-1) ≡ 1` and `x ≡ a` mod `p`, by search.
fn teichmuller_oracle(a: i64, p: i64, n: u32) -> i64 {
    let m = p.pow(n);
    (0..m).find(|&x| x % p == a % p && (0..p - 1).fold(1i64, |acc, _| acc * x % m) == 1).unwrap()
}

/// `log(1 + y)` for `p | y` from the series in exact rationals, reduced mod `p^n`.
fn log_oracle(x: i64, p: i64, n: u32) -> i64 {
    let y = BigRational::from_integer((x - 1).into());
    let mut sum = BigRational::zero();
    let mut pw = y.clone();
    for k in 1..=60i64 {
        let term = &pw / BigRational::from_integer(k.into());
        sum = if k % 2 == 1 { sum + term } else { sum - term };
        pw = &pw * &y;
    }
    let m = BigInt::from(p.pow(n));
    let den_inv = sum.denom().modpow(&(BigInt::from(p.pow(n - 1) * (p - 1) - 1)), &m);
    ((sum.numer() * den_inv) % &m + &m).to_i64().unwrap() % m.to_i64().unwrap()
}

fn sqrt_oracle(a: i64, root_mod_p: i64, p: i64, n: u32) -> i64 {
    let m = p.pow(n);
    (0..m).find(|&y| y * y % m == a.rem_euclid(m) && y % p == root_mod_p).unwrap()
}

fn criterion_9() -> Outcome {
    let t_oracle = teichmuller_oracle(2, 5, 3);
    let t_lib = teichmuller(&PadicNum::from_i64(5, 2, 3)).unwrap().to_integer().unwrap();
    let l_oracle = log_oracle(6, 5, 3);
    let l_lib = iwasawa_log(&PadicNum::from_i64(5, 6, 3)).unwrap().to_integer().unwrap();
    let field = QuadField::new(2).unwrap();
    let prime = primes_above(&field, 7).into_iter().find(|q| q.root == Some(3)).unwrap();
    let emb = PadicEmbedding::new(&prime).unwrap();
    let s_lib = emb.embed(&field.sqrt_d(), 3).to_integer().unwrap();
    let s_oracle = sqrt_oracle(2, 3, 7, 3);
    let ok = t_oracle == TEICHMULLER_2_MOD_125
        && t_lib == TEICHMULLER_2_MOD_125.into()
        && l_oracle == LOG5_6_MOD_125
        && l_lib == LOG5_6_MOD_125.into()
        && s_oracle == SQRT2_MOD_343
        && s_lib == SQRT2_MOD_343.into();
    outcome(ok, format!("omega(2) = {t_lib} mod 125, log(6) = {l_lib} mod 125, sqrt 2 = {s_lib} mod 343"))
}

fn guarded(f: impl FnOnce() -> Outcome) -> Outcome {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
        outcome(false, format!("panicked: {}", msg.unwrap_or_default()))
    })
}

fn report(n: u32, name: &str, o: &Outcome, secs: f64) {
    println!("criterion {n} {name}: {} ({secs:.1}s) {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
}

fn main() {
    let mut failed = 0;
    let t0 = Instant::now();
    let (c1, c2) = catch_unwind(criterion_1_2).unwrap_or_else(|_| (outcome(false, "panicked"), outcome(false, "panicked")));
    let secs = t0.elapsed().as_secs_f64();
    report(1, "key identity routes agree", &c1, secs);
    report(2, "integrality and additivity", &c2, secs);
    failed += (!c1.pass) as u32 + (!c2.pass) as u32;
    let rest: [Criterion; 7] = [
        (3, "moment interpolation", criterion_3),
        (4, "integral consistency", criterion_4),
        (5, "verify_theorem end to end", criterion_5),
        (6, "vanishing sums", criterion_6),
        (7, "fundamental domains", criterion_7),
        (8, "probes; valuation gates", criterion_8),
        (9, "p-adic kernel golden values", criterion_9),
    ];
    for (n, name, f) in rest {
        let t = Instant::now();
        let o = guarded(f);
        report(n, name, &o, t.elapsed().as_secs_f64());
        failed += (!o.pass) as u32;
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
