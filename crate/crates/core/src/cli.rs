//! Batch driver: `gslab <command> [flags]`, JSON on stdout.
//!
//! Config files hold `key=value` lines; `#` starts a comment. Keys are the
//! flag names without dashes: `D f p eta b m M seed jobs`. Precedence, lowest
//! first: defaults, file, `GSLAB_SEED`, flags.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::cones::{fundamental_domain_check, shintani_domain, FdReport, GoodDecomposition, ShintaniSet};
use crate::error::Error;
use crate::gs::{
    probe_conjecture, recognize, u_eta, verify_theorem, ConfigSpec, EtaSpec, GSConfig, ProbeReport, UEta,
    VerificationReport, SCHEMA,
};
use crate::padic::{build_measure, PadicNum, ResidueMeasure};
use crate::quadfield::{primes_above, ClassLabel, FieldElem, Ideal, IdealRepr, Omega, PrimeIdeal, QuadField, RayClassGroup, UnitData};
use crate::zeta::{build_rset, nu_eta, nu_eta_routes, zeta0_unsmoothed_norm, BallCondition};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

/// Samples per fundamental-domain check.
pub const FD_SAMPLES: usize = 500;
/// Height bound tried when recognizing Galois orbits.
pub const RECOGNITION_BOUND: i64 = 50;

const CLASS_GROUP_PRIME_CAP: i64 = 2_000;

#[derive(Parser, Debug)]
#[command(name = "gslab", version, about = "Gross-Stark units of real quadratic fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Units, class group and splitting of p
    FieldInfo(Flags),
    /// Shintani domains, the simultaneous decomposition and fundamental-domain checks
    Shintani(Flags),
    /// Partial zeta values at 0, plain and smoothed
    Zeta(Flags),
    /// Residue tables of the smoothed measure
    Measure(Flags),
    /// The p-adic unit u_eta
    UUnit(Flags),
    /// The three log identities and the exact bookkeeping
    VerifyTheorem(Flags),
    /// Independence probes; only the valuation check gates
    Probe(Flags),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::FieldInfo(_) => "field-info",
            Command::Shintani(_) => "shintani",
            Command::Zeta(_) => "zeta",
            Command::Measure(_) => "measure",
            Command::UUnit(_) => "u-unit",
            Command::VerifyTheorem(_) => "verify-theorem",
            Command::Probe(_) => "probe",
        }
    }

    fn flags(&self) -> &Flags {
        match self {
            Command::FieldInfo(f)
            | Command::Shintani(f)
            | Command::Zeta(f)
            | Command::Measure(f)
            | Command::UUnit(f)
            | Command::VerifyTheorem(f)
            | Command::Probe(f) => f,
        }
    }
}

#[derive(Args, Debug, Default, Clone)]
struct Flags {
    /// squarefree D > 1 of Q(sqrt D)
    #[arg(long = "D", allow_hyphen_values = true)]
    d: Option<String>,
    /// positive integer generating the modulus
    #[arg(long, allow_hyphen_values = true)]
    f: Option<String>,
    /// split rational prime
    #[arg(long)]
    p: Option<String>,
    /// `auto` or the norm of a degree-one prime
    #[arg(long)]
    eta: Option<String>,
    /// `one`, `all-classes`, or an HNF `a,b,d`
    #[arg(long)]
    b: Option<String>,
    /// level of the residue tables
    #[arg(long)]
    m: Option<String>,
    /// working p-adic precision
    #[arg(long = "M")]
    big_m: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    jobs: Option<String>,
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Which `b` to run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BSpec {
    One,
    AllClasses,
    Hnf(i64, i64, i64),
}

/// Fully merged run parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub command: String,
    #[serde(rename = "D")]
    pub d: Option<i64>,
    pub f: i64,
    pub p: Option<i64>,
    pub eta: EtaSpec,
    pub b: BSpec,
    pub m: u32,
    #[serde(rename = "M")]
    pub big_m: Option<i64>,
    pub seed: u64,
    pub jobs: usize,
}

impl RunConfig {
    pub fn new(command: &str) -> Self {
        RunConfig {
            command: command.into(),
            d: None,
            f: 1,
            p: None,
            eta: EtaSpec::Auto,
            b: BSpec::One,
            m: 3,
            big_m: None,
            seed: 0,
            jobs: 1,
        }
    }

    /// Applies one `key=value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let v = value.trim();
        match key {
            "D" => self.d = Some(parse_num(key, v)?),
            "f" => self.f = parse_num(key, v)?,
            "p" => self.p = Some(parse_num(key, v)?),
            "eta" => {
                self.eta = if v == "auto" { EtaSpec::Auto } else { EtaSpec::Norm(parse_num(key, v)?) };
            }
            "b" => self.b = parse_b(v)?,
            "m" => self.m = parse_num(key, v)?,
            "M" => self.big_m = Some(parse_num(key, v)?),
            "seed" => self.seed = parse_num(key, v)?,
            "jobs" => self.jobs = parse_num(key, v)?,
            _ => return Err(CliError::Config(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    fn spec(&self) -> Result<ConfigSpec, CliError> {
        let d = self.d.ok_or_else(|| CliError::Config("missing D".into()))?;
        let p = self.p.ok_or_else(|| CliError::Config("missing p".into()))?;
        let mut s = ConfigSpec::new(d, self.f, p, self.m);
        s.eta = self.eta.clone();
        s.prec = self.big_m;
        s.jobs = self.jobs.max(1);
        Ok(s)
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, CliError> {
    v.parse().map_err(|_| CliError::Config(format!("bad value `{v}` for {key}")))
}

fn parse_b(v: &str) -> Result<BSpec, CliError> {
    match v {
        "one" | "1" => Ok(BSpec::One),
        "all-classes" => Ok(BSpec::AllClasses),
        _ => {
            let parts: Vec<&str> = v.split(',').map(str::trim).collect();
            if parts.len() != 3 {
                return Err(CliError::Config(format!("b must be one, all-classes or a,b,d; got `{v}`")));
            }
            Ok(BSpec::Hnf(parse_num("b", parts[0])?, parse_num("b", parts[1])?, parse_num("b", parts[2])?))
        }
    }
}

/// Parses config-file text into ordered `(key, value)` pairs.
pub fn parse_config_text(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("line {}: expected key=value", n + 1)))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

/// Applies config-file pairs; repeated keys keep the last value and yield a warning.
pub fn apply_config_text(cfg: &mut RunConfig, text: &str) -> Result<Vec<String>, CliError> {
    let pairs = parse_config_text(text)?;
    let mut seen = std::collections::BTreeSet::new();
    let mut warnings = Vec::new();
    for (k, v) in &pairs {
        if !seen.insert(k.clone()) {
            warnings.push(format!("duplicate key `{k}`; last value wins"));
        }
        cfg.set(k, v)?;
    }
    Ok(warnings)
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Pipeline(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Pipeline(Error::Internal(_)) | CliError::Pipeline(Error::SearchCap(_)) => EXIT_CHECK_FAILED,
            CliError::Pipeline(_) => EXIT_CONFIG,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(s) => write!(f, "configuration error: {s}"),
            CliError::Pipeline(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Pipeline(e)
    }
}

fn merge(cmd: &Command, env_seed: Option<String>, warn: &mut Vec<String>) -> Result<RunConfig, CliError> {
    let flags = cmd.flags();
    let mut cfg = RunConfig::new(cmd.name());
    if let Some(path) = &flags.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        warn.extend(apply_config_text(&mut cfg, &text)?);
    }
    if let Some(s) = env_seed {
        cfg.set("seed", &s)?;
    }
    let pairs = [
        ("D", &flags.d),
        ("f", &flags.f),
        ("p", &flags.p),
        ("eta", &flags.eta),
        ("b", &flags.b),
        ("m", &flags.m),
        ("M", &flags.big_m),
        ("seed", &flags.seed),
        ("jobs", &flags.jobs),
    ];
    for (k, v) in pairs {
        if let Some(v) = v {
            cfg.set(k, v)?;
        }
    }
    Ok(cfg)
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: &'static str,
    command: &'a str,
    config: &'a RunConfig,
    pass: bool,
    result: T,
}

/// Parses `argv` (program name first), runs the command and writes JSON to `out`.
pub fn run_with<I, T>(argv: I, env_seed: Option<String>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_PASS };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let mut warnings = Vec::new();
    let outcome = merge(&cli.command, env_seed, &mut warnings).and_then(|cfg| dispatch(&cfg).map(|r| (cfg, r)));
    for w in &warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    match outcome {
        Ok((_, (json, pass))) => {
            let _ = writeln!(out, "{json}");
            if pass {
                EXIT_PASS
            } else {
                EXIT_CHECK_FAILED
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

/// Entry point for the binary.
pub fn run() -> i32 {
    let env_seed = std::env::var("GSLAB_SEED").ok();
    run_with(std::env::args_os(), env_seed, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

fn emit<T: Serialize>(cfg: &RunConfig, pass: bool, result: T) -> Result<(String, bool), CliError> {
    let env = Envelope { schema: SCHEMA, command: &cfg.command, config: cfg, pass, result };
    let s = serde_json::to_string_pretty(&env).map_err(|e| CliError::Config(e.to_string()))?;
    Ok((s, pass))
}

/// Runs a merged configuration; returns the JSON document and whether every check passed.
pub fn dispatch(cfg: &RunConfig) -> Result<(String, bool), CliError> {
    match cfg.command.as_str() {
        "field-info" => field_info(cfg),
        "shintani" => shintani(cfg),
        "zeta" => per_class(cfg, zeta_class, zeta_summary),
        "measure" => per_class(cfg, measure_class, all_pass),
        "u-unit" => per_class(cfg, u_unit_class, all_pass),
        "verify-theorem" => per_class(cfg, verify_class, all_pass),
        "probe" => probe(cfg),
        c => Err(CliError::Config(format!("unknown command `{c}`"))),
    }
}

#[derive(Serialize)]
struct PrimeInfo {
    ideal: IdealRepr,
    residue_degree: u32,
    ramification: u32,
    root: Option<i64>,
}

impl From<&PrimeIdeal> for PrimeInfo {
    fn from(q: &PrimeIdeal) -> Self {
        PrimeInfo { ideal: q.ideal.to_repr(), residue_degree: q.residue_degree, ramification: q.ramification, root: q.root }
    }
}

#[derive(Serialize)]
struct FieldInfo {
    #[serde(rename = "D")]
    d: i64,
    disc: i64,
    omega: Omega,
    modulus: IdealRepr,
    units: UnitData,
    narrow_ray_class_number: usize,
    wide_ray_class_number: usize,
    class_reps: Vec<IdealRepr>,
    primes_above_p: Option<Vec<PrimeInfo>>,
}

fn field_and_group(cfg: &RunConfig) -> Result<(QuadField, Ideal, RayClassGroup), CliError> {
    let d = cfg.d.ok_or_else(|| CliError::Config("missing D".into()))?;
    let field = QuadField::new(d)?;
    if cfg.f < 1 {
        return Err(CliError::Config("f must be a positive integer".into()));
    }
    let f = Ideal::from_integer(&field, cfg.f)?;
    let cg = RayClassGroup::new(&field, &f, CLASS_GROUP_PRIME_CAP)?;
    Ok((field, f, cg))
}

fn field_info(cfg: &RunConfig) -> Result<(String, bool), CliError> {
    let (field, f, cg) = field_and_group(cfg)?;
    let info = FieldInfo {
        d: field.d(),
        disc: field.disc(),
        omega: field.omega(),
        modulus: f.to_repr(),
        units: cg.units().clone(),
        narrow_ray_class_number: cg.order(),
        wide_ray_class_number: cg.wide_class_number(),
        class_reps: cg.reps().iter().map(Ideal::to_repr).collect(),
        primes_above_p: cfg.p.map(|p| primes_above(&field, p).iter().map(PrimeInfo::from).collect()),
    };
    emit(cfg, true, info)
}

#[derive(Serialize)]
struct ShintaniReport {
    df: ShintaniSet,
    df_check: FdReport,
    pi: Option<FieldElem>,
    dfp: Option<ShintaniSet>,
    dfp_check: Option<FdReport>,
    decomposition: Option<GoodDecomposition>,
    eta_norm: Option<i64>,
}

fn shintani(cfg: &RunConfig) -> Result<(String, bool), CliError> {
    let (field, _, cg) = field_and_group(cfg)?;
    let unit = &cg.units().eps_f;
    let report = if cfg.p.is_some() {
        let g = GSConfig::discover(&cfg.spec()?)?;
        ShintaniReport {
            df_check: fundamental_domain_check(&field, &g.df, unit, FD_SAMPLES, cfg.seed),
            dfp_check: Some(fundamental_domain_check(&field, &g.dfp, unit, FD_SAMPLES, cfg.seed)),
            df: g.df,
            pi: Some(g.pi),
            dfp: Some(g.dfp),
            decomposition: Some(g.decomposition),
            eta_norm: Some(g.eta.ell),
        }
    } else {
        let df = shintani_domain(&field, cg.units())?;
        ShintaniReport {
            df_check: fundamental_domain_check(&field, &df, unit, FD_SAMPLES, cfg.seed),
            df,
            pi: None,
            dfp: None,
            dfp_check: None,
            decomposition: None,
            eta_norm: None,
        }
    };
    let pass = report.df_check.violations == 0 && report.dfp_check.as_ref().is_none_or(|c| c.violations == 0);
    emit(cfg, pass, report)
}

/// One class's output and its pass flag.
trait ClassResult: Serialize + Send {
    fn pass(&self) -> bool;
}

#[derive(Serialize)]
struct ClassEntry<T: Serialize> {
    class: Option<ClassLabel>,
    b: IdealRepr,
    #[serde(flatten)]
    value: T,
}

#[derive(Serialize)]
struct PerClass<T: Serialize, S: Serialize> {
    config: crate::gs::config::ConfigSummary,
    classes: Vec<ClassEntry<T>>,
    summary: S,
}

/// The `b` values to run, labelled by class in all-classes mode.
fn targets(cfg: &RunConfig, base: &GSConfig) -> Result<Vec<(Option<ClassLabel>, Ideal)>, CliError> {
    Ok(match cfg.b {
        BSpec::One => vec![(base.class_group.class_of(&base.b).ok(), base.b.clone())],
        BSpec::Hnf(a, b, d) => {
            let i = Ideal::from_hnf(&base.field, a, b, d)?;
            vec![(base.class_group.class_of(&i).ok(), i)]
        }
        BSpec::AllClasses => base.class_reps()?.into_iter().map(|(c, i)| (Some(c), i)).collect(),
    })
}

fn base_config(cfg: &RunConfig) -> Result<GSConfig, CliError> {
    let spec = cfg.spec()?;
    let b = match cfg.b {
        BSpec::Hnf(a, b, d) => Some(Ideal::from_hnf(&QuadField::new(spec.d)?, a, b, d)?),
        _ => None,
    };
    Ok(GSConfig::discover_with_b(&spec, b)?)
}

/// Runs `f` on every target in index order, `jobs` classes at a time.
fn par_map<T, R, F>(items: &[T], jobs: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    if jobs <= 1 || items.len() <= 1 {
        return items.iter().map(&f).collect();
    }
    let mut out: Vec<Option<R>> = (0..items.len()).map(|_| None).collect();
    let next = std::sync::atomic::AtomicUsize::new(0);
    let slots = std::sync::Mutex::new(&mut out);
    std::thread::scope(|s| {
        for _ in 0..jobs.min(items.len()) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if i >= items.len() {
                    break;
                }
                let r = f(&items[i]);
                slots.lock().unwrap()[i] = Some(r);
            });
        }
    });
    out.into_iter().map(|r| r.expect("every slot filled")).collect()
}

fn per_class<T, S, F, G>(cfg: &RunConfig, run: F, summarize: G) -> Result<(String, bool), CliError>
where
    T: ClassResult,
    S: Serialize + SummaryPass,
    F: Fn(&GSConfig) -> Result<T, Error> + Sync,
    G: Fn(&RunConfig, &GSConfig, &[ClassEntry<T>]) -> Result<S, CliError>,
{
    let base = base_config(cfg)?;
    let targets = targets(cfg, &base)?;
    let class_parallel = targets.len() > 1 && cfg.jobs > 1;
    let mut base_run = base.clone();
    if class_parallel {
        base_run.ctx.jobs = 1;
    }
    let results = par_map(&targets, if class_parallel { cfg.jobs } else { 1 }, |(_, b)| {
        base_run.with_b(b).and_then(|c| run(&c))
    });
    let mut classes = Vec::new();
    for ((class, b), r) in targets.iter().zip(results) {
        classes.push(ClassEntry { class: *class, b: b.to_repr(), value: r? });
    }
    let summary = summarize(cfg, &base, &classes)?;
    let pass = classes.iter().all(|c| c.value.pass()) && summary.pass();
    emit(cfg, pass, PerClass { config: base.summary(), classes, summary })
}

trait SummaryPass {
    fn pass(&self) -> bool;
}

#[derive(Serialize)]
struct NoSummary {}

impl SummaryPass for NoSummary {
    fn pass(&self) -> bool {
        true
    }
}

fn all_pass<T: Serialize>(_: &RunConfig, _: &GSConfig, _: &[ClassEntry<T>]) -> Result<NoSummary, CliError> {
    Ok(NoSummary {})
}

#[derive(Serialize)]
struct ZetaClass {
    /// `ζ_f(0)` of the class, via Bernoulli polynomials on each cone
    #[serde(with = "crate::scalar::rat_serde")]
    zeta_f0: BigRational,
    /// smoothed value, twisted route
    #[serde(with = "crate::scalar::rat_serde")]
    smoothed: BigRational,
    #[serde(with = "crate::scalar::rat_serde")]
    smoothed_norm_route: BigRational,
    routes_agree: bool,
    integral: bool,
}

impl ClassResult for ZetaClass {
    fn pass(&self) -> bool {
        self.routes_agree && self.integral
    }
}

fn zeta_class(g: &GSConfig) -> Result<ZetaClass, Error> {
    let mut z = BigRational::zero();
    for cone in &g.df.cones {
        z += zeta0_unsmoothed_norm(&build_rset(&g.ctx, &g.b, cone, &BallCondition::All)?)?;
    }
    let r = nu_eta_routes(&g.ctx, &g.b, &g.df, &BallCondition::All)?;
    Ok(ZetaClass {
        zeta_f0: z,
        routes_agree: r.agree(),
        integral: r.twisted.is_integer(),
        smoothed: r.twisted,
        smoothed_norm_route: r.barnes_norm,
    })
}

#[derive(Serialize)]
struct ZetaSummary {
    all_classes: bool,
    #[serde(with = "crate::scalar::rat_serde")]
    sum_zeta_f0: BigRational,
    #[serde(with = "crate::scalar::rat_serde")]
    sum_smoothed: BigRational,
    vanishing: Option<bool>,
}

impl SummaryPass for ZetaSummary {
    fn pass(&self) -> bool {
        self.vanishing != Some(false)
    }
}

fn zeta_summary(cfg: &RunConfig, _: &GSConfig, classes: &[ClassEntry<ZetaClass>]) -> Result<ZetaSummary, CliError> {
    let all = cfg.b == BSpec::AllClasses;
    let s1: BigRational = classes.iter().map(|c| c.value.zeta_f0.clone()).sum();
    let s2: BigRational = classes.iter().map(|c| c.value.smoothed.clone()).sum();
    let vanishing = all.then(|| s1.is_zero() && s2.is_zero());
    Ok(ZetaSummary { all_classes: all, sum_zeta_f0: s1, sum_smoothed: s2, vanishing })
}

#[derive(Serialize)]
struct MeasureClass {
    zeta: i64,
    mass: i64,
    /// `mass + pi_mass = zeta`
    mass_matches: bool,
    delta: u32,
    certified_precision: i64,
    measure: ResidueMeasure,
}

impl ClassResult for MeasureClass {
    fn pass(&self) -> bool {
        self.mass_matches
    }
}

fn measure_class(g: &GSConfig) -> Result<MeasureClass, Error> {
    let mu = build_measure(&g.ctx, &g.b, &g.df, g.e, g.m)?;
    let z = nu_eta(&g.ctx, &g.b, &g.df, &BallCondition::All)?;
    if !z.is_integer() {
        return Err(Error::Internal(format!("zeta = {z} is not integral")));
    }
    let zeta: i64 = num_traits::ToPrimitive::to_i64(&z.to_integer()).ok_or_else(|| Error::Internal("overflow".into()))?;
    Ok(MeasureClass {
        zeta,
        mass: mu.total(),
        mass_matches: mu.total() + mu.pi_mass == zeta,
        delta: mu.delta(),
        certified_precision: mu.certified_precision(),
        measure: mu,
    })
}

#[derive(Serialize)]
struct UUnitClass {
    /// `ord = zeta e + ord(×∫ x dν)`
    valuation_consistent: bool,
    #[serde(flatten)]
    u: UEta,
}

impl ClassResult for UUnitClass {
    fn pass(&self) -> bool {
        self.valuation_consistent
    }
}

fn u_unit_class(g: &GSConfig) -> Result<UUnitClass, Error> {
    let u = u_eta(g)?;
    let ok = u.valuation == u.exact.zeta * g.e as i64 + u.integral_valuation;
    Ok(UUnitClass { valuation_consistent: ok, u })
}

impl ClassResult for VerificationReport {
    fn pass(&self) -> bool {
        self.pass
    }
}

fn verify_class(g: &GSConfig) -> Result<VerificationReport, Error> {
    verify_theorem(g, None)
}

impl ClassResult for ProbeReport {
    fn pass(&self) -> bool {
        self.valuation_matches
    }
}

#[derive(Serialize)]
struct Recognition {
    galois_reps: Vec<IdealRepr>,
    values: Vec<PadicNum>,
    bound: i64,
    /// coefficients, constant term first
    #[serde(with = "opt_rat_vec")]
    polynomial: Option<Vec<BigRational>>,
}

impl SummaryPass for Option<Recognition> {
    fn pass(&self) -> bool {
        true
    }
}

mod opt_rat_vec {
    use num_rational::BigRational;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(v: &Option<Vec<BigRational>>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.collect_seq(v.iter().map(|x| x.to_string())),
            None => s.serialize_none(),
        }
    }
}

fn probe(cfg: &RunConfig) -> Result<(String, bool), CliError> {
    per_class(cfg, probe_conjecture, |cfg, base, _: &[ClassEntry<ProbeReport>]| {
        if cfg.b != BSpec::AllClasses {
            return Ok(None);
        }
        let reps = base.galois_reps()?;
        let mut values = Vec::new();
        for b in &reps {
            values.push(u_eta(&base.with_b(b)?)?.value);
        }
        let polynomial = recognize(&values, RECOGNITION_BOUND);
        Ok(Some(Recognition { galois_reps: reps.iter().map(Ideal::to_repr).collect(), values, bound: RECOGNITION_BOUND, polynomial }))
    })
}
