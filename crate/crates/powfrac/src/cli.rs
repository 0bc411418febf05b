//! Command-line front end: one subcommand per mechanism, JSON/CSV output,
//! and a reproducible run manifest describing every artifact written.

use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::analyze::{
    assign_eta, cluster_limit_points, difference_structure, find_vector_collision, pure_period_mod,
    pv_verify, ultimate_period_scan, verify_contraction, LimitPointReport,
};
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::orbit::{
    default_precision_cap, iterate, s_sequence, sample_csv_line, smallness_check, OrbitConfig,
};
use crate::poly_algebra::{classify, AlgebraicNumber, Class, IntPolynomial};
use crate::salem::{build_context, density_scan, kronecker_search, near_integer_check};

#[derive(Parser)]
#[command(
    name = "powfrac",
    version,
    about = "Certified orbits of fractional parts of xi * alpha^n, with PV/Salem classification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Seed xi: field element "(e0,e1,...)/L", fraction "p/q", or decimal
    #[arg(long, default_value = "1")]
    xi: String,
    /// Integer multiplier L applied to xi
    #[arg(long = "L", default_value = "1")]
    l: String,
    /// Orbit horizon N
    #[arg(long = "N", default_value_t = 200)]
    n: usize,
    /// Certified bits of each fractional part
    #[arg(long, default_value_t = 64)]
    resolution: u32,
    /// Working-precision ceiling in bits
    #[arg(long)]
    precision_cap: Option<u32>,
    /// Discarded warmup prefix for analysis
    #[arg(long, default_value_t = 10)]
    warmup: usize,
    /// Output format
    #[arg(long, default_value = "json")]
    format: String,
    /// Directory for report artifacts and the run manifest
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the root alpha > 1 as PV / Salem / Neither
    Classify {
        poly: String,
        #[arg(long)]
        precision_cap: Option<u32>,
    },
    /// Iterate the orbit of L xi alpha^n with certified floors
    Orbit {
        poly: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Cluster the orbit's fractional parts and test the PV limit structure
    Limits {
        poly: String,
        #[command(flatten)]
        common: CommonOpts,
        /// Cluster radius
        #[arg(long, default_value = "0.0001")]
        epsilon: String,
    },
    /// Periodicity: the s_n scan and the trace sequence mod L
    Period {
        poly: String,
        #[command(flatten)]
        common: CommonOpts,
        /// Largest period tried by the s_n scan
        #[arg(long, default_value_t = 100)]
        max_t: usize,
    },
    /// Salem apparatus: angles, U/V/H, q, near-integer and density evidence
    Salem {
        poly: String,
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long, default_value_t = 50)]
        bins: usize,
    },
    /// Search n with the angle residuals near given targets
    Kronecker {
        poly: String,
        #[command(flatten)]
        common: CommonOpts,
        /// Comma-separated targets in [-1,1], one per angle
        #[arg(long)]
        targets: String,
        #[arg(long, default_value_t = 0.15)]
        tol: f64,
        #[arg(long, default_value_t = 1_000_000)]
        n_max: usize,
    },
    /// Full pipeline with a finite/infinite limit-set verdict
    TheoremCheck {
        poly: String,
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long, default_value = "0.0001")]
        epsilon: String,
    },
}

fn parse_rational_arg(s: &str, what: &str) -> Result<BigRational> {
    let t = s.trim();
    let parse_int = |x: &str| {
        x.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Input(format!("bad {what}: {s}")))
    };
    if let Some((a, b)) = t.split_once('/') {
        return Ok(BigRational::new(parse_int(a)?, parse_int(b)?));
    }
    if let Some((i, f)) = t.split_once('.') {
        if !f.is_empty() && f.bytes().all(|c| c.is_ascii_digit()) {
            let neg = i.trim_start().starts_with('-');
            let int = if i.trim() == "-" || i.trim().is_empty() {
                BigInt::zero()
            } else {
                parse_int(i)?
            };
            let num = parse_int(f)?;
            let den = BigInt::from(10u32).pow(f.len() as u32);
            let mag = BigRational::from_integer(int.abs()) + BigRational::new(num, den);
            return Ok(if neg { -mag } else { mag });
        }
    }
    Ok(BigRational::from_integer(parse_int(t)?))
}

/// Fixed-point decimal rendering of an exact rational, tagged with its
/// certified bit count by the caller.
fn rational_decimal(q: &BigRational, bits: u32) -> String {
    let digits = (bits as f64 * std::f64::consts::LOG10_2).ceil() as u32 + 1;
    let neg = q.is_negative();
    let a = q.abs();
    let int = a.floor().to_integer();
    let frac = &a - a.floor();
    let scaled = (frac * BigRational::from_integer(BigInt::from(10u32).pow(digits)))
        .floor()
        .to_integer();
    format!(
        "{}{}.{:0>width$}",
        if neg { "-" } else { "" },
        int,
        scaled,
        width = digits as usize
    )
}

fn dyadic_decimal(d: &Dyadic, bits: u32) -> String {
    rational_decimal(&d.to_rational(), bits)
}

#[derive(Serialize)]
struct TaggedValue {
    value: String,
    resolution_bits: u32,
    exact: bool,
}

fn exact_value(q: &BigRational) -> TaggedValue {
    TaggedValue {
        value: q.to_string(),
        resolution_bits: 0,
        exact: true,
    }
}

fn approx_value(s: String, bits: u32) -> TaggedValue {
    TaggedValue {
        value: s,
        resolution_bits: bits,
        exact: false,
    }
}

#[derive(Serialize)]
struct ClassifyReport {
    poly: String,
    class: Class,
    degree: usize,
    length: String,
    irreducibility: crate::poly_algebra::Irreducibility,
    roots_inside: usize,
    roots_on: usize,
    roots_outside: usize,
    alpha: TaggedValue,
}

fn classify_report(poly: &str, precision: u32) -> Result<ClassifyReport> {
    let p = IntPolynomial::parse(poly)?;
    let a = classify(&p, precision)?;
    let mut r = a.alpha_refiner();
    r.refine_to(96);
    Ok(ClassifyReport {
        poly: p.to_string(),
        class: a.classification(),
        degree: a.degree(),
        length: p.length().to_string(),
        irreducibility: a.irreducibility(),
        roots_inside: a.counts().inside,
        roots_on: a.counts().on,
        roots_outside: a.counts().outside,
        alpha: approx_value(dyadic_decimal(r.lo(), 64), 64),
    })
}

struct Setup {
    base: Arc<AlgebraicNumber>,
    xi: FieldElement,
    l: BigInt,
    cfg: OrbitConfig,
    common: CommonOpts,
}

fn setup(poly: &str, common: &CommonOpts) -> Result<Setup> {
    let p = IntPolynomial::parse(poly)?;
    let precision = common.precision_cap.unwrap_or_else(default_precision_cap);
    let base = Arc::new(classify(&p, 256.min(precision))?);
    let xi = FieldElement::parse(base.clone(), &common.xi)?;
    let l = common
        .l
        .trim()
        .parse::<BigInt>()
        .map_err(|_| Error::Input(format!("bad L: {}", common.l)))?;
    let mut cfg = OrbitConfig::new(common.n, common.resolution).with_l(l.clone());
    cfg.precision_cap = precision;
    Ok(Setup {
        base,
        xi,
        l,
        cfg,
        common: common.clone(),
    })
}

#[derive(Serialize)]
struct ClusterJson {
    center: TaggedValue,
    population: usize,
    max_dev: TaggedValue,
}

#[derive(Serialize)]
struct LimitsJson {
    clusters: Vec<ClusterJson>,
    epsilon: TaggedValue,
    warmup: usize,
    horizon: usize,
    pv_l: Option<String>,
    pv_verified: Option<bool>,
}

fn limits_json(report: &LimitPointReport, pv: Option<(&BigInt, bool)>) -> LimitsJson {
    LimitsJson {
        clusters: report
            .clusters
            .iter()
            .map(|c| ClusterJson {
                center: exact_value(&c.center),
                population: c.population,
                max_dev: exact_value(&c.max_dev),
            })
            .collect(),
        epsilon: exact_value(&report.epsilon),
        warmup: report.warmup,
        horizon: report.horizon,
        pv_l: pv.map(|(l, _)| l.to_string()),
        pv_verified: pv.map(|(_, v)| v),
    }
}

/// A written artifact plus everything needed to reproduce the run.
#[derive(Serialize)]
struct RunManifest {
    tool: String,
    version: String,
    command: String,
    poly: String,
    xi: String,
    l: String,
    horizon: usize,
    resolution: u32,
    precision_cap: u32,
    warmup: usize,
    outputs: Vec<ManifestEntry>,
}

#[derive(Serialize)]
struct ManifestEntry {
    name: String,
    sha256: String,
}

struct Emitter {
    out_dir: Option<PathBuf>,
    entries: Vec<ManifestEntry>,
    stdout: Vec<String>,
}

impl Emitter {
    fn new(out: &Option<PathBuf>) -> Result<Self> {
        if let Some(dir) = out {
            std::fs::create_dir_all(dir)
                .map_err(|e| Error::Input(format!("cannot create output dir: {e}")))?;
        }
        Ok(Emitter {
            out_dir: out.clone(),
            entries: vec![],
            stdout: vec![],
        })
    }

    fn emit(&mut self, name: &str, content: &str) -> Result<()> {
        if let Some(dir) = &self.out_dir {
            let path = dir.join(name);
            std::fs::write(&path, content)
                .map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display())))?;
            let digest = Sha256::digest(content.as_bytes());
            self.entries.push(ManifestEntry {
                name: name.to_string(),
                sha256: digest.iter().map(|b| format!("{b:02x}")).collect(),
            });
        } else {
            self.stdout.push(content.to_string());
        }
        Ok(())
    }

    fn finish(mut self, manifest: Option<RunManifest>) -> Result<()> {
        if let (Some(dir), Some(mut m)) = (self.out_dir.clone(), manifest) {
            m.outputs = std::mem::take(&mut self.entries);
            let text = serde_json::to_string_pretty(&m)
                .map_err(|e| Error::Input(format!("manifest serialization: {e}")))?;
            let path = dir.join("manifest.json");
            std::fs::write(&path, text)
                .map_err(|e| Error::Input(format!("cannot write manifest: {e}")))?;
        }
        for s in &self.stdout {
            println!("{s}");
        }
        Ok(())
    }
}

fn manifest_for(command: &str, s: &Setup) -> RunManifest {
    RunManifest {
        tool: "powfrac".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: command.into(),
        poly: s.base.minpoly().to_string(),
        xi: s.xi.to_string(),
        l: s.l.to_string(),
        horizon: s.common.n,
        resolution: s.common.resolution,
        precision_cap: s.cfg.precision_cap,
        warmup: s.common.warmup,
        outputs: vec![],
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    serde_json::to_string_pretty(v).map_err(|e| Error::Input(format!("serialization: {e}")))
}

#[derive(Serialize)]
struct OrbitJson {
    poly: String,
    xi: String,
    l: String,
    resolution: u32,
    samples: Vec<SampleJson>,
    smallness_holds: bool,
    smallness_first_violation: Option<usize>,
    sup_norm: TaggedValue,
}

#[derive(Serialize)]
struct SampleJson {
    n: usize,
    x: String,
    y: TaggedValue,
    bits_used: u32,
    exact: bool,
}

fn run_orbit(poly: &str, common: &CommonOpts) -> Result<()> {
    let s = setup(poly, common)?;
    let samples = iterate(&s.xi, &s.cfg)?;
    let small = smallness_check(&samples, s.base.minpoly());
    let mut em = Emitter::new(&common.out)?;
    if common.format == "csv" {
        let mut csv = String::from("n,x_n,y_n,bits_used,exact\n");
        for smp in &samples {
            csv.push_str(&sample_csv_line(smp));
            csv.push('\n');
        }
        em.emit("orbit.csv", &csv)?;
    } else {
        let json = OrbitJson {
            poly: s.base.minpoly().to_string(),
            xi: s.xi.to_string(),
            l: s.l.to_string(),
            resolution: common.resolution,
            samples: samples
                .iter()
                .map(|smp| SampleJson {
                    n: smp.n,
                    x: smp.x.to_string(),
                    y: if smp.exact {
                        exact_value(&smp.y.to_rational())
                    } else {
                        approx_value(crate::orbit::y_decimal(&smp.y), common.resolution)
                    },
                    bits_used: smp.bits_used,
                    exact: smp.exact,
                })
                .collect(),
            smallness_holds: small.holds,
            smallness_first_violation: small.first_violation,
            sup_norm: exact_value(&small.sup_norm),
        };
        em.emit("orbit.json", &to_json(&json)?)?;
    }
    em.finish(Some(manifest_for("orbit", &s)))
}

fn run_limits(poly: &str, common: &CommonOpts, epsilon: &str) -> Result<()> {
    let s = setup(poly, common)?;
    let eps = parse_rational_arg(epsilon, "epsilon")?;
    let samples = iterate(&s.xi, &s.cfg)?;
    let report = cluster_limit_points(&samples, &eps, common.warmup);
    let pv = if s.base.classification() == Class::Pv {
        let (_, l) = s.xi.coords();
        let l_all = l * &s.l;
        let tol = &eps * BigRational::from_integer(2.into());
        let ok = pv_verify(&report, l_all.magnitude().to_u64().unwrap_or(1), &tol);
        Some((l_all, ok))
    } else {
        None
    };
    let json = limits_json(&report, pv.as_ref().map(|(l, v)| (l, *v)));
    let mut em = Emitter::new(&common.out)?;
    em.emit("limits.json", &to_json(&json)?)?;
    em.finish(Some(manifest_for("limits", &s)))
}

#[derive(Serialize)]
struct PeriodJson {
    s_period: Option<(usize, usize)>,
    s_scan_max_t: usize,
    s_len: usize,
    trace_period: Option<TracePeriodJson>,
}

#[derive(Serialize)]
struct TracePeriodJson {
    pure: bool,
    period: usize,
    preperiod: usize,
    modulus: String,
}

fn run_period(poly: &str, common: &CommonOpts, max_t: usize) -> Result<()> {
    let s = setup(poly, common)?;
    let samples = iterate(&s.xi, &s.cfg)?;
    let seq = s_sequence(&samples, s.base.minpoly())?;
    let s_period = ultimate_period_scan(&seq, max_t);
    let trace_period = if s.base.minpoly().is_monic() {
        let d = s.base.degree();
        let (_, l) = s.xi.coords();
        let modulus = l * &s.l;
        let a_coeffs = s.base.minpoly().coeffs()[..d].to_vec();
        let init = s.xi.trace_sequence(d)?;
        let rep = pure_period_mod(&a_coeffs, &init, &modulus, 10_000_000)?;
        Some(TracePeriodJson {
            pure: rep.pure,
            period: rep.period,
            preperiod: rep.preperiod,
            modulus: rep.modulus.to_string(),
        })
    } else {
        None
    };
    let json = PeriodJson {
        s_period,
        s_scan_max_t: max_t,
        s_len: seq.len(),
        trace_period,
    };
    let mut em = Emitter::new(&common.out)?;
    em.emit("period.json", &to_json(&json)?)?;
    em.finish(Some(manifest_for("period", &s)))
}

#[derive(Serialize)]
struct SalemJson {
    phis: Vec<TaggedValue>,
    u_vals: Vec<TaggedValue>,
    v_vals: Vec<TaggedValue>,
    h: TaggedValue,
    q: usize,
    ell_residue: String,
    near_integer_tail_start: usize,
    near_integer_tail_max_dist: f64,
    near_integer_residues_ok: bool,
    density_bins: usize,
    density_interval: [TaggedValue; 2],
    density_run_len_bins: usize,
    density_max_gap: TaggedValue,
}

fn run_salem(poly: &str, common: &CommonOpts, bins: usize) -> Result<()> {
    let s = setup(poly, common)?;
    let prec = common.resolution * 2;
    let ctx = build_context(&s.xi, prec.max(128))?;
    let samples = iterate(&s.xi, &s.cfg)?;
    let near = near_integer_check(&ctx, &samples);
    let dens = density_scan(ctx.q, &samples, bins);
    let tag = |d: &Dyadic| approx_value(dyadic_decimal(d, ctx.precision), ctx.precision);
    let json = SalemJson {
        phis: ctx.phis.iter().map(&tag).collect(),
        u_vals: ctx.u_vals.iter().map(&tag).collect(),
        v_vals: ctx.v_vals.iter().map(&tag).collect(),
        h: tag(&ctx.h),
        q: ctx.q,
        ell_residue: ctx.ell_residue.to_string(),
        near_integer_tail_start: near.tail_start,
        near_integer_tail_max_dist: near.tail_max_dist,
        near_integer_residues_ok: near.residues_ok,
        density_bins: dens.bins,
        density_interval: [exact_value(&dens.interval.0), exact_value(&dens.interval.1)],
        density_run_len_bins: dens.run_len_bins,
        density_max_gap: exact_value(&dens.max_gap),
    };
    let mut em = Emitter::new(&common.out)?;
    em.emit("salem.json", &to_json(&json)?)?;
    if common.format == "csv" {
        let mut csv = String::from("bin_lo,bin_hi,count\n");
        for (i, c) in dens.histogram.iter().enumerate() {
            csv.push_str(&format!(
                "{},{},{}\n",
                rational_decimal(&BigRational::new(i.into(), bins.into()), 32),
                rational_decimal(&BigRational::new((i + 1).into(), bins.into()), 32),
                c
            ));
        }
        em.emit("histogram.csv", &csv)?;
    }
    em.finish(Some(manifest_for("salem", &s)))
}

#[derive(Serialize)]
struct KroneckerJson {
    witness: Option<usize>,
    n_max: usize,
    tol: f64,
    targets: Vec<f64>,
    angles: usize,
}

fn run_kronecker(
    poly: &str,
    common: &CommonOpts,
    targets: &str,
    tol: f64,
    n_max: usize,
) -> Result<()> {
    let s = setup(poly, common)?;
    let ctx = build_context(&s.xi, (common.resolution * 2).max(128))?;
    let t: Vec<f64> = targets
        .split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| Error::Input(format!("bad target: {x}")))
        })
        .collect::<Result<_>>()?;
    if t.len() != ctx.phis.len() {
        return Err(Error::Input(format!(
            "need {} targets (one per angle), got {}",
            ctx.phis.len(),
            t.len()
        )));
    }
    let witness = kronecker_search(&ctx, &t, tol, n_max);
    let json = KroneckerJson {
        witness,
        n_max,
        tol,
        targets: t,
        angles: ctx.phis.len(),
    };
    let mut em = Emitter::new(&common.out)?;
    em.emit("kronecker.json", &to_json(&json)?)?;
    em.finish(Some(manifest_for("kronecker", &s)))
}

#[derive(Serialize)]
struct TheoremJson {
    class: Class,
    verdict: String,
    clusters_at_n: usize,
    clusters_at_2n: usize,
    limits: LimitsJson,
    collision: Option<(usize, usize)>,
    contraction_max_norm: Option<TaggedValue>,
    density_interval: Option<[TaggedValue; 2]>,
    density_run_len_bins: Option<usize>,
}

fn run_theorem_check(poly: &str, common: &CommonOpts, epsilon: &str) -> Result<()> {
    let s = setup(poly, common)?;
    let eps = parse_rational_arg(epsilon, "epsilon")?;
    let samples = iterate(&s.xi, &s.cfg)?;
    let mut cfg2 = s.cfg.clone();
    cfg2.horizon = s.cfg.horizon * 2;
    let samples2 = iterate(&s.xi, &cfg2)?;
    let report = cluster_limit_points(&samples, &eps, common.warmup);
    let report2 = cluster_limit_points(&samples2, &eps, common.warmup);
    let class = s.base.classification();
    let mut collision = None;
    let mut contraction = None;
    let mut density_interval = None;
    let mut density_run = None;
    let verdict;
    let mut pv = None;
    match class {
        Class::Pv => {
            let (_, lden) = s.xi.coords();
            let l_all = lden * &s.l;
            let tol = &eps * BigRational::from_integer(2.into());
            let ok = pv_verify(&report2, l_all.magnitude().to_u64().unwrap_or(1), &tol);
            verdict = if ok && report2.clusters.len() <= report.clusters.len() {
                "finite-limit-set-consistent"
            } else {
                "infinite-limit-set-evidence"
            };
            // the collision/contraction chain as supporting evidence
            if let Ok(etas) = assign_eta(&samples, &report) {
                if let Ok((m, r)) = find_vector_collision(&etas, s.base.degree()) {
                    collision = Some((m, r));
                    let warm = common.warmup;
                    if let Ok(rep) = verify_contraction(
                        &s.xi,
                        &s.l,
                        m + warm,
                        r + warm,
                        &eps,
                        warm,
                        common.n,
                        common.resolution,
                    ) {
                        contraction =
                            Some(exact_value(&rep.max_norm));
                    }
                }
            }
            let _ = difference_structure(
                &report,
                s.base.minpoly().leading(),
                &BigRational::new(
                    BigInt::from(10),
                    BigInt::one() << common.resolution,
                ),
                64,
            );
            pv = Some((l_all, ok));
        }
        Class::Salem => {
            let ctx = build_context(&s.xi, (common.resolution * 2).max(128))?;
            let dens = density_scan(ctx.q, &samples2, 50);
            density_interval = Some([
                exact_value(&dens.interval.0),
                exact_value(&dens.interval.1),
            ]);
            density_run = Some(dens.run_len_bins);
            verdict = "infinite-limit-set-evidence";
        }
        Class::Neither => {
            verdict = if report2.clusters.len() > report.clusters.len() {
                "infinite-limit-set-evidence"
            } else {
                "inconclusive"
            };
        }
    }
    let json = TheoremJson {
        class,
        verdict: verdict.to_string(),
        clusters_at_n: report.clusters.len(),
        clusters_at_2n: report2.clusters.len(),
        limits: limits_json(&report2, pv.as_ref().map(|(l, v)| (l, *v))),
        collision,
        contraction_max_norm: contraction,
        density_interval,
        density_run_len_bins: density_run,
    };
    let mut em = Emitter::new(&common.out)?;
    em.emit("theorem-check.json", &to_json(&json)?)?;
    em.finish(Some(manifest_for("theorem-check", &s)))
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Classify {
            poly,
            precision_cap,
        } => {
            let report =
                classify_report(&poly, precision_cap.unwrap_or(512))?;
            println!("{}", to_json(&report)?);
            Ok(())
        }
        Command::Orbit { poly, common } => run_orbit(&poly, &common),
        Command::Limits {
            poly,
            common,
            epsilon,
        } => run_limits(&poly, &common, &epsilon),
        Command::Period {
            poly,
            common,
            max_t,
        } => run_period(&poly, &common, max_t),
        Command::Salem { poly, common, bins } => run_salem(&poly, &common, bins),
        Command::Kronecker {
            poly,
            common,
            targets,
            tol,
            n_max,
        } => run_kronecker(&poly, &common, &targets, tol, n_max),
        Command::TheoremCheck {
            poly,
            common,
            epsilon,
        } => run_theorem_check(&poly, &common, &epsilon),
    }
}

/// Entry point: returns the process exit code (0 / 2 / 3 / 4).
pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
