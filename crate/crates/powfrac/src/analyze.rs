//! Limit-point clustering of orbit samples, verification of the PV limit
//! structure, the collision/contraction machinery for difference orbits,
//! and periodicity scans for integer sequences mod L.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::orbit::{iterate, OrbitConfig, OrbitSample};

#[derive(Debug, Clone)]
pub struct Cluster {
    pub center: BigRational,
    pub population: usize,
    pub max_dev: BigRational,
}

#[derive(Debug, Clone)]
pub struct LimitPointReport {
    pub clusters: Vec<Cluster>,
    pub epsilon: BigRational,
    pub warmup: usize,
    pub horizon: usize,
}

impl LimitPointReport {
    pub fn centers(&self) -> Vec<BigRational> {
        self.clusters.iter().map(|c| c.center.clone()).collect()
    }
}

fn make_cluster(vals: &[BigRational]) -> Cluster {
    let lo = vals.first().unwrap();
    let hi = vals.last().unwrap();
    let center = (lo + hi) / BigRational::from_integer(2.into());
    let max_dev = vals
        .iter()
        .map(|v| (v - &center).abs())
        .max()
        .unwrap_or_else(BigRational::zero);
    Cluster {
        center,
        population: vals.len(),
        max_dev,
    }
}

/// Group retained fractional parts into clusters of radius epsilon on the
/// circle R/Z, reported on [0,1] (a cluster straddling the wrap appears as
/// one cluster near 0 and one near 1).
pub fn cluster_limit_points(
    samples: &[OrbitSample],
    epsilon: &BigRational,
    warmup: usize,
) -> LimitPointReport {
    let horizon = samples.iter().map(|s| s.n).max().unwrap_or(0);
    let mut vals: Vec<BigRational> = samples
        .iter()
        .filter(|s| s.n >= warmup)
        .map(|s| s.y.to_rational())
        .collect();
    vals.sort();
    // greedy sweep: a cluster spans at most 2 epsilon, so every member is
    // within epsilon of the midpoint center
    let two_eps = epsilon * BigRational::from_integer(2.into());
    let mut groups: Vec<Vec<BigRational>> = vec![];
    for v in vals {
        match groups.last_mut() {
            Some(g) if (&v - g.first().unwrap()) <= two_eps => g.push(v),
            _ => groups.push(vec![v]),
        }
    }
    // wrap: the gap between the last group's top and the first group's
    // bottom, measured through 1 ~ 0
    let mut clusters: Vec<Cluster> = vec![];
    if groups.len() >= 2 {
        let wrap_gap = (BigRational::one() - groups.last().unwrap().last().unwrap())
            + groups.first().unwrap().first().unwrap();
        if wrap_gap <= two_eps {
            // same cluster on the circle; report each side separately
            let first = groups.remove(0);
            let last = groups.pop().unwrap();
            clusters.push(make_cluster(&first));
            for g in &groups {
                clusters.push(make_cluster(g));
            }
            clusters.push(make_cluster(&last));
            return LimitPointReport {
                clusters,
                epsilon: epsilon.clone(),
                warmup,
                horizon,
            };
        }
    }
    for g in &groups {
        clusters.push(make_cluster(g));
    }
    LimitPointReport {
        clusters,
        epsilon: epsilon.clone(),
        warmup,
        horizon,
    }
}

/// Distance on the circle R/Z.
fn circle_dist(a: &BigRational, b: &BigRational) -> BigRational {
    let mut d = (a - b).abs();
    let one = BigRational::one();
    d -= d.floor();
    let alt = &one - &d;
    if alt < d {
        alt
    } else {
        d
    }
}

/// Is every cluster center within tol of some k/L, k = 0..=L?
pub fn pv_verify(report: &LimitPointReport, l: u64, tol: &BigRational) -> bool {
    report.clusters.iter().all(|c| {
        (0..=l).any(|k| {
            let target = BigRational::new(BigInt::from(k), BigInt::from(l));
            (&c.center - target).abs() <= *tol
        })
    })
}

/// Check that the cluster set of the L-scaled orbit embeds into
/// {0} u {frac(L * center)} u {1} from the base report.
pub fn scale_and_project(
    report: &LimitPointReport,
    scaled_report: &LimitPointReport,
    l: &BigInt,
    tol: &BigRational,
) -> Result<Vec<BigRational>> {
    let mut allowed: Vec<BigRational> = vec![BigRational::zero(), BigRational::one()];
    for c in &report.clusters {
        let v = &c.center * BigRational::from_integer(l.clone());
        let frac = &v - v.floor();
        allowed.push(frac);
    }
    for c in &scaled_report.clusters {
        if !allowed.iter().any(|a| circle_dist(a, &c.center) <= *tol) {
            return Err(Error::ToleranceViolation(c.center.to_string()));
        }
    }
    Ok(allowed)
}

/// Nearest-fraction detection by continued-fraction convergents.
pub fn detect_rational(
    x: &BigRational,
    rat_tol: &BigRational,
    den_max: u64,
) -> Option<BigRational> {
    let den_cap = BigInt::from(den_max);
    // convergents of x
    let mut a = x.clone();
    let (mut h0, mut h1) = (BigInt::one(), a.floor().to_integer());
    let (mut k0, mut k1) = (BigInt::zero(), BigInt::one());
    for _ in 0..64 {
        if k1 <= den_cap {
            let cand = BigRational::new(h1.clone(), k1.clone());
            if (x - &cand).abs() <= *rat_tol {
                return Some(cand);
            }
        } else {
            break;
        }
        let frac = &a - a.floor();
        if frac.is_zero() {
            break;
        }
        a = frac.recip();
        let ai = a.floor().to_integer();
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
    }
    None
}

#[derive(Debug, Clone)]
pub struct DifferenceStructure {
    /// Differences eta - eta' over pairs of centers (with 0 and 1 adjoined).
    pub d_set: Vec<BigRational>,
    /// lcm of the denominators of the rational members of S u D(S).
    pub l_common: BigInt,
    /// min ||a_d (eta - eta')|| over pairs with irrational difference.
    pub tau: Option<BigRational>,
}

/// D(S), the common denominator L, and the separation quantity tau.
pub fn difference_structure(
    report: &LimitPointReport,
    a_d: &BigInt,
    rat_tol: &BigRational,
    den_max: u64,
) -> DifferenceStructure {
    let mut points: Vec<BigRational> = vec![BigRational::zero(), BigRational::one()];
    for c in &report.clusters {
        if !points.contains(&c.center) {
            points.push(c.center.clone());
        }
    }
    points.sort();
    let mut l_common = BigInt::one();
    let mut note_rational = |v: &BigRational| {
        if let Some(q) = detect_rational(v, rat_tol, den_max) {
            l_common = l_common.lcm(q.denom());
            true
        } else {
            false
        }
    };
    for p in &points {
        note_rational(p);
    }
    let mut d_set = vec![];
    let mut tau: Option<BigRational> = None;
    let one = BigRational::one();
    for i in 0..points.len() {
        for j in 0..i {
            let (eta, eta_p) = (&points[i], &points[j]);
            if *eta == one && eta_p.is_zero() {
                continue; // the exceptional pair (1, 0)
            }
            let diff = eta - eta_p;
            if !d_set.contains(&diff) {
                d_set.push(diff.clone());
            }
            let rational = note_rational(&diff);
            if !rational {
                let scaled = &diff * BigRational::from_integer(a_d.clone());
                let frac = &scaled - scaled.floor();
                let norm = if &one - &frac < frac {
                    &one - &frac
                } else {
                    frac
                };
                if tau.as_ref().map(|t| norm < *t).unwrap_or(true) {
                    tau = Some(norm);
                }
            }
        }
    }
    d_set.sort();
    DifferenceStructure {
        d_set,
        l_common,
        tau,
    }
}

/// Assign each retained sample its nearest cluster center (the eta_n map).
pub fn assign_eta(
    samples: &[OrbitSample],
    report: &LimitPointReport,
) -> Result<Vec<BigRational>> {
    let mut out = Vec::new();
    for s in samples.iter().filter(|s| s.n >= report.warmup) {
        let y = s.y.to_rational();
        let best = report
            .clusters
            .iter()
            .min_by(|a, b| circle_dist(&y, &a.center).cmp(&circle_dist(&y, &b.center)))
            .ok_or_else(|| Error::Input("no clusters".into()))?;
        if circle_dist(&y, &best.center) > report.epsilon {
            return Err(Error::EtaAssignment { n: s.n as u64 });
        }
        out.push(best.center.clone());
    }
    Ok(out)
}

/// First repeated (d+1)-window Z_m = Z_r in the eta sequence; indices are
/// 1-based positions in the sequence.
pub fn find_vector_collision(etas: &[BigRational], d: usize) -> Result<(usize, usize)> {
    let w = d + 1;
    let g = {
        let mut distinct: Vec<&BigRational> = vec![];
        for e in etas {
            if !distinct.contains(&e) {
                distinct.push(e);
            }
        }
        distinct.len() as u64
    };
    let bound = (g + 2).saturating_pow(w as u32);
    if etas.len() < w {
        return Err(Error::NoCollision { bound });
    }
    let mut seen: HashMap<&[BigRational], usize> = HashMap::new();
    for h in 0..=(etas.len() - w) {
        let window = &etas[h..h + w];
        if let Some(&r) = seen.get(window) {
            return Ok((h + 1, r + 1));
        }
        seen.insert(window, h);
    }
    Err(Error::NoCollision { bound })
}

#[derive(Debug, Clone)]
pub struct ContractionReport {
    pub holds: bool,
    /// sup ||xi' alpha^n|| over n in [warmup, horizon]
    pub max_norm: BigRational,
    /// sup over the whole horizon, for reference
    pub max_norm_all: BigRational,
    /// the Lemma-1 gate 2 epsilon < 1/L(alpha)
    pub gate_ok: bool,
    pub m: usize,
    pub r: usize,
}

/// Iterate the difference seed xi' = L xi (alpha^m - alpha^r) and compare
/// sup ||xi' alpha^n|| (beyond warmup) against 2 epsilon.
pub fn verify_contraction(
    xi: &FieldElement,
    l: &BigInt,
    m: usize,
    r: usize,
    epsilon: &BigRational,
    warmup: usize,
    horizon: usize,
    resolution: u32,
) -> Result<ContractionReport> {
    if m <= r || r < 1 {
        return Err(Error::Input("need m > r >= 1".into()));
    }
    let base = xi.base().clone();
    let am = FieldElement::alpha_power(base.clone(), m);
    let ar = FieldElement::alpha_power(base, r);
    let xi_prime = xi.scale_int(l).mul(&am.sub(&ar)?)?;
    let cfg = OrbitConfig::new(horizon, resolution);
    let samples = iterate(&xi_prime, &cfg)?;
    let mut sup_tail = BigRational::zero();
    let mut sup_all = BigRational::zero();
    for s in &samples {
        let norm = s.y.norm();
        if norm > sup_all {
            sup_all = norm.clone();
        }
        if s.n >= warmup && norm > sup_tail {
            sup_tail = norm;
        }
    }
    let two_eps = epsilon * BigRational::from_integer(2.into());
    let length = BigRational::new(
        BigInt::one(),
        BigInt::from(xi.base().minpoly().length()),
    );
    Ok(ContractionReport {
        holds: sup_tail < two_eps,
        max_norm: sup_tail,
        max_norm_all: sup_all,
        gate_ok: two_eps < length,
        m,
        r,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodReport {
    pub pure: bool,
    pub period: usize,
    pub preperiod: usize,
    pub modulus: BigInt,
    /// set when gcd(A_0, L) = 1 yet the scan found a nonzero preperiod
    /// (would contradict pure periodicity of such recurrences)
    pub purity_violated: bool,
}

/// Period structure mod L of the recurrence
/// b_{k+d} + A_{d-1} b_{k+d-1} + ... + A_0 b_k = 0, coefficients given
/// ascending (A_0 first), detected by first repeat of the d-state vector.
pub fn pure_period_mod(
    a: &[BigInt],
    init: &[BigInt],
    l: &BigInt,
    scan: usize,
) -> Result<PeriodReport> {
    if a.is_empty() || a[0].is_zero() {
        return Err(Error::BadInput("A_0 must be nonzero".into()));
    }
    if init.len() != a.len() {
        return Err(Error::BadInput(format!(
            "need exactly {} initial values, got {}",
            a.len(),
            init.len()
        )));
    }
    if !l.is_positive() {
        return Err(Error::BadInput("modulus must be positive".into()));
    }
    let d = a.len();
    let md = |x: &BigInt| -> BigInt { x.mod_floor(l) };
    let mut state: Vec<BigInt> = init.iter().map(|x| md(x)).collect();
    let mut seen: HashMap<Vec<BigInt>, usize> = HashMap::new();
    let (preperiod, period) = loop {
        let step = seen.len();
        if step > scan {
            return Err(Error::BadInput(
                "scan horizon exhausted before a state repeat".into(),
            ));
        }
        if let Some(&first) = seen.get(&state) {
            break (first, step - first);
        }
        seen.insert(state.clone(), step);
        let mut next = BigInt::zero();
        for (ai, bi) in a.iter().zip(state.iter()) {
            next -= ai * bi;
        }
        state.rotate_left(1);
        state[d - 1] = md(&next);
    };
    let pure = preperiod == 0;
    let coprime = a[0].gcd(l).is_one();
    Ok(PeriodReport {
        pure,
        period,
        preperiod,
        modulus: l.clone(),
        purity_violated: coprime && !pure,
    })
}

/// Smallest (t, n0) with seq[n-1+t] = seq[n-1] for all n >= n0 in the
/// scanned window (1-based n0), or None. Desk evidence only.
pub fn ultimate_period_scan(seq: &[BigInt], max_t: usize) -> Option<(usize, usize)> {
    let len = seq.len();
    for t in 1..=max_t.min(len.saturating_sub(1)) {
        let mut last_violation = 0usize; // 1-based index of last mismatch
        for n in 1..=(len - t) {
            if seq[n - 1 + t] != seq[n - 1] {
                last_violation = n;
            }
        }
        let n0 = last_violation + 1;
        // evidence gate: the verified tail must cover at least one full
        // period and start in the first half of the window, otherwise a
        // chance match of the last few entries would count as a period
        let tail = (len - t).saturating_sub(n0 - 1);
        if tail >= t && n0 <= len.div_ceil(2) {
            return Some((t, n0));
        }
    }
    None
}
