//! Certified orbit iteration: x_n = floor(L xi alpha^n) and
//! y_n = {L xi alpha^n} with proven floors, the integer combination s_n,
//! and the smallness evidence behind the PV-or-Salem dichotomy.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::dyadic::{Dyadic, Round};
use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::poly_algebra::IntPolynomial;

/// Fractional part as reported: exact rational, or a fixed-point value
/// scaled/2^res certified bit-for-bit at the resolution grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum YVal {
    Exact(BigRational),
    Fixed { scaled: BigInt, res: u32 },
}

impl YVal {
    pub fn to_rational(&self) -> BigRational {
        match self {
            YVal::Exact(q) => q.clone(),
            YVal::Fixed { scaled, res } => {
                BigRational::new(scaled.clone(), BigInt::one() << *res)
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.to_rational().to_f64().unwrap_or(f64::NAN)
    }

    /// min(y, 1 - y); for Fixed values this is exact at the grid.
    pub fn norm(&self) -> BigRational {
        let y = self.to_rational();
        let one_minus = BigRational::one() - &y;
        if y <= one_minus {
            y
        } else {
            one_minus
        }
    }
}

#[derive(Debug, Clone)]
pub struct OrbitSample {
    pub n: usize,
    pub x: BigInt,
    pub y: YVal,
    pub bits_used: u32,
    pub exact: bool,
}

#[derive(Debug, Clone)]
pub struct OrbitConfig {
    /// Horizon: samples are emitted for n = 1..=horizon.
    pub horizon: usize,
    /// Bits of y_n that are certified (>= 16).
    pub resolution: u32,
    pub precision_cap: u32,
    /// The positive integer multiplier L applied to xi.
    pub l_scale: BigInt,
    /// Run the adaptive interval path even when an exact path exists.
    pub force_adaptive: bool,
}

impl OrbitConfig {
    pub fn new(horizon: usize, resolution: u32) -> Self {
        OrbitConfig {
            horizon,
            resolution,
            precision_cap: default_precision_cap(),
            l_scale: BigInt::one(),
            force_adaptive: false,
        }
    }

    pub fn with_l(mut self, l: BigInt) -> Self {
        self.l_scale = l;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.resolution < 16 {
            return Err(Error::Input("resolution must be at least 16 bits".into()));
        }
        if self.horizon < 1 {
            return Err(Error::Input("horizon must be at least 1".into()));
        }
        if !self.l_scale.is_positive() {
            return Err(Error::Input("L must be a positive integer".into()));
        }
        Ok(())
    }
}

pub fn default_precision_cap() -> u32 {
    std::env::var("POWFRAC_PRECISION_CAP")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(1 << 22)
}

fn floor_frac(v: &BigRational) -> (BigInt, BigRational) {
    let x = v.floor().to_integer();
    let y = v - BigRational::from_integer(x.clone());
    (x, y)
}

/// Split a certified grid value t = floor(v * 2^res) into the integer part
/// floor(v) and the scaled fractional part floor({v} * 2^res).
fn split_grid(t: &BigInt, res: u32) -> (BigInt, BigInt) {
    let shift = t >> res;
    let x = if t.is_negative() && &(&shift << res) != t {
        // BigInt >> truncates toward zero for some impls; enforce floor
        let mut s = shift;
        if &(&s << res) > t {
            s -= 1;
        }
        s
    } else {
        shift
    };
    let frac = t - (&x << res);
    (x, frac)
}

/// Iterate the orbit of L * xi * alpha^n for n = 1..=horizon with certified
/// floors at the 2^-resolution grid.
pub fn iterate(xi: &FieldElement, cfg: &OrbitConfig) -> Result<Vec<OrbitSample>> {
    cfg.validate()?;
    let base = xi.base().clone();
    if xi.is_zero() {
        return Err(Error::Input("xi must be positive".into()));
    }
    let scaled_xi = xi.scale_int(&cfg.l_scale);

    if let (Some(q0), false) = (scaled_xi.as_rational(), cfg.force_adaptive) {
        if base.degree() == 1 {
            // exact rational path: alpha itself is rational
            let alpha = FieldElement::alpha_power(base.clone(), 1)
                .as_rational()
                .expect("degree-1 field element is rational");
            if q0.is_negative() {
                return Err(Error::Input("xi must be positive".into()));
            }
            let mut v = q0;
            let mut out = Vec::with_capacity(cfg.horizon);
            for n in 1..=cfg.horizon {
                v *= &alpha;
                let (x, y) = floor_frac(&v);
                out.push(OrbitSample {
                    n,
                    x,
                    y: YVal::Exact(y),
                    bits_used: 0,
                    exact: true,
                });
            }
            return Ok(out);
        }
    }

    // adaptive path over an isolating enclosure of alpha
    let mut refiner = base.alpha_refiner();

    let res = cfg.resolution;
    let lg_alpha = {
        let (_, hi) = base.alpha_interval();
        hi.to_f64().unwrap_or(2.0).log2().max(0.0)
    };
    let mut cur = scaled_xi;
    let mut out = Vec::with_capacity(cfg.horizon);
    let mut carry_bits: u32 = 0; // precision momentum from previous straddles
    for n in 1..=cfg.horizon {
        cur = cur.mul_alpha();
        if let (Some(v), false) = (cur.as_rational(), cfg.force_adaptive) {
            // value collapsed to an exact rational (e.g. integer orbits)
            if v.is_negative() {
                return Err(Error::Input("xi must be positive".into()));
            }
            let (x, y) = floor_frac(&v);
            out.push(OrbitSample {
                n,
                x,
                y: YVal::Exact(y),
                bits_used: 0,
                exact: true,
            });
            continue;
        }
        let baseline = res + (n as f64 * lg_alpha).ceil() as u32 + 64;
        let mut w = baseline.max(carry_bits);
        let (e, l) = cur.coords();
        loop {
            if w > cfg.precision_cap {
                return Err(Error::PrecisionExhausted {
                    bits: w,
                    cap: cfg.precision_cap,
                    context: format!("floor certification at n={n}"),
                });
            }
            refiner.refine_to(w);
            let alo = refiner.lo().clone();
            let ahi = refiner.hi().clone();
            // interval powers of alpha (alpha > 1 > 0 keeps this monotone)
            let mut plo = Dyadic::from_i64(1);
            let mut phi = Dyadic::from_i64(1);
            let mut sum_lo = Dyadic::from_bigint(e[0].clone());
            let mut sum_hi = sum_lo.clone();
            for ek in &e[1..] {
                plo = plo.mul(&alo).truncate(w as u64 + 8, Round::Down);
                phi = phi.mul(&ahi).truncate(w as u64 + 8, Round::Up);
                if ek.is_zero() {
                    continue;
                }
                let c = Dyadic::from_bigint(ek.clone());
                if ek.is_positive() {
                    sum_lo = sum_lo.add(&c.mul(&plo));
                    sum_hi = sum_hi.add(&c.mul(&phi));
                } else {
                    sum_lo = sum_lo.add(&c.mul(&phi));
                    sum_hi = sum_hi.add(&c.mul(&plo));
                }
            }
            let lden = Dyadic::from_bigint(l.clone());
            let work = (w as i64 + res as i64 + 16) as u64;
            let v_lo = sum_lo.div_approx(&lden, work, Round::Down);
            let v_hi = sum_hi.div_approx(&lden, work, Round::Up);
            let t_lo = v_lo.floor_scaled(res as i64);
            let t_hi = v_hi.floor_scaled(res as i64);
            if t_lo == t_hi {
                let (x, frac) = split_grid(&t_lo, res);
                if x.is_negative() && n > 1 {
                    return Err(Error::Input("orbit value went negative".into()));
                }
                out.push(OrbitSample {
                    n,
                    x,
                    y: YVal::Fixed { scaled: frac, res },
                    bits_used: w,
                    exact: false,
                });
                carry_bits = w.saturating_sub(baseline);
                break;
            }
            w = w.saturating_mul(2);
        }
    }
    Ok(out)
}

/// s_n = -(a_0 x_n + ... + a_d x_{n+d}), cross-checked against the
/// fractional side a_0 y_n + ... + a_d y_{n+d}.
pub fn s_sequence(samples: &[OrbitSample], p: &IntPolynomial) -> Result<Vec<BigInt>> {
    let a = p.coeffs();
    let d = p.degree();
    if samples.len() <= d {
        return Ok(vec![]);
    }
    let length = BigRational::from_integer(BigInt::from(p.length()));
    let mut out = Vec::with_capacity(samples.len() - d);
    for i in 0..(samples.len() - d) {
        let mut int_side = BigInt::zero();
        let mut float_side = BigRational::zero();
        let mut max_res: u32 = 0;
        let mut all_exact = true;
        for (j, aj) in a.iter().enumerate() {
            let s = &samples[i + j];
            int_side += aj * &s.x;
            float_side += BigRational::from_integer(aj.clone()) * s.y.to_rational();
            match s.y {
                YVal::Exact(_) => {}
                YVal::Fixed { res, .. } => {
                    all_exact = false;
                    max_res = max_res.max(res);
                }
            }
        }
        let s_n = -int_side;
        let diff = (&float_side - BigRational::from_integer(s_n.clone())).abs();
        let tol = if all_exact {
            BigRational::zero()
        } else {
            // each Fixed y carries grid error < 2^-res
            &length / BigRational::from_integer(BigInt::one() << max_res)
        };
        if diff > tol {
            return Err(Error::InconsistentSample { n: samples[i].n as u64 });
        }
        out.push(s_n);
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct SmallnessReport {
    pub holds: bool,
    pub first_violation: Option<usize>,
    pub sup_norm: BigRational,
}

/// Lemma-1 evidence: is ||L xi alpha^n|| < 1/L(alpha) for every sampled n?
pub fn smallness_check(samples: &[OrbitSample], p: &IntPolynomial) -> SmallnessReport {
    let bound = BigRational::new(BigInt::one(), BigInt::from(p.length()));
    let mut sup = BigRational::zero();
    let mut first = None;
    for s in samples {
        let norm = s.y.norm();
        if norm > sup {
            sup = norm.clone();
        }
        if norm >= bound && first.is_none() {
            first = Some(s.n);
        }
    }
    SmallnessReport {
        holds: first.is_none(),
        first_violation: first,
        sup_norm: sup,
    }
}

/// Render y to a fixed-point decimal with enough digits for `res` bits.
pub fn y_decimal(y: &YVal) -> String {
    match y {
        YVal::Exact(q) => q.to_string(),
        YVal::Fixed { scaled, res } => {
            let digits = (*res as f64 * std::f64::consts::LOG10_2).ceil() as u32 + 1;
            let pow10 = BigInt::from(10u32).pow(digits);
            let v = (scaled * &pow10) >> *res;
            let s = v.to_string();
            let s = format!("{:0>width$}", s, width = digits as usize);
            let split = s.len() - digits as usize;
            format!("{}.{}", if split == 0 { "0" } else { &s[..split] }, &s[split..])
        }
    }
}

pub fn sample_csv_line(s: &OrbitSample) -> String {
    let y = match &s.y {
        YVal::Exact(q) => q.to_string(),
        f => y_decimal(f),
    };
    format!("{},{},{},{},{}", s.n, s.x, y, s.bits_used, s.exact)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly_algebra::classify;
    use num_traits::FromPrimitive;
    use std::sync::Arc;

    fn setup(poly: &str, xi: &str) -> (Arc<crate::poly_algebra::AlgebraicNumber>, FieldElement) {
        let p = IntPolynomial::parse(poly).unwrap();
        let a = Arc::new(classify(&p, 128).unwrap());
        let x = FieldElement::parse(a.clone(), xi).unwrap();
        (a, x)
    }

    #[test]
    fn rational_three_halves() {
        let (_, xi) = setup("2z-3", "1");
        let samples = iterate(&xi, &OrbitConfig::new(5, 32)).unwrap();
        let want_y = [(1u32, 2u32), (1, 4), (3, 8), (1, 16), (19, 32)];
        let want_x = [1u32, 2, 3, 5, 7];
        for (i, s) in samples.iter().enumerate() {
            assert!(s.exact);
            assert_eq!(s.x, BigInt::from(want_x[i]));
            assert_eq!(
                s.y.to_rational(),
                BigRational::new(want_y[i].0.into(), want_y[i].1.into())
            );
        }
    }

    #[test]
    fn golden_y10() {
        let (_, xi) = setup("z^2-z-1", "1");
        let samples = iterate(&xi, &OrbitConfig::new(10, 64)).unwrap();
        let s = &samples[9];
        assert_eq!(s.x, BigInt::from(122));
        let y = s.y.to_f64();
        // alpha^10 = 123 - beta^10, beta^10 = 0.00813...
        assert!((y - 0.991869).abs() < 1e-5, "y10 = {y}");
    }

    #[test]
    fn integer_orbit_exact_zero() {
        let (_, xi) = setup("z-2", "1");
        let samples = iterate(&xi, &OrbitConfig::new(20, 32)).unwrap();
        for (i, s) in samples.iter().enumerate() {
            assert!(s.exact);
            assert_eq!(s.x, BigInt::from(1u32) << (i + 1));
            assert!(s.y.to_rational().is_zero());
        }
    }

    #[test]
    fn liouville_seed_clusters() {
        // xi = sum 2^{-k!} for k <= 4; powers shift the tail into view
        let (_, xi) = setup("z-2", &{
            let v = BigRational::new(BigInt::one(), BigInt::one() << 1)
                + BigRational::new(BigInt::one(), BigInt::one() << 1)
                + BigRational::new(BigInt::one(), BigInt::one() << 2)
                + BigRational::new(BigInt::one(), BigInt::one() << 6)
                + BigRational::new(BigInt::one(), BigInt::one() << 24);
            format!("{}/{}", v.numer(), v.denom())
        });
        let samples = iterate(&xi, &OrbitConfig::new(30, 64)).unwrap();
        // near n = 6 the 2^-24 term reads as 2^-(24-n): y_6 ~ 2^-18 -> near 0
        let y6 = samples[5].y.to_f64();
        assert!(y6 < 1e-4 || y6 > 1.0 - 1e-4);
        // at n = 23 the term is 2^-1: y near 1/2
        let y23 = samples[22].y.to_f64();
        assert!((y23 - 0.5).abs() < 1e-4, "y23 = {y23}");
    }

    #[test]
    fn exact_adaptive_agreement() {
        let (_, xi) = setup("2z-3", "(7)/5");
        let exact = iterate(&xi, &OrbitConfig::new(300, 48)).unwrap();
        let mut cfg = OrbitConfig::new(300, 48);
        cfg.force_adaptive = true;
        let adaptive = iterate(&xi, &cfg).unwrap();
        for (e, a) in exact.iter().zip(&adaptive) {
            assert_eq!(e.x, a.x, "x mismatch at n={}", e.n);
            // compare y at the grid
            let ge = (e.y.to_rational() * BigRational::from_u64(1u64 << 48).unwrap())
                .floor();
            let ga = (a.y.to_rational() * BigRational::from_u64(1u64 << 48).unwrap())
                .floor();
            assert_eq!(ge, ga, "y mismatch at n={}", e.n);
        }
    }

    #[test]
    fn double_precision_stability() {
        let (_, xi) = setup("z^3-z-1", "(1,1,1)/7");
        let s1 = iterate(&xi, &OrbitConfig::new(80, 32)).unwrap();
        let s2 = iterate(&xi, &OrbitConfig::new(80, 64)).unwrap();
        for (a, b) in s1.iter().zip(&s2) {
            assert_eq!(a.x, b.x, "floor changed under higher resolution at n={}", a.n);
        }
    }

    #[test]
    fn s_sequence_three_halves() {
        let (a, xi) = setup("2z-3", "1");
        let samples = iterate(&xi, &OrbitConfig::new(6, 32)).unwrap();
        // oracle: x = 1,2,3,5,7,11 from (3^n mod 2^n)/2^n, s_n = -(-3 x_n + 2 x_{n+1})
        let s = s_sequence(&samples, a.minpoly()).unwrap();
        let want: Vec<i64> = vec![-1, 0, -1, 1, -1];
        assert_eq!(s, want.into_iter().map(BigInt::from).collect::<Vec<_>>());
    }

    #[test]
    fn s_sequence_golden_lucas_parity() {
        // alpha^n = L_n - beta^n with beta = -1/alpha, so x_n = L_n for odd n
        // and L_n - 1 for even n; hence s_n = -1 for odd n and 0 for even n.
        let (a, xi) = setup("z^2-z-1", "1");
        let samples = iterate(&xi, &OrbitConfig::new(40, 64)).unwrap();
        let s = s_sequence(&samples, a.minpoly()).unwrap();
        for (i, v) in s.iter().enumerate() {
            let n = i + 1;
            if n % 2 == 1 {
                assert_eq!(*v, BigInt::from(-1), "s at n={n}");
            } else {
                assert!(v.is_zero(), "s at n={n} = {v}");
            }
        }
    }

    #[test]
    fn s_bounded_by_length() {
        for (poly, xi) in [("2z-3", "1"), ("z^2-z-1", "(1,1)/3"), ("z^3-z-1", "(2,0,1)/9")] {
            let (a, x) = setup(poly, xi);
            let samples = iterate(&x, &OrbitConfig::new(60, 48)).unwrap();
            let s = s_sequence(&samples, a.minpoly()).unwrap();
            let bound = BigInt::from(a.minpoly().length()) - 1;
            for v in s {
                assert!(v.abs() <= bound);
            }
        }
    }

    #[test]
    fn smallness_golden_holds() {
        let (a, xi) = setup("z^2-z-1", "1");
        // ||alpha^n|| = |beta|^n drops below 1/3 from n = 3 on
        let samples = iterate(&xi, &OrbitConfig::new(40, 64)).unwrap();
        let rep = smallness_check(&samples[2..], a.minpoly());
        assert!(rep.holds, "sup = {}", rep.sup_norm);
        let early = smallness_check(&samples, a.minpoly());
        assert_eq!(early.first_violation, Some(1));
    }

    #[test]
    fn smallness_three_halves_fails_at_one() {
        let (a, xi) = setup("2z-3", "1");
        let samples = iterate(&xi, &OrbitConfig::new(40, 64)).unwrap();
        let rep = smallness_check(&samples, a.minpoly());
        assert!(!rep.holds);
        assert_eq!(rep.first_violation, Some(1));
    }

    #[test]
    fn smallness_integer_orbit() {
        let (a, xi) = setup("z-2", "1");
        let samples = iterate(&xi, &OrbitConfig::new(10, 32)).unwrap();
        let rep = smallness_check(&samples, a.minpoly());
        assert!(rep.holds);
        assert!(rep.sup_norm.is_zero());
    }

    #[test]
    fn pv_contraction_envelope() {
        // golden ratio, L=1: min(y, 1-y) = |beta|^n
        let (_, xi) = setup("z^2-z-1", "1");
        let samples = iterate(&xi, &OrbitConfig::new(40, 96)).unwrap();
        let rho = 0.618034f64;
        for s in &samples[1..] {
            let norm = s.y.norm().to_f64().unwrap();
            let envelope = rho.powi(s.n as i32) * 1.0001;
            assert!(norm <= envelope, "n={} norm={} envelope={}", s.n, norm, envelope);
        }
    }

    #[test]
    fn y_decimal_rendering() {
        let y = YVal::Fixed {
            scaled: BigInt::from(1u32) << 31,
            res: 32,
        };
        let s = y_decimal(&y);
        assert!(s.starts_with("0.5000000"), "{s}");
    }

    #[test]
    fn salem_orbit_runs() {
        let (_, xi) = setup("z^10+z^9-z^7-z^6-z^5-z^4-z^3+z+1", "1");
        let samples = iterate(&xi, &OrbitConfig::new(50, 64)).unwrap();
        assert_eq!(samples.len(), 50);
        for s in &samples {
            let y = s.y.to_rational();
            assert!(y >= BigRational::zero() && y < BigRational::one());
        }
    }
}
