//! Exact integer-polynomial algebra, certified root location relative to
//! the unit circle, and PV / Salem classification.

pub mod circle;
pub mod conjugates;
pub mod modp;
pub mod refine;
pub mod sturm;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::transcend::Transcend;
pub use circle::CircleCounts;
pub use conjugates::ComplexBox;
pub use refine::RootRefiner;
use sturm::{
    bisect_to_width, count_roots_above, count_roots_in, isolate_roots, root_bound, rp_deriv,
    rp_eval, rp_gcd, rp_trim, sturm_chain, RatPoly,
};

/// Primitive integer polynomial, coefficients ascending, degree >= 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        let mut c = coeffs;
        while c.last().map(|x| x.is_zero()).unwrap_or(false) {
            c.pop();
        }
        if c.len() < 2 {
            return Err(Error::Input(
                "polynomial must have degree at least 1".into(),
            ));
        }
        let mut content = BigInt::zero();
        for x in &c {
            content = num_integer::gcd(content, x.clone());
        }
        if !content.is_one() {
            for x in &mut c {
                *x /= &content;
            }
        }
        Ok(IntPolynomial { coeffs: c })
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &BigInt {
        self.coeffs.last().unwrap()
    }

    pub fn constant(&self) -> &BigInt {
        &self.coeffs[0]
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    /// L(alpha) = sum |a_i|.
    pub fn length(&self) -> BigUint {
        self.coeffs
            .iter()
            .map(|c| c.magnitude())
            .sum::<BigUint>()
    }

    pub fn is_self_reciprocal(&self) -> bool {
        let n = self.coeffs.len();
        (0..n).all(|i| self.coeffs[i] == self.coeffs[n - 1 - i])
    }

    pub fn to_rat(&self) -> RatPoly {
        rp_trim(
            self.coeffs
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        rp_eval(&self.to_rat(), x)
    }

    /// Parse `[a0,a1,...]` (ascending coefficients) or a symbolic string
    /// like `z^3-z-1`.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.starts_with('[') {
            let inner = t
                .strip_prefix('[')
                .and_then(|x| x.strip_suffix(']'))
                .ok_or_else(|| Error::Input(format!("unterminated coefficient list: {s}")))?;
            let coeffs: Result<Vec<BigInt>> = inner
                .split(',')
                .map(|p| {
                    p.trim()
                        .parse::<BigInt>()
                        .map_err(|_| Error::Input(format!("bad coefficient: {p}")))
                })
                .collect();
            return Self::new(coeffs?);
        }
        Self::parse_symbolic(t)
    }

    fn parse_symbolic(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Input("empty polynomial".into()));
        }
        let mut terms: Vec<(BigInt, usize)> = vec![];
        let bytes = compact.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let neg = match bytes[i] {
                b'+' => {
                    i += 1;
                    false
                }
                b'-' => {
                    i += 1;
                    true
                }
                _ => false,
            };
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let mut coef = if i > start {
                compact[start..i]
                    .parse::<BigInt>()
                    .map_err(|_| Error::Input(format!("bad coefficient in {s}")))?
            } else {
                BigInt::one()
            };
            if neg {
                coef = -coef;
            }
            if i < bytes.len() && bytes[i] == b'*' {
                i += 1;
            }
            let mut exp = 0usize;
            if i < bytes.len() && (bytes[i] | 32).is_ascii_lowercase() {
                i += 1; // variable letter
                exp = 1;
                if i < bytes.len() && bytes[i] == b'^' {
                    i += 1;
                    let estart = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    if i == estart {
                        return Err(Error::Input(format!("missing exponent in {s}")));
                    }
                    exp = compact[estart..i]
                        .parse()
                        .map_err(|_| Error::Input(format!("bad exponent in {s}")))?;
                }
            } else if i == start {
                return Err(Error::Input(format!("cannot parse term at '{}'", &compact[i..])));
            }
            terms.push((coef, exp));
        }
        let deg = terms.iter().map(|t| t.1).max().unwrap_or(0);
        let mut coeffs = vec![BigInt::zero(); deg + 1];
        for (c, e) in terms {
            coeffs[e] += c;
        }
        Self::new(coeffs)
    }

    pub fn is_squarefree(&self) -> bool {
        let p = self.to_rat();
        rp_gcd(&p, &rp_deriv(&p)).len() <= 1
    }

    /// Certified counts of roots inside, on and outside the unit circle.
    pub fn unit_circle_counts(&self, precision_cap: u32) -> Result<CircleCounts> {
        circle::unit_circle_counts(&self.coeffs, precision_cap)
    }
}

impl std::fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}")?;
                    }
                    if i == 1 {
                        write!(f, "z")?;
                    } else {
                        write!(f, "z^{i}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Class {
    #[serde(rename = "PV")]
    Pv,
    Salem,
    Neither,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Irreducibility {
    Proved,
    Unverified,
}

/// The distinguished real root alpha > 1 of an integer polynomial, with
/// conjugate data and classification.
#[derive(Debug, Clone)]
pub struct AlgebraicNumber {
    minpoly: IntPolynomial,
    alpha_lo: BigRational,
    alpha_hi: BigRational,
    conjugates: Vec<ComplexBox>,
    conj_precision: u32,
    counts: CircleCounts,
    classification: Class,
    irreducibility: Irreducibility,
}

impl AlgebraicNumber {
    pub fn minpoly(&self) -> &IntPolynomial {
        &self.minpoly
    }

    pub fn degree(&self) -> usize {
        self.minpoly.degree()
    }

    pub fn classification(&self) -> Class {
        self.classification
    }

    pub fn irreducibility(&self) -> Irreducibility {
        self.irreducibility
    }

    pub fn counts(&self) -> CircleCounts {
        self.counts
    }

    pub fn alpha_interval(&self) -> (&BigRational, &BigRational) {
        (&self.alpha_lo, &self.alpha_hi)
    }

    pub fn conjugates(&self) -> &[ComplexBox] {
        &self.conjugates
    }

    pub fn conj_precision(&self) -> u32 {
        self.conj_precision
    }

    /// Fresh refiner for the designated root (callers own the precision).
    pub fn alpha_refiner(&self) -> RootRefiner {
        RootRefiner::new(self.minpoly.coeffs.to_vec(), &self.alpha_lo, &self.alpha_hi)
    }

    pub fn alpha_f64(&self) -> f64 {
        let mut r = self.alpha_refiner();
        r.refine_to(64);
        r.lo().to_f64()
    }

    /// Salem m with d = 2m + 2.
    pub fn salem_m(&self) -> Option<usize> {
        if self.classification == Class::Salem {
            Some(self.counts.on / 2)
        } else {
            None
        }
    }
}

fn no_rational_roots(p: &IntPolynomial) -> Option<BigRational> {
    // candidate roots r/s with r | a0, s | a_d; skip huge coefficient inputs
    let a0 = p.constant().magnitude();
    let ad = p.leading().magnitude();
    let cap = BigUint::from(1_000_000u64);
    if a0 > &cap || ad > &cap {
        return None;
    }
    let divisors = |n: &BigUint| -> Vec<BigUint> {
        let n = n.to_u64().unwrap();
        let mut out = vec![];
        let mut i = 1u64;
        while i * i <= n {
            if n % i == 0 {
                out.push(BigUint::from(i));
                out.push(BigUint::from(n / i));
            }
            i += 1;
        }
        out
    };
    for r in divisors(a0) {
        for s in divisors(ad) {
            for sign in [1i64, -1] {
                let cand = BigRational::new(
                    BigInt::from(sign) * BigInt::from_biguint(num_bigint::Sign::Plus, r.clone()),
                    BigInt::from_biguint(num_bigint::Sign::Plus, s.clone()),
                );
                if p.eval_rational(&cand).is_zero() {
                    return Some(cand);
                }
            }
        }
    }
    None
}

/// Classify the unique real root > 1 of `p` as PV / Salem / Neither, with
/// certified circle counts and conjugate enclosures at `precision` bits.
pub fn classify(p: &IntPolynomial, precision: u32) -> Result<AlgebraicNumber> {
    if !p.is_squarefree() {
        return Err(Error::NotSquarefree);
    }
    if p.degree() >= 2 {
        if let Some(root) = no_rational_roots(p) {
            return Err(Error::Reducible(root.to_string()));
        }
    }
    let rat = p.to_rat();
    let chain = sturm_chain(&rat);
    let one = BigRational::one();
    // nudge off z = 1 if it happens to be a root
    let mut lo = one.clone();
    if p.eval_rational(&lo).is_zero() {
        let mut k = 8u64;
        loop {
            let cand = &one + BigRational::new(BigInt::one(), BigInt::one() << k);
            if !p.eval_rational(&cand).is_zero()
                && count_roots_in(&chain, &one, &cand) == 0
            {
                lo = cand;
                break;
            }
            k += 4;
        }
    }
    let n_above = count_roots_above(&chain, &lo);
    if n_above == 0 {
        return Err(Error::NoRootAboveOne);
    }
    if n_above > 1 {
        return Err(Error::AmbiguousRoot);
    }
    let irreducibility = if p.degree() == 1 || modp::modular_irreducibility_evidence(&p.coeffs).is_some() {
        Irreducibility::Proved
    } else {
        Irreducibility::Unverified
    };
    let counts = p.unit_circle_counts(precision)?;
    let d = p.degree();
    let classification = if p.is_monic() && counts.on == 0 && counts.inside == d - 1 {
        Class::Pv
    } else if p.is_monic()
        && counts.on >= 1
        && counts.outside == 1
        && counts.inside == d - 1 - counts.on
    {
        debug_assert!(p.is_self_reciprocal() && counts.on % 2 == 0);
        Class::Salem
    } else {
        Class::Neither
    };
    // isolate and moderately refine the designated root
    let bound = root_bound(&rat);
    let iso = isolate_roots(&chain, &lo, &bound);
    let (mut rlo, mut rhi) = iso.into_iter().next().ok_or(Error::NoRootAboveOne)?;
    let w = BigRational::new(BigInt::one(), BigInt::from(64));
    let (a, b) = bisect_to_width(&rat, rlo, rhi, &w);
    rlo = a;
    rhi = b;
    // keep the interval strictly above 1
    let two = BigRational::from_integer(BigInt::from(2));
    while rlo <= one {
        let mid = (&rlo + &rhi) / &two;
        if p.eval_rational(&mid).is_zero() {
            // rational root exactly at mid (degree 1); shrink symmetrically
            rlo = &mid - BigRational::new(BigInt::one(), BigInt::from(1024));
            rhi = &mid + BigRational::new(BigInt::one(), BigInt::from(1024));
            break;
        }
        if count_roots_above(&chain, &mid) == 1 {
            rlo = mid;
        } else {
            rhi = mid;
        }
    }
    let conjugates = conjugates::conjugate_boxes(&p.coeffs, precision);
    debug_assert_eq!(conjugates.len(), d);
    Ok(AlgebraicNumber {
        minpoly: p.clone(),
        alpha_lo: rlo,
        alpha_hi: rhi,
        conjugates,
        conj_precision: precision,
        counts,
        classification,
        irreducibility,
    })
}

/// Dyadic enclosure midpoints of 2cos(phi_j) for the on-circle conjugate
/// pairs of a Salem number, refined to `bits`, in descending order of x
/// (ascending order of phi).
pub fn salem_cos_points(a: &AlgebraicNumber, bits: u32) -> Result<Vec<Dyadic>> {
    if a.classification != Class::Salem {
        return Err(Error::NotSalem);
    }
    let q = circle::chebyshev_transform_public(a.minpoly.coeffs())?;
    let chain = sturm_chain(&q);
    let two = BigRational::from_integer(BigInt::from(2));
    let iso = isolate_roots(&chain, &(-two.clone()), &two);
    let mut points = vec![];
    for (lo, hi) in iso {
        let mut r = RootRefiner::new(circle::primitive_int(&q), &lo, &hi);
        r.refine_to(bits + 8);
        points.push(r.lo().clone());
    }
    // exclude real reciprocal-pair images x = alpha + 1/alpha outside (-2,2):
    // isolate_roots was already restricted to (-2,2), nothing to drop
    points.sort_by(|p, q| q.cmp(p));
    Ok(points)
}

/// Arguments phi_1 < ... < phi_m in (0, pi) of the upper-half-plane
/// unit-circle conjugates of a Salem number.
pub fn conjugate_arguments(a: &AlgebraicNumber, precision: u32) -> Result<Vec<Dyadic>> {
    let xs = salem_cos_points(a, precision + 16)?;
    let mut t = Transcend::new();
    let mut out = vec![];
    for x in xs {
        let c = x.mul_pow2(-1); // cos(phi) = x/2
        out.push(t.acos(&c, precision + 16));
    }
    Ok(out)
}
