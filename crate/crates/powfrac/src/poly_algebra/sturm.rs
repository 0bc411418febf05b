//! Polynomials over Q: division, gcd, Sturm chains and real-root isolation.
//! Everything here is exact; no floating point.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Coefficients ascending, no trailing zeros (empty = zero polynomial).
pub type RatPoly = Vec<BigRational>;

pub fn rp_trim(mut p: RatPoly) -> RatPoly {
    while p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
    p
}

pub fn rp_from_bigint(coeffs: &[BigInt]) -> RatPoly {
    rp_trim(coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect())
}

pub fn rp_degree(p: &RatPoly) -> usize {
    debug_assert!(!p.is_empty());
    p.len() - 1
}

pub fn rp_is_zero(p: &RatPoly) -> bool {
    p.is_empty()
}

pub fn rp_deriv(p: &RatPoly) -> RatPoly {
    if p.len() <= 1 {
        return vec![];
    }
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
        .collect()
}

pub fn rp_eval(p: &RatPoly, x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

pub fn rp_neg(p: &RatPoly) -> RatPoly {
    p.iter().map(|c| -c).collect()
}

pub fn rp_mul(a: &RatPoly, b: &RatPoly) -> RatPoly {
    if rp_is_zero(a) || rp_is_zero(b) {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            out[i + j] += ca * cb;
        }
    }
    rp_trim(out)
}

/// Exact Euclidean division: returns (quotient, remainder).
pub fn rp_divmod(a: &RatPoly, b: &RatPoly) -> (RatPoly, RatPoly) {
    assert!(!rp_is_zero(b), "division by zero polynomial");
    if rp_is_zero(a) || a.len() < b.len() {
        return (vec![], a.clone());
    }
    let mut rem = a.clone();
    let mut quo = vec![BigRational::zero(); a.len() - b.len() + 1];
    let db = rp_degree(b);
    let lead = b[db].clone();
    while !rp_is_zero(&rem) && rem.len() >= b.len() {
        let dr = rp_degree(&rem);
        let factor = &rem[dr] / &lead;
        let shift = dr - db;
        quo[shift] = factor.clone();
        for (i, cb) in b.iter().enumerate() {
            let t = cb * &factor;
            rem[i + shift] -= t;
        }
        rem = rp_trim(rem);
    }
    (rp_trim(quo), rem)
}

/// Monic gcd over Q.
pub fn rp_gcd(a: &RatPoly, b: &RatPoly) -> RatPoly {
    let mut f = a.clone();
    let mut g = b.clone();
    while !rp_is_zero(&g) {
        let (_, r) = rp_divmod(&f, &g);
        f = g;
        g = r;
    }
    if rp_is_zero(&f) {
        return f;
    }
    let lead = f[rp_degree(&f)].clone();
    f.iter().map(|c| c / &lead).collect()
}

/// Sturm chain of a squarefree polynomial.
pub fn sturm_chain(p: &RatPoly) -> Vec<RatPoly> {
    let mut chain = vec![p.clone(), rp_deriv(p)];
    loop {
        let n = chain.len();
        if rp_is_zero(&chain[n - 1]) {
            chain.pop();
            break;
        }
        let (_, r) = rp_divmod(&chain[n - 2], &chain[n - 1]);
        if rp_is_zero(&r) {
            break;
        }
        chain.push(rp_neg(&r));
    }
    chain
}

fn sign(x: &BigRational) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

fn variations(signs: impl Iterator<Item = i32>) -> usize {
    let mut count = 0;
    let mut last = 0;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

pub fn variations_at(chain: &[RatPoly], x: &BigRational) -> usize {
    variations(chain.iter().map(|p| sign(&rp_eval(p, x))))
}

pub fn variations_at_pos_inf(chain: &[RatPoly]) -> usize {
    variations(chain.iter().map(|p| {
        if rp_is_zero(p) {
            0
        } else {
            sign(&p[rp_degree(p)])
        }
    }))
}

pub fn variations_at_neg_inf(chain: &[RatPoly]) -> usize {
    variations(chain.iter().map(|p| {
        if rp_is_zero(p) {
            0
        } else {
            let d = rp_degree(p);
            let s = sign(&p[d]);
            if d % 2 == 0 {
                s
            } else {
                -s
            }
        }
    }))
}

/// Number of distinct real roots in the half-open interval (a, b], a < b.
pub fn count_roots_in(chain: &[RatPoly], a: &BigRational, b: &BigRational) -> usize {
    variations_at(chain, a) - variations_at(chain, b)
}

/// Number of distinct real roots in (a, +inf).
pub fn count_roots_above(chain: &[RatPoly], a: &BigRational) -> usize {
    variations_at(chain, a) - variations_at_pos_inf(chain)
}

/// Cauchy bound: all real roots lie in (-B, B).
pub fn root_bound(p: &RatPoly) -> BigRational {
    let d = rp_degree(p);
    let lead = p[d].abs();
    let mut m = BigRational::zero();
    for c in &p[..d] {
        let a = c.abs();
        if a > m {
            m = a;
        }
    }
    BigRational::one() + m / lead
}

/// Isolating intervals (open, endpoints non-roots) for every real root of a
/// squarefree polynomial inside (lo, hi). Endpoints must not be roots.
pub fn isolate_roots(
    chain: &[RatPoly],
    lo: &BigRational,
    hi: &BigRational,
) -> Vec<(BigRational, BigRational)> {
    let p = &chain[0];
    debug_assert!(!rp_eval(p, lo).is_zero() && !rp_eval(p, hi).is_zero());
    let n = count_roots_in(chain, lo, hi);
    if n == 0 {
        return vec![];
    }
    if n == 1 {
        return vec![(lo.clone(), hi.clone())];
    }
    let two = BigRational::from_integer(BigInt::from(2));
    let mut mid = (lo + hi) / &two;
    // nudge off a root if we hit one exactly
    while rp_eval(p, &mid).is_zero() {
        mid = (lo + &mid) / &two;
    }
    let mut out = isolate_roots(chain, lo, &mid);
    out.extend(isolate_roots(chain, &mid, hi));
    out
}

/// Shrink an isolating interval (sign change across it) by bisection until
/// its width is at most `width`.
pub fn bisect_to_width(
    p: &RatPoly,
    mut lo: BigRational,
    mut hi: BigRational,
    width: &BigRational,
) -> (BigRational, BigRational) {
    let slo = sign(&rp_eval(p, &lo));
    debug_assert!(slo != 0 && sign(&rp_eval(p, &hi)) == -slo);
    let two = BigRational::from_integer(BigInt::from(2));
    while &hi - &lo > *width {
        let mid = (&lo + &hi) / &two;
        let sm = sign(&rp_eval(p, &mid));
        if sm == 0 {
            // exact rational root: collapse around it
            let q = (width / &two).abs();
            return (&mid - &q, &mid + &q);
        }
        if sm == slo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}
