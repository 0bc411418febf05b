//! Certified root location relative to the unit circle.
//!
//! On-circle roots are split off through the reciprocal gcd
//! g = gcd(p(z), z^d p(1/z)) and counted via the substitution x = z + 1/z,
//! which turns circle pairs e^{±i phi} into real roots of a half-degree
//! polynomial in (-2, 2). The circle-free part is counted by the exact
//! Schur-Cohn reduction; if the reduction degenerates, Graeffe root-squaring
//! plus Pellet's coefficient test takes over. All arithmetic is exact.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::sturm::{
    count_roots_in, rp_divmod, rp_gcd, rp_is_zero, sturm_chain, RatPoly,
};
use crate::error::{Error, Result};

/// Clear denominators and divide out the content; make the leading
/// coefficient positive.
pub fn primitive_int(p: &RatPoly) -> Vec<BigInt> {
    assert!(!rp_is_zero(p));
    let mut lcm = BigInt::one();
    for c in p {
        lcm = num_integer::lcm(lcm, c.denom().clone());
    }
    let mut ints: Vec<BigInt> = p
        .iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect();
    let mut content = BigInt::zero();
    for c in &ints {
        content = num_integer::gcd(content, c.clone());
    }
    if !content.is_one() {
        for c in &mut ints {
            *c /= &content;
        }
    }
    if ints.last().unwrap().is_negative() {
        for c in &mut ints {
            *c = -&*c;
        }
    }
    ints
}

fn to_rat(p: &[BigInt]) -> RatPoly {
    p.iter().map(|c| BigRational::from_integer(c.clone())).collect()
}

/// z^d p(1/z): coefficient reversal.
fn reverse(p: &[BigInt]) -> Vec<BigInt> {
    let mut r: Vec<BigInt> = p.to_vec();
    r.reverse();
    r
}

fn eval_int(p: &[BigInt], x: i64) -> BigInt {
    let x = BigInt::from(x);
    let mut acc = BigInt::zero();
    for c in p.iter().rev() {
        acc = acc * &x + c;
    }
    acc
}

/// Exact division of integer polynomials known to divide evenly.
fn div_exact(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let (q, r) = rp_divmod(&to_rat(a), &to_rat(b));
    assert!(rp_is_zero(&r), "expected exact polynomial division");
    primitive_int(&q)
}

/// For self-reciprocal g of even degree 2k, the polynomial q of degree k
/// with g(z) = z^k q(z + 1/z). Basis: w_j = z^j + z^{-j}, w_0 = 2, w_1 = x,
/// w_{j+1} = x w_j - w_{j-1}.
pub(crate) fn chebyshev_transform_public(g: &[BigInt]) -> crate::error::Result<RatPoly> {
    let deg = g.len() - 1;
    if deg % 2 != 0 || (0..g.len()).any(|i| g[i] != g[deg - i]) {
        return Err(crate::error::Error::Input(
            "expected a self-reciprocal polynomial of even degree".into(),
        ));
    }
    Ok(chebyshev_transform(g))
}

fn chebyshev_transform(g: &[BigInt]) -> RatPoly {
    let deg = g.len() - 1;
    assert!(deg % 2 == 0, "self-reciprocal factor must have even degree");
    let k = deg / 2;
    let mut w_prev: RatPoly = vec![BigRational::from_integer(2.into())]; // w_0
    let mut w_cur: RatPoly = vec![BigRational::zero(), BigRational::one()]; // w_1
    let mut q: RatPoly = vec![BigRational::from_integer(g[k].clone())];
    for j in 1..=k {
        let wj = if j == 1 {
            w_cur.clone()
        } else {
            // w_j = x * w_{j-1} - w_{j-2}
            let mut shifted = vec![BigRational::zero()];
            shifted.extend(w_cur.iter().cloned());
            let mut next: RatPoly = shifted;
            for (i, c) in w_prev.iter().enumerate() {
                next[i] -= c;
            }
            w_prev = std::mem::replace(&mut w_cur, next.clone());
            let _ = w_prev;
            next
        };
        let coef = BigRational::from_integer(g[k + j].clone());
        if q.len() < wj.len() {
            q.resize(wj.len(), BigRational::zero());
        }
        for (i, c) in wj.iter().enumerate() {
            q[i] += &coef * c;
        }
    }
    super::sturm::rp_trim(q)
}

/// One Graeffe root-squaring step: returns a polynomial whose roots are the
/// squares of the input's roots.
fn graeffe_step(p: &[BigInt]) -> Vec<BigInt> {
    let n = p.len() - 1;
    let mut even = vec![BigInt::zero(); n / 2 + 1];
    let mut odd = vec![BigInt::zero(); n.div_ceil(2)];
    for (i, c) in p.iter().enumerate() {
        if i % 2 == 0 {
            even[i / 2] = c.clone();
        } else {
            odd[(i - 1) / 2] = c.clone();
        }
    }
    // p(z)p(-z) = e(z^2)^2 - z^2 o(z^2)^2
    let sq = |v: &[BigInt]| -> Vec<BigInt> {
        if v.iter().all(|c| c.is_zero()) {
            return vec![];
        }
        let mut out = vec![BigInt::zero(); 2 * v.len() - 1];
        for (i, a) in v.iter().enumerate() {
            for (j, b) in v.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        out
    };
    let e2 = sq(&even);
    let o2 = sq(&odd);
    let mut out = vec![BigInt::zero(); n + 1];
    for (i, c) in e2.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in o2.iter().enumerate() {
        out[i + 1] -= c;
    }
    // normalize sign so the leading coefficient stays positive
    if out.last().unwrap().is_negative() {
        for c in &mut out {
            *c = -&*c;
        }
    }
    out
}

/// Pellet test at radius 1: if |a_k| > sum of all other |a_j|, exactly k
/// roots lie strictly inside the unit circle (and none on it).
fn pellet_inside(p: &[BigInt]) -> Option<usize> {
    let total: BigInt = p.iter().map(|c| c.abs()).sum();
    for (k, c) in p.iter().enumerate() {
        let rest = &total - c.abs();
        if c.abs() > rest {
            return Some(k);
        }
    }
    None
}

/// Schur-Cohn reduction for a polynomial with no roots on the unit circle
/// and nonzero constant term. Returns None if the reduction degenerates.
fn schur_cohn_inside(p: &[BigInt]) -> Option<usize> {
    let mut f: Vec<BigInt> = p.to_vec();
    let mut inside = 0usize;
    let mut flip = false;
    loop {
        let n = f.len() - 1;
        if n == 0 {
            return Some(inside);
        }
        let a0 = f[0].clone();
        let an = f[n].clone();
        let gamma = &a0 * &a0 - &an * &an;
        if gamma.is_zero() {
            return None;
        }
        // Tf = a0*f - an*reverse(f); degree drops by at least one
        let mut t: Vec<BigInt> = (0..n)
            .map(|i| &a0 * &f[i] - &an * &f[n - i])
            .collect();
        while t.last().map(|c| c.is_zero()).unwrap_or(false) {
            t.pop();
        }
        if t.is_empty() {
            return None;
        }
        if gamma.is_negative() {
            // roots inside f = n - roots inside Tf
            if flip {
                inside -= n;
            } else {
                inside += n;
            }
            flip = !flip;
        }
        // strip content to keep coefficients small
        let mut content = BigInt::zero();
        for c in &t {
            content = num_integer::gcd(content, c.clone());
        }
        if !content.is_one() {
            for c in &mut t {
                *c /= &content;
            }
        }
        f = t;
    }
}

/// Inside-count for a squarefree polynomial with no roots on the unit
/// circle: Schur-Cohn first, Graeffe + Pellet as the certified fallback.
fn count_inside_off_circle(p: &[BigInt], precision_cap: u32) -> Result<usize> {
    if p.len() == 1 {
        return Ok(0);
    }
    if let Some(k) = schur_cohn_inside(p) {
        return Ok(k);
    }
    let mut g: Vec<BigInt> = p.to_vec();
    let max_iters = 40;
    for it in 0..max_iters {
        if let Some(k) = pellet_inside(&g) {
            return Ok(k);
        }
        let bits: u64 = g.iter().map(|c| c.bits()).max().unwrap_or(0);
        if bits > precision_cap as u64 * 64 {
            break;
        }
        g = graeffe_step(&g);
        let _ = it;
    }
    Err(Error::PrecisionExhausted {
        bits: precision_cap,
        cap: precision_cap,
        context: "Graeffe/Pellet unit-circle separation".into(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CircleCounts {
    pub inside: usize,
    pub on: usize,
    pub outside: usize,
}

/// Certified (inside, on, outside) root counts for a squarefree integer
/// polynomial with nonzero constant term allowed to be checked here.
pub fn unit_circle_counts(coeffs: &[BigInt], precision_cap: u32) -> Result<CircleCounts> {
    let p = to_rat(coeffs);
    let d = p.len() - 1;
    // squarefree gate
    let gcd_pd = rp_gcd(&p, &super::sturm::rp_deriv(&p));
    if gcd_pd.len() > 1 {
        return Err(Error::NotSquarefree);
    }
    // roots at zero are inside the disc
    let mut work: Vec<BigInt> = coeffs.to_vec();
    let mut inside = 0usize;
    while work[0].is_zero() {
        work.remove(0);
        inside += 1;
    }

    let rev = reverse(&work);
    let g_rat = rp_gcd(&to_rat(&work), &to_rat(&rev));
    let mut on = 0usize;
    let mut h: Vec<BigInt> = work.clone();
    if g_rat.len() > 1 {
        let mut g = primitive_int(&g_rat);
        h = div_exact(&work, &g);
        // split off z = 1 and z = -1 (simple roots by squarefreeness)
        for r in [1i64, -1] {
            if eval_int(&g, r).is_zero() {
                on += 1;
                let lin = vec![BigInt::from(-r), BigInt::one()];
                g = div_exact(&g, &lin);
            }
        }
        if g.len() > 1 {
            let q = chebyshev_transform(&g);
            let chain = sturm_chain(&q);
            let two = BigRational::from_integer(2.into());
            let circle_pairs = count_roots_in(&chain, &(-two.clone()), &two)
                - if super::sturm::rp_eval(&q, &two).is_zero() { 1 } else { 0 };
            on += 2 * circle_pairs;
            // remaining roots of g come in reciprocal pairs off the circle
            let leftover = (g.len() - 1) - 2 * circle_pairs;
            debug_assert!(leftover % 2 == 0);
            inside += leftover / 2;
        }
    }
    if h.len() > 1 {
        inside += count_inside_off_circle(&h, precision_cap)?;
    }
    let outside = d - inside - on;
    Ok(CircleCounts { inside, on, outside })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(coeffs: &[i64]) -> Vec<BigInt> {
        coeffs.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn golden_ratio_counts() {
        let c = unit_circle_counts(&ip(&[-1, -1, 1]), 4096).unwrap();
        assert_eq!(c, CircleCounts { inside: 1, on: 0, outside: 1 });
    }

    #[test]
    fn lehmer_counts() {
        let c = unit_circle_counts(&ip(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]), 4096).unwrap();
        assert_eq!(c, CircleCounts { inside: 1, on: 8, outside: 1 });
    }

    #[test]
    fn z2_plus_1_counts() {
        let c = unit_circle_counts(&ip(&[1, 0, 1]), 4096).unwrap();
        assert_eq!(c, CircleCounts { inside: 0, on: 2, outside: 0 });
    }

    #[test]
    fn plastic_number_counts() {
        // z^3 - z - 1: real root 1.3247..., complex pair of modulus ~0.8689
        let c = unit_circle_counts(&ip(&[-1, -1, 0, 1]), 4096).unwrap();
        assert_eq!(c, CircleCounts { inside: 2, on: 0, outside: 1 });
    }

    #[test]
    fn reciprocal_quadratic_schur_cohn_degenerate() {
        // z^2 - 3z + 1: reciprocal real pair 2.618..., 0.381...
        let c = unit_circle_counts(&ip(&[1, -3, 1]), 4096).unwrap();
        assert_eq!(c, CircleCounts { inside: 1, on: 0, outside: 1 });
    }

    #[test]
    fn salem_degree_four() {
        let c = unit_circle_counts(&ip(&[1, -1, -1, -1, 1]), 4096).unwrap();
        assert_eq!(c, CircleCounts { inside: 1, on: 2, outside: 1 });
    }

    #[test]
    fn cyclotomic_and_circle_mix() {
        // (z-1)(z+1)z: squarefree, roots 0, 1, -1
        let c = unit_circle_counts(&ip(&[0, -1, 0, 1]), 4096).unwrap();
        assert_eq!(c, CircleCounts { inside: 1, on: 2, outside: 0 });
    }

    #[test]
    fn non_squarefree_rejected() {
        assert!(matches!(
            unit_circle_counts(&ip(&[1, 2, 1]), 4096),
            Err(Error::NotSquarefree)
        ));
    }

    #[test]
    fn pow_two_scaled() {
        // 2z - 3: single root 3/2 outside
        let c = unit_circle_counts(&ip(&[-3, 2]), 4096).unwrap();
        assert_eq!(c, CircleCounts { inside: 0, on: 0, outside: 1 });
    }
}
