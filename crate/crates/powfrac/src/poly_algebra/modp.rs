//! Irreducibility testing over F_p for small primes: a degree-d polynomial
//! f is irreducible iff x^(p^d) = x (mod f) and gcd(x^(p^(d/q)) - x, f) = 1
//! for every prime divisor q of d.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

type FpPoly = Vec<u64>; // ascending, modulo p, no trailing zeros

fn trim(mut f: FpPoly) -> FpPoly {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

fn reduce_coeffs(coeffs: &[BigInt], p: u64) -> FpPoly {
    let pb = BigInt::from(p);
    trim(
        coeffs
            .iter()
            .map(|c| {
                let r = num_integer::Integer::mod_floor(c, &pb);
                r.to_u64().unwrap()
            })
            .collect(),
    )
}

fn rem(f: &FpPoly, g: &FpPoly, p: u64) -> FpPoly {
    let mut r = f.clone();
    let dg = g.len() - 1;
    let lead_inv = inv_mod(g[dg], p);
    while r.len() > dg {
        let dr = r.len() - 1;
        let factor = r[dr] * lead_inv % p;
        if factor != 0 {
            for (i, &c) in g.iter().enumerate() {
                let idx = dr - dg + i;
                r[idx] = (r[idx] + p - factor * c % p) % p;
            }
        }
        r.pop();
        while r.last() == Some(&0) {
            r.pop();
        }
        if r.len() <= dg {
            break;
        }
    }
    r
}

fn mulmod(a: &FpPoly, b: &FpPoly, f: &FpPoly, p: u64) -> FpPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ca) in a.iter().enumerate() {
        for (j, &cb) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + ca * cb) % p;
        }
    }
    rem(&trim(out), f, p)
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

fn gcd_fp(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    let mut f = a.clone();
    let mut g = b.clone();
    while !g.is_empty() {
        let r = if f.len() >= g.len() { rem(&f, &g, p) } else { f.clone() };
        f = g;
        g = r;
    }
    f
}

/// x^(p^k) mod f via k repeated p-th powers.
fn frobenius_power(f: &FpPoly, p: u64, k: usize) -> FpPoly {
    let x: FpPoly = vec![0, 1];
    let mut cur = rem(&x, f, p);
    for _ in 0..k {
        // cur^p by square and multiply
        let mut result: FpPoly = vec![1];
        let mut base = cur.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                result = mulmod(&result, &base, f, p);
            }
            base = mulmod(&base, &base, f, p);
            e >>= 1;
        }
        cur = result;
    }
    cur
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = vec![];
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            out.push(q);
            while n % q == 0 {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Is `coeffs` irreducible modulo p? Requires p not dividing the leading
/// coefficient (degree preserved).
pub fn irreducible_mod_p(coeffs: &[BigInt], p: u64) -> bool {
    let f = reduce_coeffs(coeffs, p);
    let d = coeffs.len() - 1;
    if f.len() != d + 1 {
        return false; // degree dropped
    }
    if d == 1 {
        return true;
    }
    // x^(p^d) == x mod f
    let sub = |a: &FpPoly, b: &FpPoly| -> FpPoly {
        let mut out = vec![0u64; a.len().max(b.len())];
        for (i, &c) in a.iter().enumerate() {
            out[i] = c;
        }
        for (i, &c) in b.iter().enumerate() {
            out[i] = (out[i] + p - c) % p;
        }
        trim(out)
    };
    let x: FpPoly = vec![0, 1];
    let top = frobenius_power(&f, p, d);
    if !sub(&top, &x).is_empty() {
        return false;
    }
    for q in prime_divisors(d) {
        let mid = frobenius_power(&f, p, d / q);
        let g = gcd_fp(&sub(&mid, &x), &f, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// Search primes below 100 (not dividing the leading coefficient) for a
/// modular irreducibility certificate.
pub fn modular_irreducibility_evidence(coeffs: &[BigInt]) -> Option<u64> {
    const PRIMES: [u64; 25] = [
        2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83,
        89, 97,
    ];
    let lead = coeffs.last().unwrap();
    for &p in &PRIMES {
        if (lead % BigInt::from(p)).is_zero() {
            continue;
        }
        if irreducible_mod_p(coeffs, p) {
            return Some(p);
        }
    }
    None
}
