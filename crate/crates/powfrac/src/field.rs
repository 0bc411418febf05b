//! Exact arithmetic in the number field Q(alpha), elements stored as
//! integer coordinate vectors over a common denominator in the power
//! basis 1, alpha, ..., alpha^{d-1}.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly_algebra::AlgebraicNumber;

/// (e_0, ..., e_{d-1}) / l in the power basis of alpha.
#[derive(Clone)]
pub struct FieldElement {
    base: Arc<AlgebraicNumber>,
    e: Vec<BigInt>,
    l: BigInt,
}

impl std::fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FieldElement({self})")
    }
}

impl std::fmt::Display for FieldElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.e.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")?;
        if !self.l.is_one() {
            write!(f, "/{}", self.l)?;
        }
        Ok(())
    }
}

impl FieldElement {
    fn normalized(base: Arc<AlgebraicNumber>, coords: Vec<BigRational>) -> Self {
        let d = base.degree();
        assert_eq!(coords.len(), d);
        let mut l = BigInt::one();
        for c in &coords {
            l = l.lcm(c.denom());
        }
        let mut e: Vec<BigInt> = coords
            .iter()
            .map(|c| c.numer() * (&l / c.denom()))
            .collect();
        let mut g = l.clone();
        for c in &e {
            g = g.gcd(c);
        }
        if !g.is_one() && !g.is_zero() {
            for c in &mut e {
                *c /= &g;
            }
            l /= &g;
        }
        FieldElement { base, e, l }
    }

    pub fn zero(base: Arc<AlgebraicNumber>) -> Self {
        let d = base.degree();
        FieldElement {
            base,
            e: vec![BigInt::zero(); d],
            l: BigInt::one(),
        }
    }

    pub fn from_rational(base: Arc<AlgebraicNumber>, q: BigRational) -> Self {
        let d = base.degree();
        let mut e = vec![BigInt::zero(); d];
        e[0] = q.numer().clone();
        let mut out = FieldElement {
            base,
            e,
            l: q.denom().clone(),
        };
        out.reduce_content();
        out
    }

    pub fn from_coords(base: Arc<AlgebraicNumber>, e: Vec<BigInt>, l: BigInt) -> Result<Self> {
        if e.len() != base.degree() {
            return Err(Error::Input(format!(
                "coordinate vector has length {}, field degree is {}",
                e.len(),
                base.degree()
            )));
        }
        if l.is_zero() {
            return Err(Error::Input("zero denominator".into()));
        }
        let (e, l) = if l.is_negative() {
            (e.into_iter().map(|c| -c).collect(), -l)
        } else {
            (e, l)
        };
        let mut out = FieldElement { base, e, l };
        out.reduce_content();
        Ok(out)
    }

    /// alpha^k as a field element (k < d stays in the basis; larger k is
    /// reduced through the minimal polynomial).
    pub fn alpha_power(base: Arc<AlgebraicNumber>, k: usize) -> Self {
        let d = base.degree();
        if k < d {
            let mut e = vec![BigInt::zero(); d];
            e[k] = BigInt::one();
            return FieldElement {
                base,
                e,
                l: BigInt::one(),
            };
        }
        let mut x = Self::alpha_power(base, d - 1);
        for _ in (d - 1)..k {
            x = x.mul_alpha();
        }
        x
    }

    /// Parse `(e0,e1,...)/L`, `(e0,e1,...)`, `p/q`, a decimal like `0.25`,
    /// or a plain integer.
    pub fn parse(base: Arc<AlgebraicNumber>, s: &str) -> Result<Self> {
        let t = s.trim();
        if let Some(rest) = t.strip_prefix('(') {
            let (vec_part, den_part) = match rest.split_once(')') {
                Some((v, tail)) => {
                    let tail = tail.trim();
                    if tail.is_empty() {
                        (v, None)
                    } else if let Some(den) = tail.strip_prefix('/') {
                        (v, Some(den.trim()))
                    } else {
                        return Err(Error::Input(format!("bad field element: {s}")));
                    }
                }
                None => return Err(Error::Input(format!("unterminated vector: {s}"))),
            };
            let e: Result<Vec<BigInt>> = vec_part
                .split(',')
                .map(|p| {
                    p.trim()
                        .parse::<BigInt>()
                        .map_err(|_| Error::Input(format!("bad coordinate: {p}")))
                })
                .collect();
            let l = match den_part {
                Some(d) => d
                    .parse::<BigInt>()
                    .map_err(|_| Error::Input(format!("bad denominator: {d}")))?,
                None => BigInt::one(),
            };
            return Self::from_coords(base, e?, l);
        }
        let q = parse_rational(t)?;
        Ok(Self::from_rational(base, q))
    }

    fn reduce_content(&mut self) {
        let mut g = self.l.clone();
        for c in &self.e {
            g = g.gcd(c);
        }
        if !g.is_one() && !g.is_zero() {
            for c in &mut self.e {
                *c /= &g;
            }
            self.l /= &g;
        }
        if self.is_zero() {
            self.l = BigInt::one();
        }
    }

    pub fn base(&self) -> &Arc<AlgebraicNumber> {
        &self.base
    }

    pub fn coords(&self) -> (&[BigInt], &BigInt) {
        (&self.e, &self.l)
    }

    pub fn coords_rational(&self) -> Vec<BigRational> {
        self.e
            .iter()
            .map(|c| BigRational::new(c.clone(), self.l.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().all(|c| c.is_zero())
    }

    /// True when the element lies in Q (all alpha coordinates vanish).
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.e[1..].iter().all(|c| c.is_zero()) {
            Some(BigRational::new(self.e[0].clone(), self.l.clone()))
        } else {
            None
        }
    }

    fn check_base(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.base, &other.base)
            || self.base.minpoly() == other.base.minpoly()
        {
            Ok(())
        } else {
            Err(Error::BaseMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_base(other)?;
        let a = self.coords_rational();
        let b = other.coords_rational();
        let coords = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        Ok(Self::normalized(self.base.clone(), coords))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_base(other)?;
        let a = self.coords_rational();
        let b = other.coords_rational();
        let coords = a.iter().zip(&b).map(|(x, y)| x - y).collect();
        Ok(Self::normalized(self.base.clone(), coords))
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        let coords = self.coords_rational().iter().map(|x| x * q).collect();
        Self::normalized(self.base.clone(), coords)
    }

    pub fn scale_int(&self, n: &BigInt) -> Self {
        self.scale(&BigRational::from_integer(n.clone()))
    }

    pub fn neg(&self) -> Self {
        FieldElement {
            base: self.base.clone(),
            e: self.e.iter().map(|c| -c).collect(),
            l: self.l.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_base(other)?;
        let d = self.base.degree();
        let a = self.coords_rational();
        let b = other.coords_rational();
        let mut prod = vec![BigRational::zero(); 2 * d - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        reduce_mod_minpoly(&self.base, &mut prod);
        prod.truncate(d);
        Ok(Self::normalized(self.base.clone(), prod))
    }

    /// Multiply by alpha in place of a full product.
    pub fn mul_alpha(&self) -> Self {
        let d = self.base.degree();
        let mut prod = vec![BigRational::zero(); d + 1];
        for (i, x) in self.coords_rational().into_iter().enumerate() {
            prod[i + 1] = x;
        }
        reduce_mod_minpoly(&self.base, &mut prod);
        prod.truncate(d);
        Self::normalized(self.base.clone(), prod)
    }

    pub fn pow(&self, mut k: u64) -> Result<Self> {
        let mut acc = Self::from_rational(self.base.clone(), BigRational::one());
        let mut sq = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&sq)?;
            }
            k >>= 1;
            if k > 0 {
                sq = sq.mul(&sq)?;
            }
        }
        Ok(acc)
    }

    /// Integer sequence b_n = sum_k e_k * p_{n+k}, where p_j is the j-th
    /// power sum of the conjugates; equals the trace of (l * self) * alpha^n.
    /// Requires alpha to be an algebraic integer.
    pub fn trace_sequence(&self, count: usize) -> Result<Vec<BigInt>> {
        if !self.base.minpoly().is_monic() {
            return Err(Error::NotAlgebraicInteger);
        }
        let d = self.base.degree();
        let ps = power_sums(&self.base, count + d);
        let mut out = Vec::with_capacity(count);
        for n in 0..count {
            let mut b = BigInt::zero();
            for (k, e) in self.e.iter().enumerate() {
                b += e * &ps[n + k];
            }
            out.push(b);
        }
        Ok(out)
    }
}

fn parse_rational(t: &str) -> Result<BigRational> {
    if let Some((num, den)) = t.split_once('/') {
        let n = num
            .trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Input(format!("bad numerator: {num}")))?;
        let d = den
            .trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Input(format!("bad denominator: {den}")))?;
        if d.is_zero() {
            return Err(Error::Input("zero denominator".into()));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int_part, frac_part)) = t.split_once('.') {
        let neg = int_part.trim_start().starts_with('-');
        let i = if int_part.trim() == "-" || int_part.trim().is_empty() {
            BigInt::zero()
        } else {
            int_part
                .trim()
                .parse::<BigInt>()
                .map_err(|_| Error::Input(format!("bad number: {t}")))?
        };
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Input(format!("bad number: {t}")));
        }
        let f = frac_part
            .parse::<BigInt>()
            .map_err(|_| Error::Input(format!("bad number: {t}")))?;
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let frac = BigRational::new(f, scale);
        let whole = BigRational::from_integer(i.abs());
        let mag = whole + frac;
        return Ok(if neg { -mag } else { mag });
    }
    t.parse::<BigInt>()
        .map(BigRational::from_integer)
        .map_err(|_| Error::Input(format!("bad number: {t}")))
}

/// Reduce a power-basis expansion of length up to 2d-1 modulo the minimal
/// polynomial: alpha^d = -(a_0 + ... + a_{d-1} alpha^{d-1}) / a_d.
fn reduce_mod_minpoly(base: &AlgebraicNumber, prod: &mut Vec<BigRational>) {
    let a = base.minpoly().coeffs();
    let d = base.degree();
    let ad = BigRational::from_integer(a[d].clone());
    for i in (d..prod.len()).rev() {
        let t = std::mem::replace(&mut prod[i], BigRational::zero());
        if t.is_zero() {
            continue;
        }
        let t = t / &ad;
        for j in 0..d {
            let adj = &t * BigRational::from_integer(a[j].clone());
            prod[i - d + j] -= adj;
        }
    }
}

/// Power sums p_j = sum of j-th powers of all conjugates, j = 0..count-1,
/// by Newton's identities and then the coefficient recurrence. Integer for
/// monic minimal polynomials; exact rationals otherwise.
pub fn power_sums(base: &AlgebraicNumber, count: usize) -> Vec<BigInt> {
    assert!(base.minpoly().is_monic());
    let a = base.minpoly().coeffs();
    let d = base.degree();
    let mut ps: Vec<BigInt> = Vec::with_capacity(count);
    ps.push(BigInt::from(d as u64));
    for k in 1..count {
        let mut s = BigInt::zero();
        if k <= d {
            // Newton: p_k + sum_{i=1}^{k-1} a_{d-i} p_{k-i} + k a_{d-k} = 0
            for i in 1..k {
                s += &a[d - i] * &ps[k - i];
            }
            s += BigInt::from(k as u64) * &a[d - k];
        } else {
            // linear recurrence from the minimal polynomial
            for i in 1..=d {
                s += &a[d - i] * &ps[k - i];
            }
        }
        ps.push(-s);
    }
    ps
}
