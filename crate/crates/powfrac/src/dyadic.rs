//! Dyadic rationals `mant * 2^exp` with exact ring operations and explicit
//! directed rounding. All certified interval work in the orbit engine runs
//! on this type; conversions to `BigRational` are exact.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
}

/// Exact dyadic rational `mant * 2^exp`, normalized so that `mant` is odd
/// (or zero with `exp == 0`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            mant: BigInt::one(),
            exp: 0,
        }
    }

    pub fn new(mant: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Dyadic::new(n, 0)
    }

    pub fn from_i64(n: i64) -> Self {
        Dyadic::new(BigInt::from(n), 0)
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
    }

    pub fn mant(&self) -> &BigInt {
        &self.mant
    }

    pub fn exp(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn neg(&self) -> Self {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    pub fn add(&self, rhs: &Dyadic) -> Self {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(rhs.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &rhs.mant << (rhs.exp - e) as u64;
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, rhs: &Dyadic) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Dyadic) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            mant: &self.mant * &rhs.mant,
            exp: self.exp + rhs.exp,
        }
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            mant: self.mant.clone(),
            exp: self.exp + k,
        }
    }

    /// Number of significant bits of the mantissa.
    pub fn mant_bits(&self) -> u64 {
        self.mant.bits()
    }

    /// floor(log2 |self|): position of the most significant bit.
    pub fn magnitude_exp(&self) -> i64 {
        debug_assert!(!self.is_zero());
        self.exp + self.mant.bits() as i64 - 1
    }

    /// Reduce the mantissa to at most `bits` significant bits, rounding in
    /// the given direction. Exact when the mantissa already fits.
    pub fn truncate(&self, bits: u64, round: Round) -> Self {
        if self.is_zero() {
            return Dyadic::zero();
        }
        let nbits = self.mant.bits();
        if nbits <= bits {
            return self.clone();
        }
        let drop = (nbits - bits) as i64;
        let shifted = &self.mant >> drop as u64;
        let exact = (&shifted << drop as u64) == self.mant;
        let mut m = shifted;
        if !exact && round == Round::Up {
            m += 1;
        }
        Dyadic::new(m, self.exp + drop)
    }

    /// floor(self) as an exact integer.
    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            // arithmetic shift right floors toward -infinity for BigInt
            &self.mant >> (-self.exp) as u64
        }
    }

    /// floor(self * 2^k).
    pub fn floor_scaled(&self, k: i64) -> BigInt {
        self.mul_pow2(k).floor()
    }

    pub fn cmp(&self, rhs: &Dyadic) -> Ordering {
        match (self.mant.sign(), rhs.mant.sign()) {
            (Sign::Minus, Sign::NoSign) | (Sign::Minus, Sign::Plus) | (Sign::NoSign, Sign::Plus) => {
                return Ordering::Less
            }
            (Sign::Plus, Sign::NoSign) | (Sign::Plus, Sign::Minus) | (Sign::NoSign, Sign::Minus) => {
                return Ordering::Greater
            }
            (Sign::NoSign, Sign::NoSign) => return Ordering::Equal,
            _ => {}
        }
        let e = self.exp.min(rhs.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &rhs.mant << (rhs.exp - e) as u64;
        a.cmp(&b)
    }

    pub fn lt(&self, rhs: &Dyadic) -> bool {
        self.cmp(rhs) == Ordering::Less
    }

    pub fn le(&self, rhs: &Dyadic) -> bool {
        self.cmp(rhs) != Ordering::Greater
    }

    /// Approximate division to `bits` significant bits of the quotient,
    /// rounded in the given direction.
    pub fn div_approx(&self, rhs: &Dyadic, bits: u64, round: Round) -> Self {
        assert!(!rhs.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Dyadic::zero();
        }
        // scale numerator so the integer quotient carries `bits + 2` bits
        let shift = bits as i64 + 2 + rhs.mant.bits() as i64 - self.mant.bits() as i64;
        let num = if shift >= 0 {
            &self.mant << shift as u64
        } else {
            &self.mant >> (-shift) as u64
        };
        let (q, r) = num_integer::Integer::div_rem(&num, &rhs.mant);
        let exact = r.is_zero();
        let mut q = q;
        if !exact {
            // div_rem truncates toward zero; fix to the requested direction
            let q_is_floor = self.mant.sign() == rhs.mant.sign();
            match round {
                Round::Down => {
                    if !q_is_floor {
                        q -= 1;
                    }
                }
                Round::Up => {
                    if q_is_floor {
                        q += 1;
                    }
                }
            }
        }
        Dyadic::new(q, self.exp - rhs.exp - shift)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    /// Nearest dyadic at `bits` precision below/above the rational `r`.
    pub fn from_rational(r: &BigRational, bits: u64, round: Round) -> Self {
        if r.is_zero() {
            return Dyadic::zero();
        }
        // exact when the denominator is a power of two and fits
        let numer = r.numer();
        let denom = r.denom();
        let dtz = denom.trailing_zeros().unwrap_or(0);
        if (denom >> dtz) == BigInt::one() {
            return Dyadic::new(numer.clone(), -(dtz as i64)).truncate(bits, round);
        }
        let mag = numer.bits() as i64 - denom.bits() as i64;
        let shift = bits as i64 + 2 - mag;
        let num = if shift >= 0 {
            numer << shift as u64
        } else {
            numer >> (-shift) as u64
        };
        let (q, rem) = num_integer::Integer::div_mod_floor(&num, denom);
        let mut q = q;
        if !rem.is_zero() && round == Round::Up {
            q += 1;
        }
        Dyadic::new(q, -shift)
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits();
        if bits <= 53 && self.exp.abs() < 900 {
            return self.mant.to_f64().unwrap_or(f64::NAN) * (self.exp as f64).exp2();
        }
        let top = self.truncate(53, Round::Down);
        top.mant.to_f64().unwrap_or(f64::NAN) * (top.exp as f64).exp2()
    }
}
