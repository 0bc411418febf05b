//! High-precision transcendental evaluation (arccos, sin/cos, sqrt, pi)
//! on dyadic values, backed by astro-float. These paths produce analysis
//! evidence at a stated working precision; the certified floor machinery
//! never depends on them.

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::{BigInt, BigUint, Sign as NumSign};

use crate::dyadic::Dyadic;

const RM: RoundingMode = RoundingMode::ToEven;

pub struct Transcend {
    cc: Consts,
}

impl Default for Transcend {
    fn default() -> Self {
        Self::new()
    }
}

pub fn dyadic_to_bigfloat(d: &Dyadic) -> BigFloat {
    if d.is_zero() {
        return BigFloat::from_f64(0.0, 64);
    }
    let mant = d.mant();
    let (sign, mag) = match mant.sign() {
        NumSign::Minus => (Sign::Neg, mant.magnitude().clone()),
        _ => (Sign::Pos, mant.magnitude().clone()),
    };
    let bits = mag.bits();
    // align the most significant bit to a word boundary
    let shift = (64 - (bits % 64)) % 64;
    let aligned: BigUint = &mag << shift;
    let words = aligned.to_u64_digits();
    let e = bits as i64 + d.exp();
    BigFloat::from_words(&words, sign, e as astro_float::Exponent)
}

pub fn bigfloat_to_dyadic(f: &BigFloat) -> Dyadic {
    if f.is_zero() {
        return Dyadic::zero();
    }
    let (words, n, sign, e, _inexact) = f.as_raw_parts().expect("finite BigFloat");
    let total_bits = words.len() as u64 * 64;
    let mut mag = BigUint::default();
    for w in words.iter().rev() {
        mag = (mag << 64) | BigUint::from(*w);
    }
    let _ = n;
    let mant = match sign {
        Sign::Neg => BigInt::from_biguint(NumSign::Minus, mag),
        Sign::Pos => BigInt::from_biguint(NumSign::Plus, mag),
    };
    Dyadic::new(mant, e as i64 - total_bits as i64)
}

impl Transcend {
    pub fn new() -> Self {
        Transcend {
            cc: Consts::new().expect("constants cache"),
        }
    }

    pub fn pi(&mut self, bits: u32) -> Dyadic {
        bigfloat_to_dyadic(&self.cc.pi(bits as usize, RM))
    }

    pub fn acos(&mut self, x: &Dyadic, bits: u32) -> Dyadic {
        let f = dyadic_to_bigfloat(x);
        bigfloat_to_dyadic(&f.acos(bits as usize, RM, &mut self.cc))
    }

    pub fn sqrt(&mut self, x: &Dyadic, bits: u32) -> Dyadic {
        let f = dyadic_to_bigfloat(x);
        bigfloat_to_dyadic(&f.sqrt(bits as usize, RM))
    }

    pub fn sin_cos(&mut self, x: &Dyadic, bits: u32) -> (Dyadic, Dyadic) {
        let f = dyadic_to_bigfloat(x);
        let s = f.sin(bits as usize, RM, &mut self.cc);
        let c = f.cos(bits as usize, RM, &mut self.cc);
        (bigfloat_to_dyadic(&s), bigfloat_to_dyadic(&c))
    }

    /// sin and cos of `k * phi`, with the argument reduced modulo 2*pi at
    /// extended precision before evaluation (prevents phase drift for
    /// large k).
    pub fn sin_cos_multiple(&mut self, phi: &Dyadic, k: &BigInt, bits: u32) -> (Dyadic, Dyadic) {
        let kd = Dyadic::from_bigint(k.clone());
        let prod = kd.mul(phi);
        // extended precision: enough for the integer part of k*phi plus the target
        let extra = if prod.is_zero() { 0 } else { prod.magnitude_exp().max(0) as u32 };
        let work = bits + extra + 64;
        let two_pi = self.pi(work).mul_pow2(1);
        // prod mod 2pi, exactly representable in dyadics
        let q = prod
            .div_approx(&two_pi, (extra + 64) as u64, crate::dyadic::Round::Down)
            .floor();
        let reduced = prod.sub(&Dyadic::from_bigint(q).mul(&two_pi));
        self.sin_cos(&reduced, bits)
    }
}
