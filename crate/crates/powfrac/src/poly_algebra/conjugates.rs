//! Conjugate enclosures: Durand-Kerner seeds in f64, polished by complex
//! Newton iteration on dyadics. Each box carries the rigorous inclusion
//! radius d * |p(z)/p'(z)| (every point has a root within that distance of
//! it), so disjoint boxes each trap exactly one conjugate. The certified
//! inside/on/outside counts come from the exact circle machinery, not from
//! these boxes.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::dyadic::{Dyadic, Round};

#[derive(Debug, Clone)]
pub struct ComplexBox {
    pub re: Dyadic,
    pub im: Dyadic,
    /// |root - (re, im)| <= radius
    pub radius: Dyadic,
}

#[derive(Debug, Clone, Copy)]
struct C64 {
    re: f64,
    im: f64,
}

impl C64 {
    fn mul(self, o: C64) -> C64 {
        C64 {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }
    fn sub(self, o: C64) -> C64 {
        C64 {
            re: self.re - o.re,
            im: self.im - o.im,
        }
    }
    fn div(self, o: C64) -> C64 {
        let n = o.re * o.re + o.im * o.im;
        C64 {
            re: (self.re * o.re + self.im * o.im) / n,
            im: (self.im * o.re - self.re * o.im) / n,
        }
    }
    fn norm(self) -> f64 {
        (self.re * self.re + self.im * self.im).sqrt()
    }
}

fn eval_c64(p: &[f64], z: C64) -> C64 {
    let mut acc = C64 { re: 0.0, im: 0.0 };
    for &c in p.iter().rev() {
        acc = acc.mul(z);
        acc.re += c;
    }
    acc
}

/// Durand-Kerner: all roots simultaneously, f64 accuracy.
fn durand_kerner(coeffs: &[BigInt]) -> Vec<C64> {
    let d = coeffs.len() - 1;
    let lead = coeffs[d].to_f64().unwrap();
    let p: Vec<f64> = coeffs.iter().map(|c| c.to_f64().unwrap() / lead).collect();
    // standard non-real, non-unit-modulus seed
    let seed = C64 { re: 0.4, im: 0.9 };
    let mut z: Vec<C64> = (0..d)
        .scan(C64 { re: 1.0, im: 0.0 }, |acc, _| {
            *acc = acc.mul(seed);
            Some(*acc)
        })
        .collect();
    for _ in 0..200 {
        let mut max_step = 0.0f64;
        for i in 0..d {
            let mut denom = C64 { re: 1.0, im: 0.0 };
            for j in 0..d {
                if i != j {
                    denom = denom.mul(z[i].sub(z[j]));
                }
            }
            let delta = eval_c64(&p, z[i]).div(denom);
            z[i] = z[i].sub(delta);
            max_step = max_step.max(delta.norm());
        }
        if max_step < 1e-13 {
            break;
        }
    }
    z
}

#[derive(Debug, Clone)]
struct CDy {
    re: Dyadic,
    im: Dyadic,
}

impl CDy {
    fn mul(&self, o: &CDy) -> CDy {
        CDy {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }
    fn sub(&self, o: &CDy) -> CDy {
        CDy {
            re: self.re.sub(&o.re),
            im: self.im.sub(&o.im),
        }
    }
    fn div_approx(&self, o: &CDy, bits: u64) -> CDy {
        let n = o.re.mul(&o.re).add(&o.im.mul(&o.im));
        let re_num = self.re.mul(&o.re).add(&self.im.mul(&o.im));
        let im_num = self.im.mul(&o.re).sub(&self.re.mul(&o.im));
        CDy {
            re: re_num.div_approx(&n, bits, Round::Down),
            im: im_num.div_approx(&n, bits, Round::Down),
        }
    }
    fn truncate(&self, bits: u64) -> CDy {
        CDy {
            re: self.re.truncate(bits, Round::Down),
            im: self.im.truncate(bits, Round::Down),
        }
    }
    /// Upper bound on the modulus: |re| + |im|.
    fn norm1(&self) -> Dyadic {
        self.re.abs().add(&self.im.abs())
    }
}

fn eval_cdy(coeffs: &[BigInt], z: &CDy) -> CDy {
    let mut acc = CDy {
        re: Dyadic::zero(),
        im: Dyadic::zero(),
    };
    for c in coeffs.iter().rev() {
        acc = acc.mul(z);
        acc.re = acc.re.add(&Dyadic::from_bigint(c.clone()));
    }
    acc
}

/// Polish all roots to roughly `bits` of accuracy and wrap them in boxes
/// with a rigorous inclusion radius.
pub fn conjugate_boxes(coeffs: &[BigInt], bits: u32) -> Vec<ComplexBox> {
    let d = coeffs.len() - 1;
    let deriv: Vec<BigInt> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();
    let seeds = durand_kerner(coeffs);
    let mut out = Vec::with_capacity(d);
    for s in seeds {
        let mut z = CDy {
            re: Dyadic::from_rational(
                &num_rational::BigRational::from_float(s.re).unwrap_or_default(),
                64,
                Round::Down,
            ),
            im: Dyadic::from_rational(
                &num_rational::BigRational::from_float(s.im).unwrap_or_default(),
                64,
                Round::Down,
            ),
        };
        let mut prec = 50u64;
        while prec < bits as u64 + 32 {
            prec *= 2;
            let v = eval_cdy(coeffs, &z);
            let dv = eval_cdy(&deriv, &z);
            if dv.norm1().is_zero() {
                break;
            }
            let delta = v.div_approx(&dv, prec);
            z = z.sub(&delta).truncate(prec);
        }
        let v = eval_cdy(coeffs, &z);
        let dv = eval_cdy(&deriv, &z);
        let radius = if dv.norm1().is_zero() {
            Dyadic::one()
        } else {
            // min distance to a root <= d * |p/p'|; norm1 over-estimates
            // the numerator and we pad the denominator downward
            let q = v.norm1().div_approx(&dv.norm1().mul_pow2(-1), 64, Round::Up);
            q.mul(&Dyadic::from_i64(d as i64))
        };
        out.push(ComplexBox {
            re: z.re,
            im: z.im,
            radius,
        });
    }
    out
}
