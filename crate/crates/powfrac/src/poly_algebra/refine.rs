//! Incremental refinement of an isolated real root to arbitrary precision:
//! Newton steps on dyadic midpoints, certified by sign checks, with
//! bisection as the unconditional fallback.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::dyadic::{Dyadic, Round};

/// Evaluate an integer polynomial at a dyadic point, exactly.
pub fn eval_dyadic(coeffs: &[BigInt], x: &Dyadic) -> Dyadic {
    let mut acc = Dyadic::zero();
    for c in coeffs.iter().rev() {
        acc = acc.mul(x).add(&Dyadic::from_bigint(c.clone()));
    }
    acc
}

fn is_dyadic(r: &BigRational) -> bool {
    use num_traits::One;
    let d = r.denom();
    let tz = d.trailing_zeros().unwrap_or(0);
    (d >> tz) == BigInt::one()
}

fn dyadic_exact(r: &BigRational) -> Dyadic {
    let tz = r.denom().trailing_zeros().unwrap_or(0);
    Dyadic::new(r.numer().clone(), -(tz as i64))
}

fn sign_at(coeffs: &[BigInt], x: &Dyadic) -> i32 {
    let v = eval_dyadic(coeffs, x);
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

/// A simple real root of `poly` trapped in a shrinking dyadic interval.
#[derive(Debug, Clone)]
pub struct RootRefiner {
    poly: Vec<BigInt>,
    deriv: Vec<BigInt>,
    lo: Dyadic,
    hi: Dyadic,
    sign_lo: i32,
    /// Incremented every time the enclosure changes; consumers use it to
    /// invalidate cached powers of the enclosure.
    generation: u64,
    exact: bool,
}

impl RootRefiner {
    /// `lo < root < hi` with a sign change across the interval; endpoints
    /// must not themselves be roots.
    pub fn new(poly: Vec<BigInt>, lo: &BigRational, hi: &BigRational) -> Self {
        let deriv: Vec<BigInt> = poly
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect();
        let eval_rat = |x: &BigRational| -> i32 {
            use num_traits::{Signed, Zero};
            let mut acc = BigRational::zero();
            for c in poly.iter().rev() {
                acc = acc * x + BigRational::from_integer(c.clone());
            }
            if acc.is_zero() {
                0
            } else if acc.is_positive() {
                1
            } else {
                -1
            }
        };
        let slo = eval_rat(lo);
        let shi = eval_rat(hi);
        assert!(slo != 0 && shi == -slo, "endpoints must bracket a sign change");

        enum Snap {
            At(Dyadic),
            ExactRoot(Dyadic),
        }
        // Move an endpoint inward onto a dyadic grid point carrying the same
        // sign; retry on finer grids if the move crosses the root.
        let snap = |from: &BigRational, toward: &BigRational, want: i32| -> Snap {
            if is_dyadic(from) {
                return Snap::At(dyadic_exact(from));
            }
            let width = (toward - from).abs();
            let mut k = 4i64;
            while BigRational::new(BigInt::from(1), BigInt::from(1) << (k as u64)) >= width {
                k += 1;
            }
            k += 2;
            loop {
                let scaled = from * BigRational::from_integer(BigInt::from(1) << (k as u64));
                let fl = scaled.floor().to_integer();
                let grid = if toward > from { fl + BigInt::from(1) } else { fl };
                let cand = Dyadic::new(grid, -k);
                let s = sign_at(&poly, &cand);
                if s == 0 {
                    return Snap::ExactRoot(cand);
                }
                if s == want {
                    return Snap::At(cand);
                }
                k += 4;
            }
        };
        let (dlo, dhi, exact) = match (snap(lo, hi, slo), snap(hi, lo, shi)) {
            (Snap::At(a), Snap::At(b)) => (a, b, false),
            (Snap::ExactRoot(r), _) | (_, Snap::ExactRoot(r)) => (r.clone(), r, true),
        };
        RootRefiner {
            poly,
            deriv,
            lo: dlo,
            hi: dhi,
            sign_lo: if exact { 0 } else { slo },
            generation: 0,
            exact,
        }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn generation(&self) -> u64 {
        self.generation
    }

    pub fn is_exact_point(&self) -> bool {
        self.exact
    }

    /// Current enclosure width as a power-of-two bound: width <= 2^-bits.
    pub fn achieved_bits(&self) -> i64 {
        if self.exact {
            return i64::MAX;
        }
        let w = self.hi.sub(&self.lo);
        if w.is_zero() {
            return i64::MAX;
        }
        -w.magnitude_exp()
    }

    fn bisect_once(&mut self) {
        let half = self.lo.add(&self.hi).mul_pow2(-1);
        let s = sign_at(&self.poly, &half);
        if s == 0 {
            self.lo = half.clone();
            self.hi = half;
            self.exact = true;
        } else if s == self.sign_lo {
            self.lo = half;
        } else {
            self.hi = half;
        }
        self.generation += 1;
    }

    /// Shrink the enclosure until its width is at most 2^-target_bits.
    pub fn refine_to(&mut self, target_bits: u32) {
        if self.exact {
            return;
        }
        let target = target_bits as i64;
        while self.achieved_bits() < target {
            let cur = self.achieved_bits().max(4);
            if !self.try_newton(cur) {
                self.bisect_once();
            }
            if self.exact {
                return;
            }
        }
    }

    /// One certified Newton step, roughly doubling the precision.
    /// Returns false if the candidate interval fails certification.
    fn try_newton(&mut self, cur_bits: i64) -> bool {
        let work = (2 * cur_bits + 32) as u64;
        let mid = self.lo.add(&self.hi).mul_pow2(-1).truncate(work, Round::Down);
        let v = eval_dyadic(&self.poly, &mid);
        if v.is_zero() {
            self.lo = mid.clone();
            self.hi = mid;
            self.exact = true;
            self.generation += 1;
            return true;
        }
        let dv = eval_dyadic(&self.deriv, &mid);
        if dv.is_zero() {
            return false;
        }
        let step = v.div_approx(&dv, work, Round::Down);
        let center = mid.sub(&step).truncate(work + 8, Round::Down);
        let eps = Dyadic::new(BigInt::from(1), -(2 * cur_bits + 8));
        let cand_lo = center.sub(&eps);
        let cand_hi = center.add(&eps);
        // candidate must sit inside the current bracket and re-bracket the root
        if !(self.lo.lt(&cand_lo) && cand_hi.lt(&self.hi)) {
            return false;
        }
        let sl = sign_at(&self.poly, &cand_lo);
        let sh = sign_at(&self.poly, &cand_hi);
        if sl == 0 {
            self.lo = cand_lo.clone();
            self.hi = cand_lo;
            self.exact = true;
        } else if sh == 0 {
            self.lo = cand_hi.clone();
            self.hi = cand_hi;
            self.exact = true;
        } else if sl == self.sign_lo && sh == -self.sign_lo {
            self.lo = cand_lo;
            self.hi = cand_hi;
        } else {
            return false;
        }
        self.generation += 1;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn ip(coeffs: &[i64]) -> Vec<BigInt> {
        coeffs.iter().map(|&c| BigInt::from(c)).collect()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn refine_golden_ratio() {
        let mut r = RootRefiner::new(ip(&[-1, -1, 1]), &rat(1, 1), &rat(2, 1));
        r.refine_to(512);
        assert!(r.achieved_bits() >= 512);
        // (1 + sqrt 5)/2: check against the defining equation at high precision
        let lo = r.lo().to_rational();
        let hi = r.hi().to_rational();
        let v_lo = &lo * &lo - &lo - BigRational::one();
        let v_hi = &hi * &hi - &hi - BigRational::one();
        assert!(v_lo < BigRational::from_integer(0.into()));
        assert!(v_hi > BigRational::from_integer(0.into()));
    }

    #[test]
    fn exact_dyadic_root() {
        // 2z - 3: root 3/2 is dyadic
        let mut r = RootRefiner::new(ip(&[-3, 2]), &rat(1, 1), &rat(2, 1));
        r.refine_to(100);
        assert!(r.is_exact_point());
        assert_eq!(r.lo().to_rational(), rat(3, 2));
    }

    #[test]
    fn refine_is_monotone() {
        let mut r = RootRefiner::new(ip(&[-1, -1, 0, 1]), &rat(1, 1), &rat(2, 1));
        r.refine_to(64);
        let (lo1, hi1) = (r.lo().clone(), r.hi().clone());
        r.refine_to(300);
        assert!(lo1.le(r.lo()) && r.hi().le(&hi1));
    }
}
