//! Simultaneous complex root approximation (Aberth-Ehrlich) in
//! big-integer fixed point.
//!
//! A value `v` is stored as the integer `round(v * 2^prec)`. Coefficients
//! are exact integers, so Horner evaluation only loses one ulp per step.
//! Results here are approximations; callers must confirm anything they
//! derive from them with exact arithmetic.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::poly::IntPolynomial;
use crate::arith::Rational;

/// Bits of accuracy a root must reach before it is frozen.
pub const TARGET_BITS: u64 = 200;
const MAX_ITERATIONS: usize = 4000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    pub re: BigInt,
    pub im: BigInt,
}

impl Complex {
    fn add(&self, o: &Complex) -> Complex {
        Complex {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }

    fn sub(&self, o: &Complex) -> Complex {
        Complex {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }

    fn bits(&self) -> u64 {
        self.re.bits().max(self.im.bits())
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

/// Fixed-point context with `prec` fractional bits.
#[derive(Clone, Copy, Debug)]
pub struct FixedPoint {
    pub prec: u32,
}

impl FixedPoint {
    fn from_int(&self, n: &BigInt) -> Complex {
        Complex {
            re: n << self.prec,
            im: BigInt::zero(),
        }
    }

    fn one(&self) -> Complex {
        self.from_int(&BigInt::from(1))
    }

    fn mul(&self, a: &Complex, b: &Complex) -> Complex {
        Complex {
            re: (&a.re * &b.re - &a.im * &b.im) >> self.prec,
            im: (&a.re * &b.im + &a.im * &b.re) >> self.prec,
        }
    }

    fn div(&self, a: &Complex, b: &Complex) -> Option<Complex> {
        let den = &b.re * &b.re + &b.im * &b.im;
        if den.is_zero() {
            return None;
        }
        Some(Complex {
            re: ((&a.re * &b.re + &a.im * &b.im) << self.prec) / &den,
            im: ((&a.im * &b.re - &a.re * &b.im) << self.prec) / &den,
        })
    }

    fn from_f64(&self, re: f64, im: f64) -> Complex {
        let conv = |v: f64| {
            let scaled = (v * (1u64 << 52) as f64).round() as i128;
            let big = BigInt::from(scaled);
            if self.prec >= 52 {
                big << (self.prec - 52)
            } else {
                big >> (52 - self.prec)
            }
        };
        Complex {
            re: conv(re),
            im: conv(im),
        }
    }

    /// The exact rational `v / 2^prec`.
    pub fn to_rational(&self, v: &BigInt) -> Rational {
        Rational::new(v.clone(), BigInt::from(1) << self.prec)
    }

    /// `|v| < 2^-bits` for a stored value `v`.
    pub fn below(&self, v: &BigInt, bits: u64) -> bool {
        v.bits() + bits <= self.prec as u64
    }
}

#[derive(Debug, Clone)]
pub struct RootApproximations {
    pub fixed: FixedPoint,
    pub roots: Vec<Complex>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoConvergence {
    pub degree: usize,
    pub iterations: usize,
}

/// All complex roots of a squarefree integer polynomial, each to roughly
/// [`TARGET_BITS`] bits of absolute accuracy.
pub fn approximate_roots(f: &IntPolynomial) -> Result<RootApproximations, NoConvergence> {
    let n = f.degree().unwrap_or(0);
    let fixed = FixedPoint {
        prec: (TARGET_BITS as u32 + 64 + 4 * n as u32).max(320),
    };
    if n == 0 {
        return Ok(RootApproximations {
            fixed,
            roots: Vec::new(),
        });
    }
    let coeffs: Vec<Complex> = f.coeffs().iter().map(|c| fixed.from_int(c)).collect();
    let mut roots = initial_guesses(f, fixed);
    let mut done = vec![false; n];

    for _ in 0..MAX_ITERATIONS {
        for k in 0..n {
            if done[k] {
                continue;
            }
            let (value, slope) = horner(&fixed, &coeffs, &roots[k]);
            if value.is_zero() {
                done[k] = true;
                continue;
            }
            let Some(newton) = fixed.div(&value, &slope) else {
                roots[k] = roots[k].add(&nudge(&fixed, k));
                continue;
            };
            let mut repulsion = Complex {
                re: BigInt::zero(),
                im: BigInt::zero(),
            };
            let mut collided = false;
            for j in 0..n {
                if j == k {
                    continue;
                }
                match fixed.div(&fixed.one(), &roots[k].sub(&roots[j])) {
                    Some(t) => repulsion = repulsion.add(&t),
                    None => collided = true,
                }
            }
            if collided {
                roots[k] = roots[k].add(&nudge(&fixed, k));
                continue;
            }
            let denom = fixed.one().sub(&fixed.mul(&newton, &repulsion));
            let step = fixed.div(&newton, &denom).unwrap_or(newton);
            roots[k] = roots[k].sub(&step);
            if step.bits() + TARGET_BITS + 8 <= fixed.prec as u64 {
                done[k] = true;
            }
        }
        if done.iter().all(|&d| d) {
            return Ok(RootApproximations { fixed, roots });
        }
    }
    Err(NoConvergence {
        degree: n,
        iterations: MAX_ITERATIONS,
    })
}

fn horner(fixed: &FixedPoint, coeffs: &[Complex], z: &Complex) -> (Complex, Complex) {
    let mut value = coeffs.last().cloned().expect("nonempty");
    let mut slope = Complex {
        re: BigInt::zero(),
        im: BigInt::zero(),
    };
    for c in coeffs.iter().rev().skip(1) {
        slope = fixed.mul(&slope, z).add(&value);
        value = fixed.mul(&value, z).add(c);
    }
    (value, slope)
}

fn nudge(fixed: &FixedPoint, k: usize) -> Complex {
    let shift = fixed.prec / 3;
    let unit = BigInt::from(1) << shift;
    Complex {
        re: &unit * BigInt::from(k as i64 + 1),
        im: unit,
    }
}

/// Points on a circle around the root centroid, radius from the Fujiwara
/// bound, with an angular offset so no seed sits on the real axis.
fn initial_guesses(f: &IntPolynomial, fixed: FixedPoint) -> Vec<Complex> {
    let n = f.degree().unwrap_or(0);
    let lead = f.leading();
    let lead_bits = lead.bits() as f64;
    let mut log_radius = f64::NEG_INFINITY;
    for k in 1..=n {
        let c = f.coeff(n - k);
        if c.is_zero() {
            continue;
        }
        let ratio_bits = c.bits() as f64 - lead_bits + 1.0;
        log_radius = log_radius.max(ratio_bits / k as f64);
    }
    let radius = if log_radius.is_finite() {
        2f64.powf(log_radius.max(-8.0) + 1.0)
    } else {
        1.0
    };
    let centroid = Rational::new(-f.coeff(n - 1), lead * BigInt::from(n));
    let c = centroid.to_f64().unwrap_or(0.0);
    (0..n)
        .map(|k| {
            let theta = 2.0 * PI * k as f64 / n as f64 + 0.4;
            fixed.from_f64(c + radius * 0.5 * theta.cos(), radius * 0.5 * theta.sin())
        })
        .collect()
}

/// Best rational approximation with denominator at most `max_den`, accepted
/// only if it lies within `2^-tol_bits` of `v / 2^prec`.
pub fn reconstruct_rational(
    fixed: &FixedPoint,
    v: &BigInt,
    max_den: &BigInt,
    tol_bits: u64,
) -> Option<Rational> {
    let target = fixed.to_rational(v);
    let one = BigInt::from(1);
    let (mut h0, mut h1) = (BigInt::zero(), one.clone());
    let (mut k0, mut k1) = (one.clone(), BigInt::zero());
    let mut x = target.clone();
    loop {
        let a = x.floor().to_integer();
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        if &k2 > max_den {
            return None;
        }
        let candidate = Rational::new(h2.clone(), k2.clone());
        let err = (&candidate - &target).abs();
        if err * Rational::from_integer(BigInt::from(1) << tol_bits) < Rational::from_integer(one.clone()) {
            return Some(candidate);
        }
        let frac = &x - Rational::from_integer(a);
        if frac.is_zero() {
            return None;
        }
        x = frac.recip();
        (h0, h1) = (h1, h2);
        (k0, k1) = (k1, k2);
    }
}
