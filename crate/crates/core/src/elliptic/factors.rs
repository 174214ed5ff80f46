//! Rational roots, irreducible factors of degree at most two, and roots
//! lying in a fixed quadratic field.
//!
//! Quadratic factors are located numerically: approximate every complex
//! root, pair them up, and recognise the pair's sum and product as small
//! rationals. A candidate is only reported after it divides the input
//! exactly, so the numerics can miss nothing that converged and invent
//! nothing.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::numeric::{approximate_roots, reconstruct_rational};
use super::poly::{IntPolynomial, RatPoly};
use super::EllipticError;
use crate::arith::{factorize, rational_sqrt, squarefree_decompose, sqrt_in_field, QuadElem, Rational};

/// Absolute tolerance (in bits) for recognising sums and products of root
/// pairs as rationals.
const RECOGNITION_BITS: u64 = 96;

/// Every rational root of `f`, ascending, found with the rational root
/// theorem on the primitive form and checked by exact evaluation.
pub fn rational_roots(f: &IntPolynomial) -> Result<Vec<Rational>, EllipticError> {
    if f.is_zero() {
        return Err(EllipticError::ZeroPolynomial);
    }
    let mut g = f.primitive();
    let mut roots = BTreeSet::new();
    let low = g.coeffs().iter().take_while(|c| c.is_zero()).count();
    if low > 0 {
        roots.insert(Rational::zero());
        g = IntPolynomial::new(g.coeffs()[low..].to_vec());
    }
    if g.degree().unwrap_or(0) == 0 {
        return Ok(roots.into_iter().collect());
    }
    let numerators = factorize(&g.coeff(0))?.divisors();
    let denominators = factorize(&g.leading())?.divisors();
    let at_one = g.eval(&BigInt::one());
    let at_minus_one = g.eval(&-BigInt::one());
    // If p/q is a root then (q - p) | f(1) and (q + p) | f(-1).
    let passes = |value: &BigInt, modulus: BigInt| {
        if modulus.is_zero() {
            value.is_zero()
        } else {
            (value % modulus).is_zero()
        }
    };
    for q in &denominators {
        for p in &numerators {
            if !p.gcd(q).is_one() {
                continue;
            }
            for p in [p.clone(), -p] {
                if !passes(&at_one, q - &p) || !passes(&at_minus_one, q + &p) {
                    continue;
                }
                let r = Rational::new(p, q.clone());
                if g.vanishes_at(&r) {
                    roots.insert(r);
                }
            }
        }
    }
    Ok(roots.into_iter().collect())
}

/// Largest squarefree divisor `f / gcd(f, f')`, as a primitive integer
/// polynomial. A gcd modulo a large prime settles the common case cheaply.
pub fn squarefree_part(f: &IntPolynomial) -> IntPolynomial {
    let g = f.primitive();
    if g.degree().unwrap_or(0) < 2 || coprime_mod_p(&g, &g.derivative()) {
        return g;
    }
    let rat = g.to_rat();
    let common = rat.gcd(&rat.derivative());
    rat.div_rem(&common).0.to_primitive_int()
}

const MERSENNE_61: u64 = (1 << 61) - 1;

fn coprime_mod_p(a: &IntPolynomial, b: &IntPolynomial) -> bool {
    let reduce = |f: &IntPolynomial| -> Vec<u64> {
        let m = BigInt::from(MERSENNE_61);
        let mut v: Vec<u64> = f
            .coeffs()
            .iter()
            .map(|c| c.mod_floor(&m).to_u64().expect("reduced"))
            .collect();
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    };
    let (mut x, mut y) = (reduce(a), reduce(b));
    // Degrees must survive reduction for the test to mean anything.
    if x.len() != a.coeffs().len() || y.len() != b.coeffs().len() {
        return false;
    }
    while !y.is_empty() {
        let r = rem_mod_p(&x, &y);
        x = y;
        y = r;
    }
    x.len() == 1
}

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % MERSENNE_61 as u128) as u64
}

fn inv_mod(a: u64) -> u64 {
    let (mut base, mut exp, mut acc) = (a, MERSENNE_61 - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base);
        }
        base = mul_mod(base, base);
        exp >>= 1;
    }
    acc
}

fn rem_mod_p(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let inv = inv_mod(b[db]);
    while r.len() > db {
        let top = r.len() - 1;
        let c = mul_mod(r[top], inv);
        let shift = top - db;
        for (j, bj) in b.iter().enumerate() {
            let t = mul_mod(c, *bj);
            r[shift + j] = (r[shift + j] + MERSENNE_61 - t) % MERSENNE_61;
        }
        while r.last() == Some(&0) {
            r.pop();
        }
    }
    r
}

/// True when the primitive quadratic has no rational root.
fn is_irreducible_quadratic(q: &IntPolynomial) -> bool {
    let (a, b, c) = (q.coeff(2), q.coeff(1), q.coeff(0));
    let disc = &b * &b - BigInt::from(4) * a * c;
    rational_sqrt(&Rational::from_integer(disc)).is_none()
}

/// The irreducible factors of `f` over Q of degree one or two, each as a
/// primitive integer polynomial with positive leading coefficient.
pub fn low_degree_factors(f: &IntPolynomial) -> Result<Vec<IntPolynomial>, EllipticError> {
    let mut found = BTreeSet::new();
    for r in rational_roots(f)? {
        found.insert(IntPolynomial::new(vec![-r.numer().clone(), r.denom().clone()]));
    }
    for q in quadratic_factors(f)? {
        found.insert(q);
    }
    let mut out: Vec<_> = found.into_iter().collect();
    out.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.cmp(b)));
    Ok(out)
}

/// Irreducible quadratic factors of `f`.
pub fn quadratic_factors(f: &IntPolynomial) -> Result<Vec<IntPolynomial>, EllipticError> {
    if f.is_zero() {
        return Err(EllipticError::ZeroPolynomial);
    }
    let g = squarefree_part(f);
    if g.degree().unwrap_or(0) < 2 {
        return Ok(Vec::new());
    }
    let exact = g.to_rat();
    if g.degree() == Some(2) {
        return Ok(if is_irreducible_quadratic(&g) { vec![g] } else { Vec::new() });
    }
    let approx = approximate_roots(&g).map_err(|e| EllipticError::RootIsolation {
        degree: e.degree,
        iterations: e.iterations,
    })?;
    let fixed = approx.fixed;
    let lead = g.leading().abs();
    let mut found = BTreeSet::new();
    let roots = &approx.roots;
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            let sum_im = &roots[i].im + &roots[j].im;
            if !fixed.below(&sum_im, RECOGNITION_BITS) {
                continue;
            }
            let prod_re = (&roots[i].re * &roots[j].re - &roots[i].im * &roots[j].im) >> fixed.prec;
            let prod_im = (&roots[i].re * &roots[j].im + &roots[i].im * &roots[j].re) >> fixed.prec;
            if !fixed.below(&prod_im, RECOGNITION_BITS) {
                continue;
            }
            let sum_re = &roots[i].re + &roots[j].re;
            let Some(s) = reconstruct_rational(&fixed, &sum_re, &lead, RECOGNITION_BITS) else {
                continue;
            };
            let Some(p) = reconstruct_rational(&fixed, &prod_re, &lead, RECOGNITION_BITS) else {
                continue;
            };
            let monic = RatPoly::new(vec![p, -s, Rational::one()]);
            let candidate = monic.to_primitive_int();
            if is_irreducible_quadratic(&candidate) && monic.divides(&exact) {
                found.insert(candidate);
            }
        }
    }
    Ok(found.into_iter().collect())
}

/// Roots in Q(sqrt d) of a polynomial with rational coefficients.
pub fn roots_in_quadratic_field(f: &IntPolynomial, d: &BigInt) -> Result<Vec<QuadElem>, EllipticError> {
    let field = QuadElem::zero(d)?;
    let mut out = Vec::new();
    for factor in low_degree_factors(f)? {
        match factor.degree() {
            Some(1) => out.push(field.embed(&Rational::new(-factor.coeff(0), factor.coeff(1)))),
            Some(2) => {
                let (a, b, c) = (factor.coeff(2), factor.coeff(1), factor.coeff(0));
                let disc = &b * &b - BigInt::from(4) * &a * &c;
                if squarefree_decompose(&disc)?.core != *field.radicand() {
                    continue;
                }
                let root_disc = sqrt_in_field(&Rational::from_integer(disc), d)
                    .expect("discriminant lies in the square class of d");
                let two_a = Rational::from_integer(BigInt::from(2) * a);
                let minus_b = field.embed(&Rational::from_integer(-b));
                for r in [&minus_b + &root_disc, &minus_b - &root_disc] {
                    out.push(r.scale(&two_a.recip()));
                }
            }
            _ => unreachable!("low_degree_factors returns degrees one and two"),
        }
    }
    Ok(out)
}

/// Roots in Q(sqrt d) of `sum coeffs[i] x^i` with coefficients in that
/// field. Works through the norm polynomial `f * conj(f)`, which has
/// rational coefficients and contains every root of `f`.
pub fn roots_in_field(coeffs: &[QuadElem], d: &BigInt) -> Result<Vec<QuadElem>, EllipticError> {
    let field = QuadElem::zero(d)?;
    if coeffs.iter().any(|c| !c.same_field(&field)) {
        return Err(EllipticError::FieldMismatch);
    }
    let real = RatPoly::new(coeffs.iter().map(|c| c.rational_part().clone()).collect());
    let imag = RatPoly::new(coeffs.iter().map(|c| c.irrational_part().clone()).collect());
    if real.is_zero() && imag.is_zero() {
        return Err(EllipticError::ZeroPolynomial);
    }
    let norm = if imag.is_zero() {
        real
    } else {
        let dd = RatPoly::new(vec![Rational::from_integer(d.clone())]);
        &(&real * &real) - &(&dd * &(&imag * &imag))
    };
    let candidates = roots_in_quadratic_field(&norm.to_primitive_int(), d)?;
    let eval = |x: &QuadElem| {
        coeffs
            .iter()
            .rev()
            .fold(field.clone(), |acc, c| &acc * x + c.clone())
    };
    let mut out: Vec<QuadElem> = Vec::new();
    for x in candidates {
        if eval(&x).is_zero() && !out.contains(&x) {
            out.push(x);
        }
    }
    Ok(out)
}
