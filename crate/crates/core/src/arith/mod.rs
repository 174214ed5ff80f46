//! Exact scalars: big integers, rationals, elements of Q(sqrt d), and the
//! number-theoretic helpers the rest of the crate leans on.

pub mod primes;
pub mod quad;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use primes::{factorize, is_prime, is_prime_u64, primality, Factorization, Primality};
pub use quad::QuadElem;

pub type Integer = BigInt;
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("{0}: input must be nonzero")]
    ZeroInput(&'static str),
    #[error("radicand {0} is not allowed (must reduce to a squarefree value other than 0 and 1)")]
    InvalidRadicand(BigInt),
    #[error("radicand mismatch: sqrt({0}) vs sqrt({1})")]
    RadicandMismatch(BigInt, BigInt),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse {0:?} as an element of Q(sqrt d)")]
    Parse(String),
}

/// `n = core * cofactor^2` with `core` squarefree and carrying the sign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquarefreeDecomposition {
    pub core: BigInt,
    pub cofactor: BigInt,
}

pub fn squarefree_decompose(n: &BigInt) -> Result<SquarefreeDecomposition, ArithError> {
    let f = factorize(n).map_err(|_| ArithError::ZeroInput("squarefree_decompose"))?;
    let mut core = if n.is_negative() {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    let mut cofactor = BigInt::one();
    for (p, e) in &f.factors {
        if e % 2 == 1 {
            core *= p;
        }
        cofactor *= num_traits::pow(p.clone(), (*e / 2) as usize);
    }
    Ok(SquarefreeDecomposition { core, cofactor })
}

pub fn is_squarefree(n: &BigInt) -> bool {
    !n.is_zero()
        && factorize(n)
            .map(|f| f.factors.iter().all(|(_, e)| *e == 1))
            .unwrap_or(false)
}

pub fn integer_sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Nonnegative rational square root, if `r` is a rational square.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    let num = integer_sqrt_exact(r.numer())?;
    let den = integer_sqrt_exact(r.denom())?;
    Some(Rational::new(num, den))
}

/// Square root of a rational inside Q(sqrt d): either a rational `t` with
/// `t^2 = r`, or `t*sqrt(d)` with `d*t^2 = r`. `None` means no root exists
/// in the field.
pub fn sqrt_in_field(r: &Rational, d: &BigInt) -> Option<QuadElem> {
    let field = QuadElem::zero(d).ok()?;
    if let Some(t) = rational_sqrt(r) {
        return Some(field.embed(&t));
    }
    let quotient = r / Rational::from_integer(field.radicand().clone());
    rational_sqrt(&quotient).map(|t| QuadElem::from_parts(Rational::zero(), t, field.radicand().clone()))
}

pub fn rational_from_i64(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Renders `p/q`, or just `p` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational, ArithError> {
    let s = s.trim();
    let parsed = match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| ArithError::Parse(s.into()))?;
            let q: BigInt = q.trim().parse().map_err(|_| ArithError::Parse(s.into()))?;
            if q.is_zero() {
                return Err(ArithError::DivisionByZero);
            }
            Rational::new(p, q)
        }
        None => Rational::from_integer(s.parse().map_err(|_| ArithError::Parse(s.into()))?),
    };
    Ok(parsed)
}
