use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{
    format_rational, parse_rational, rational_sqrt, squarefree_decompose, ArithError, Rational,
};

/// `a + b*sqrt(d)` in Q(sqrt d), with `d` squarefree and not 0 or 1.
///
/// The operator impls panic when the radicands differ, like mismatched
/// shapes elsewhere in the ecosystem; the `checked_*` methods report it
/// instead.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QuadElem {
    a: Rational,
    b: Rational,
    d: BigInt,
}

impl QuadElem {
    /// Builds `a + b*sqrt(n)`, reducing `n` to its squarefree core first.
    pub fn new(a: Rational, b: Rational, n: BigInt) -> Result<Self, ArithError> {
        if n.is_zero() {
            return Err(ArithError::InvalidRadicand(n));
        }
        let dec = squarefree_decompose(&n)?;
        if dec.core.is_one() {
            return Err(ArithError::InvalidRadicand(n));
        }
        Ok(QuadElem {
            a,
            b: b * Rational::from_integer(dec.cofactor),
            d: dec.core,
        })
    }

    /// Like [`QuadElem::new`] but panics on an invalid radicand.
    pub fn from_parts(a: Rational, b: Rational, d: BigInt) -> Self {
        Self::new(a, b, d).expect("invalid radicand")
    }

    pub fn zero(d: &BigInt) -> Result<Self, ArithError> {
        Self::new(Rational::zero(), Rational::zero(), d.clone())
    }

    /// `sqrt(d)` itself.
    pub fn sqrt_radicand(d: &BigInt) -> Result<Self, ArithError> {
        Self::new(Rational::zero(), Rational::one(), d.clone())
    }

    /// The rational `r` as an element of this element's field.
    pub fn embed(&self, r: &Rational) -> Self {
        self.with(r.clone(), Rational::zero())
    }

    fn with(&self, a: Rational, b: Rational) -> Self {
        QuadElem {
            a,
            b,
            d: self.d.clone(),
        }
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn irrational_part(&self) -> &Rational {
        &self.b
    }

    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.a)
    }

    pub fn same_field(&self, other: &Self) -> bool {
        self.d == other.d
    }

    pub fn conj(&self) -> Self {
        self.with(self.a.clone(), -self.b.clone())
    }

    /// `a^2 - d*b^2`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - Rational::from_integer(self.d.clone()) * &self.b * &self.b
    }

    pub fn trace(&self) -> Rational {
        &self.a + &self.a
    }

    fn check(&self, other: &Self) -> Result<(), ArithError> {
        if self.d == other.d {
            Ok(())
        } else {
            Err(ArithError::RadicandMismatch(self.d.clone(), other.d.clone()))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, ArithError> {
        self.check(other)?;
        Ok(self.with(&self.a + &other.a, &self.b + &other.b))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, ArithError> {
        self.check(other)?;
        Ok(self.with(&self.a - &other.a, &self.b - &other.b))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, ArithError> {
        self.check(other)?;
        let d = Rational::from_integer(self.d.clone());
        Ok(self.with(
            &self.a * &other.a + d * &self.b * &other.b,
            &self.a * &other.b + &self.b * &other.a,
        ))
    }

    pub fn checked_inv(&self) -> Result<Self, ArithError> {
        let n = self.norm();
        if n.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(self.with(&self.a / &n, -(&self.b / &n)))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, ArithError> {
        self.check(other)?;
        self.checked_mul(&other.checked_inv()?)
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = self.embed(&Rational::one());
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    pub fn scale(&self, r: &Rational) -> Self {
        self.with(&self.a * r, &self.b * r)
    }

    /// A square root inside the same field, if one exists.
    ///
    /// For `b != 0`, `(p + q*sqrt d)^2 = a + b*sqrt d` forces
    /// `p^2 = (a +- sqrt(norm))/2` and `q = b/(2p)`.
    pub fn sqrt(&self) -> Option<Self> {
        if self.b.is_zero() {
            return super::sqrt_in_field(&self.a, &self.d);
        }
        let n = rational_sqrt(&self.norm())?;
        let two = Rational::from_integer(BigInt::from(2));
        for candidate in [(&self.a + &n) / &two, (&self.a - &n) / &two] {
            if let Some(p) = rational_sqrt(&candidate) {
                if p.is_zero() {
                    continue;
                }
                let q = &self.b / (&two * &p);
                let root = self.with(p, q);
                if &root * &root == *self {
                    return Some(root);
                }
            }
        }
        None
    }

    /// Inverse of the `Display` form. Elements with `b = 0` print without a
    /// radicand, so the field is supplied separately.
    pub fn parse(s: &str, d: &BigInt) -> Result<Self, ArithError> {
        let field = QuadElem::zero(d)?;
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let err = || ArithError::Parse(s.to_string());
        let Some(at) = compact.find("sqrt(") else {
            return Ok(field.embed(&parse_rational(&compact)?));
        };
        let inner = compact[at + 5..].strip_suffix(')').ok_or_else(err)?;
        let radicand: BigInt = inner.parse().map_err(|_| err())?;
        if radicand != *field.radicand() {
            return Err(err());
        }
        let prefix = compact[..at].strip_suffix('*').unwrap_or(&compact[..at]);
        let split = prefix
            .char_indices()
            .rev()
            .find(|&(i, c)| i > 0 && (c == '+' || c == '-'))
            .map(|(i, _)| i);
        let (a_str, b_str) = match split {
            Some(i) => (&prefix[..i], &prefix[i..]),
            None => ("", prefix),
        };
        let a = if a_str.is_empty() {
            Rational::zero()
        } else {
            parse_rational(a_str)?
        };
        let b = match b_str {
            "" | "+" => Rational::one(),
            "-" => -Rational::one(),
            other => parse_rational(other.strip_prefix('+').unwrap_or(other))?,
        };
        Ok(field.with(a, b))
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sqrt = format!("sqrt({})", self.d);
        let coeff = |b: &Rational| {
            if b.is_one() {
                sqrt.clone()
            } else {
                format!("{}*{}", format_rational(b), sqrt)
            }
        };
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", format_rational(&self.a)),
            (true, false) if self.b == -Rational::one() => write!(f, "-{sqrt}"),
            (true, false) => write!(f, "{}", coeff(&self.b)),
            (false, false) => {
                let sign = if self.b.is_negative() { '-' } else { '+' };
                write!(f, "{} {} {}", format_rational(&self.a), sign, coeff(&self.b.abs()))
            }
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl<'a> $trait<&'a QuadElem> for &'a QuadElem {
            type Output = QuadElem;
            fn $method(self, rhs: &'a QuadElem) -> QuadElem {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }

        impl $trait for QuadElem {
            type Output = QuadElem;
            fn $method(self, rhs: QuadElem) -> QuadElem {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

impl Neg for QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        QuadElem {
            a: -self.a,
            b: -self.b,
            d: self.d,
        }
    }
}

impl Neg for &QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        -self.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(p: i64, q: i64) -> Rational {
        Rational::new(BigInt::from(p), BigInt::from(q))
    }

    fn q(a: i64, b: i64, d: i64) -> QuadElem {
        QuadElem::from_parts(rat(a, 1), rat(b, 1), BigInt::from(d))
    }

    #[test]
    fn field_examples() {
        assert_eq!(q(3, 1, 2) * q(3, -1, 2), q(7, 0, 2));
        assert_eq!(q(9, 7, 2).conj(), q(9, -7, 2));
        assert_eq!(q(1, 1, -3) * q(1, 1, -3), q(-2, 2, -3));
        assert_eq!(q(3, 1, 2).norm(), rat(7, 1));
    }

    #[test]
    fn radicand_is_canonicalized() {
        let x = QuadElem::new(rat(1, 1), rat(1, 1), BigInt::from(12)).unwrap();
        assert_eq!(x, q(1, 2, 3));
        assert!(QuadElem::new(rat(1, 1), rat(1, 1), BigInt::from(4)).is_err());
        assert!(QuadElem::zero(&BigInt::from(0)).is_err());
        assert!(QuadElem::zero(&BigInt::from(1)).is_err());
    }

    #[test]
    fn mismatch_and_zero_division() {
        assert_eq!(
            q(1, 1, 2).checked_add(&q(1, 1, 3)),
            Err(ArithError::RadicandMismatch(BigInt::from(2), BigInt::from(3)))
        );
        assert_eq!(q(1, 1, 2).checked_div(&q(0, 0, 2)), Err(ArithError::DivisionByZero));
    }

    #[test]
    #[should_panic(expected = "radicand mismatch")]
    fn operator_mismatch_panics() {
        let _ = q(1, 1, 2) + q(1, 1, 5);
    }

    #[test]
    fn general_square_roots() {
        let x = q(3, 2, 5);
        assert_eq!((&x * &x).sqrt().map(|r| r.norm()), Some(x.norm()));
        assert_eq!(q(3, 2, 3).sqrt(), None);
        // 12e^2 for a non-rational 2-torsion x-coordinate of y^2 = x^3 - 27.
        assert_eq!(q(-54, -54, -3).sqrt(), None);
    }

    #[test]
    fn display_and_parse() {
        let d = BigInt::from(2);
        for (x, text) in [
            (q(36, 28, 2), "36 + 28*sqrt(2)"),
            (q(36, -28, 2), "36 - 28*sqrt(2)"),
            (q(0, 1, 2), "sqrt(2)"),
            (q(0, -1, 2), "-sqrt(2)"),
            (q(5, 0, 2), "5"),
            (QuadElem::from_parts(rat(-3, 2), rat(-1, 4), d.clone()), "-3/2 - 1/4*sqrt(2)"),
        ] {
            assert_eq!(x.to_string(), text);
            assert_eq!(QuadElem::parse(text, &d).unwrap(), x);
        }
        assert!(QuadElem::parse("1 + sqrt(3)", &d).is_err());
    }

    fn elem() -> impl Strategy<Value = QuadElem> {
        (-40i64..40, 1i64..12, -40i64..40, 1i64..12).prop_map(|(a, qa, b, qb)| {
            QuadElem::from_parts(rat(a, qa), rat(b, qb), BigInt::from(-7))
        })
    }

    proptest! {
        #[test]
        fn norm_is_multiplicative(x in elem(), y in elem()) {
            prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
        }

        #[test]
        fn division_inverts_multiplication(x in elem(), y in elem()) {
            prop_assume!(!y.is_zero());
            prop_assert_eq!((&x * &y) / y, x);
        }

        #[test]
        fn display_round_trips(x in elem()) {
            prop_assert_eq!(QuadElem::parse(&x.to_string(), x.radicand()).unwrap(), x);
        }

        #[test]
        fn sqrt_of_square(x in elem()) {
            let s = (&x * &x).sqrt().unwrap();
            prop_assert_eq!(&s * &s, &x * &x);
        }
    }
}
