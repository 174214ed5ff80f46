use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::EllipticError;
use crate::arith::{is_squarefree, QuadElem, Rational};

/// Scalars a point coordinate can live in: Q itself, or one Q(sqrt d).
pub trait FieldElement:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Largest possible order of a torsion point over this kind of field.
    const ORDER_BOUND: u32;

    /// `r` as an element of the same field as `self`.
    fn embed(&self, r: &Rational) -> Self;

    fn vanishes(&self) -> bool;

    fn same_field(&self, other: &Self) -> bool;
}

impl FieldElement for Rational {
    const ORDER_BOUND: u32 = 12;

    fn embed(&self, r: &Rational) -> Self {
        r.clone()
    }

    fn vanishes(&self) -> bool {
        self.is_zero()
    }

    fn same_field(&self, _: &Self) -> bool {
        true
    }
}

impl FieldElement for QuadElem {
    const ORDER_BOUND: u32 = 18;

    fn embed(&self, r: &Rational) -> Self {
        QuadElem::embed(self, r)
    }

    fn vanishes(&self) -> bool {
        self.is_zero()
    }

    fn same_field(&self, other: &Self) -> bool {
        QuadElem::same_field(self, other)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Point<F> {
    Infinity,
    Affine { x: F, y: F },
}

impl<F> Point<F> {
    pub fn affine(x: F, y: F) -> Self {
        Point::Affine { x, y }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    pub fn coords(&self) -> Option<(&F, &F)> {
        match self {
            Point::Infinity => None,
            Point::Affine { x, y } => Some((x, y)),
        }
    }

    pub fn map<G>(&self, f: impl Fn(&F) -> G) -> Point<G> {
        match self {
            Point::Infinity => Point::Infinity,
            Point::Affine { x, y } => Point::Affine { x: f(x), y: f(y) },
        }
    }
}

impl<F: fmt::Display> fmt::Display for Point<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Infinity => write!(f, "O"),
            Point::Affine { x, y } => write!(f, "({x}, {y})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointOrder {
    Finite(u32),
    Infinite,
}

impl PointOrder {
    pub fn is_finite(self) -> bool {
        matches!(self, PointOrder::Finite(_))
    }
}

impl fmt::Display for PointOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointOrder::Finite(n) => write!(f, "{n}"),
            PointOrder::Infinite => write!(f, "infinite"),
        }
    }
}

/// Short Weierstrass curve `y^2 = x^3 + a*x + b` over Q.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Curve {
    a: Rational,
    b: Rational,
}

fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn check_twist_parameter(d: &BigInt) -> Result<(), EllipticError> {
    if d.is_zero() || !is_squarefree(d) {
        return Err(EllipticError::InvalidTwist(d.clone()));
    }
    Ok(())
}

impl Curve {
    pub fn new(a: Rational, b: Rational) -> Result<Self, EllipticError> {
        let curve = Curve { a, b };
        if curve.discriminant().is_zero() {
            return Err(EllipticError::Singular);
        }
        Ok(curve)
    }

    /// `y^2 = x^3 - 27`, the Weierstrass model of the cubic
    /// `X0^3 - 2 X1^3 + X2^3 = 0`.
    pub fn e() -> Self {
        Curve {
            a: Rational::zero(),
            b: rat(-27),
        }
    }

    /// The twist `E^D: y^2 = x^3 - 27 D^3`.
    pub fn e_twist(d: &BigInt) -> Result<Self, EllipticError> {
        check_twist_parameter(d)?;
        Curve::new(Rational::zero(), Rational::from_integer(BigInt::from(-27) * d * d * d))
    }

    /// The twist `F^D: y^2 = x^3 + D^3` of `X0(36): y^2 = x^3 + 1`.
    pub fn f_twist(d: &BigInt) -> Result<Self, EllipticError> {
        check_twist_parameter(d)?;
        Curve::new(Rational::zero(), Rational::from_integer(d * d * d))
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    /// `-16 (4a^3 + 27b^2)`.
    pub fn discriminant(&self) -> Rational {
        rat(-16) * (rat(4) * &self.a * &self.a * &self.a + rat(27) * &self.b * &self.b)
    }

    pub fn is_integral(&self) -> bool {
        self.a.is_integer() && self.b.is_integer()
    }

    pub fn integer_coefficients(&self) -> Option<(BigInt, BigInt)> {
        self.is_integral()
            .then(|| (self.a.to_integer(), self.b.to_integer()))
    }

    /// The isomorphic model `(u^4 a, u^6 b)` with the least positive `u`
    /// making both coefficients integers. Points map by `(u^2 x, u^3 y)`.
    pub fn integral_model(&self) -> (Curve, BigInt) {
        let mut u = BigInt::one();
        for (den, weight) in [(self.a.denom(), 4u32), (self.b.denom(), 6u32)] {
            let f = crate::arith::factorize(den).expect("denominators are nonzero");
            for (p, e) in f.factors {
                // smallest k with k*weight >= e
                let k = e.div_ceil(weight);
                let have = multiplicity(&u, &p);
                if have < k {
                    u *= num_traits::pow(p, (k - have) as usize);
                }
            }
        }
        let u2 = Rational::from_integer(&u * &u);
        let model = Curve {
            a: &self.a * &u2 * &u2,
            b: &self.b * &u2 * &u2 * &u2,
        };
        (model, u)
    }

    /// Right-hand side `x^3 + a x + b` evaluated in the field of `x`.
    pub fn rhs<F: FieldElement>(&self, x: &F) -> F {
        x.clone() * x.clone() * x.clone() + x.embed(&self.a) * x.clone() + x.embed(&self.b)
    }

    pub fn is_on_curve<F: FieldElement>(&self, p: &Point<F>) -> bool {
        match p {
            Point::Infinity => true,
            Point::Affine { x, y } => x.same_field(y) && y.clone() * y.clone() == self.rhs(x),
        }
    }

    /// An affine point, checked against the curve equation.
    pub fn point<F: FieldElement>(&self, x: F, y: F) -> Result<Point<F>, EllipticError> {
        let p = Point::affine(x, y);
        if !self.is_on_curve(&p) {
            return Err(EllipticError::NotOnCurve(p.to_string()));
        }
        Ok(p)
    }

    pub fn neg<F: FieldElement>(&self, p: &Point<F>) -> Point<F> {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine { x, y } => Point::affine(x.clone(), -y.clone()),
        }
    }

    /// Chord-and-tangent addition.
    pub fn add<F: FieldElement>(&self, p: &Point<F>, q: &Point<F>) -> Result<Point<F>, EllipticError> {
        let (x1, y1, x2, y2) = match (p, q) {
            (Point::Infinity, _) => return Ok(q.clone()),
            (_, Point::Infinity) => return Ok(p.clone()),
            (Point::Affine { x: x1, y: y1 }, Point::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        if !x1.same_field(x2) || !x1.same_field(y1) || !x2.same_field(y2) {
            return Err(EllipticError::FieldMismatch);
        }
        let slope = if x1 == x2 {
            if (y1.clone() + y2.clone()).vanishes() {
                return Ok(Point::Infinity);
            }
            let three = x1.embed(&rat(3));
            let two = x1.embed(&rat(2));
            (three * x1.clone() * x1.clone() + x1.embed(&self.a)) / (two * y1.clone())
        } else {
            (y2.clone() - y1.clone()) / (x2.clone() - x1.clone())
        };
        let x3 = slope.clone() * slope.clone() - x1.clone() - x2.clone();
        let y3 = slope * (x1.clone() - x3.clone()) - y1.clone();
        Ok(Point::affine(x3, y3))
    }

    pub fn double<F: FieldElement>(&self, p: &Point<F>) -> Result<Point<F>, EllipticError> {
        self.add(p, p)
    }

    pub fn sub<F: FieldElement>(&self, p: &Point<F>, q: &Point<F>) -> Result<Point<F>, EllipticError> {
        self.add(p, &self.neg(q))
    }

    /// `n P` by double-and-add; negative `n` uses `-P`.
    pub fn scalar_mul<F: FieldElement>(&self, n: &BigInt, p: &Point<F>) -> Result<Point<F>, EllipticError> {
        let base = if n.is_negative() { self.neg(p) } else { p.clone() };
        let k = n.abs();
        let mut acc = Point::Infinity;
        for i in (0..k.bits()).rev() {
            acc = self.double(&acc)?;
            if k.bit(i) {
                acc = self.add(&acc, &base)?;
            }
        }
        Ok(acc)
    }

    /// Least `n <= F::ORDER_BOUND` with `n P = O`, else infinite. The bound
    /// is the largest torsion order possible over the coordinate field, so
    /// the answer is exact for points on the curve.
    pub fn point_order<F: FieldElement>(&self, p: &Point<F>) -> Result<PointOrder, EllipticError> {
        self.order_within(p, F::ORDER_BOUND)
    }

    pub fn order_within<F: FieldElement>(
        &self,
        p: &Point<F>,
        bound: u32,
    ) -> Result<PointOrder, EllipticError> {
        let mut multiple = p.clone();
        for n in 1..=bound {
            if multiple.is_infinity() {
                return Ok(PointOrder::Finite(n));
            }
            multiple = self.add(&multiple, p)?;
        }
        Ok(PointOrder::Infinite)
    }
}

fn multiplicity(n: &BigInt, p: &BigInt) -> u32 {
    let mut n = n.clone();
    let mut k = 0;
    while !n.is_zero() && (&n % p).is_zero() {
        n /= p;
        k += 1;
    }
    k
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::from("y^2 = x^3");
        for (c, mono) in [(&self.a, "*x"), (&self.b, "")] {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { " - " } else { " + " };
            let mag = crate::arith::format_rational(&c.abs());
            if mono.is_empty() {
                out.push_str(&format!("{sign}{mag}"));
            } else if c.abs().is_one() {
                out.push_str(&format!("{sign}x"));
            } else {
                out.push_str(&format!("{sign}{mag}{mono}"));
            }
        }
        f.write_str(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn rp(x: i64, y: i64) -> Point<Rational> {
        Point::affine(rat(x), rat(y))
    }

    fn f1() -> Curve {
        Curve::f_twist(&big(1)).unwrap()
    }

    #[test]
    fn constructors() {
        assert_eq!(Curve::e().to_string(), "y^2 = x^3 - 27");
        assert_eq!(Curve::e_twist(&big(2)).unwrap().to_string(), "y^2 = x^3 - 216");
        assert_eq!(Curve::f_twist(&big(-3)).unwrap(), Curve::e());
        assert!(Curve::e_twist(&big(12)).is_err());
        assert!(Curve::f_twist(&big(0)).is_err());
        assert_eq!(Curve::new(rat(-3), rat(2)), Err(EllipticError::Singular));
    }

    #[test]
    fn membership() {
        let e2 = Curve::e_twist(&big(2)).unwrap();
        assert!(e2.is_on_curve(&rp(10, 28)));
        assert!(Curve::e().is_on_curve(&rp(3, 0)));
        assert!(!Curve::e().is_on_curve(&rp(0, 0)));
        assert!(Curve::e().is_on_curve(&Point::<Rational>::Infinity));
    }

    #[test]
    fn group_law_examples() {
        let e = Curve::e();
        assert_eq!(e.add(&rp(3, 0), &rp(3, 0)).unwrap(), Point::Infinity);
        // Tangent at (2,3) on y^2 = x^3 + 1: slope 2, x = 4 - 4 = 0, y = 2(2-0) - 3 = 1.
        assert_eq!(f1().scalar_mul(&big(2), &rp(2, 3)).unwrap(), rp(0, 1));
        assert_eq!(f1().add(&rp(2, 3), &Point::Infinity).unwrap(), rp(2, 3));
    }

    #[test]
    fn orders() {
        assert_eq!(Curve::e().point_order(&rp(3, 0)).unwrap(), PointOrder::Finite(2));
        assert_eq!(f1().point_order(&rp(0, 1)).unwrap(), PointOrder::Finite(3));
        assert_eq!(f1().point_order(&rp(2, 3)).unwrap(), PointOrder::Finite(6));
        let e2 = Curve::e_twist(&big(2)).unwrap();
        assert_eq!(e2.point_order(&rp(10, 28)).unwrap(), PointOrder::Infinite);
    }

    #[test]
    fn mixed_fields_rejected() {
        let e = Curve::e();
        let p = Point::affine(
            QuadElem::from_parts(rat(5), rat(0), big(2)),
            QuadElem::from_parts(rat(0), rat(7), big(2)),
        );
        let q = Point::affine(
            QuadElem::from_parts(rat(3), rat(0), big(5)),
            QuadElem::from_parts(rat(0), rat(0), big(5)),
        );
        assert_eq!(e.add(&p, &q), Err(EllipticError::FieldMismatch));
    }

    #[test]
    fn integral_scaling() {
        let c = Curve::new(Rational::new(big(1), big(4)), Rational::new(big(1), big(8))).unwrap();
        let (m, u) = c.integral_model();
        assert_eq!(u, big(2));
        assert_eq!((m.a().clone(), m.b().clone()), (rat(4), rat(8)));
        assert!(m.is_integral());
    }

    fn table_point() -> (Curve, Point<Rational>) {
        (Curve::e_twist(&big(2)).unwrap(), rp(10, 28))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn multiples_stay_on_curve_and_commute(a in -6i64..6, b in -6i64..6) {
            let (c, p) = table_point();
            let pa = c.scalar_mul(&big(a), &p).unwrap();
            let pb = c.scalar_mul(&big(b), &p).unwrap();
            let sum = c.add(&pa, &pb).unwrap();
            prop_assert!(c.is_on_curve(&sum));
            prop_assert_eq!(&sum, &c.add(&pb, &pa).unwrap());
            prop_assert_eq!(sum, c.scalar_mul(&big(a + b), &p).unwrap());
            prop_assert_eq!(c.add(&pa, &c.neg(&pa)).unwrap(), Point::Infinity);
        }
    }
}
