//! Three-term progressions of cubes and their correspondence with points
//! on `E: y^2 = x^3 - 27`.
//!
//! A triple `(x0, x1, x2)` with `x0^3 - 2 x1^3 + x2^3 = 0` maps to the
//! projective point `[6 x1, 9 (x0 - x2), x0 + x2]` of `E`, with inverse
//! `[x, y, z] -> (9z + y, 3x, 9z - y)`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::{ArithError, QuadElem, Rational};
use crate::elliptic::{lift_twist_point, Curve, EllipticError, FieldElement, Point};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProgressionError {
    #[error("all three coordinates are zero")]
    AllZero,
    #[error("coordinates lie in different fields")]
    FieldMismatch,
    #[error("cubes of {0} are not in arithmetic progression")]
    NotAProgression(String),
    #[error("{0} is not on y^2 = x^3 - 27")]
    NotOnE(String),
    #[error("point at infinity has no affine progression")]
    AtInfinity,
    #[error(transparent)]
    Elliptic(#[from] EllipticError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

fn int<F: FieldElement>(like: &F, n: i64) -> F {
    like.embed(&Rational::from_integer(BigInt::from(n)))
}

fn cube<F: FieldElement>(v: &F) -> F {
    v.clone() * v.clone() * v.clone()
}

/// Three field elements whose cubes are meant to be in arithmetic
/// progression. Only the elements are stored, never the cubes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct APTriple<F> {
    terms: [F; 3],
}

impl<F: FieldElement> APTriple<F> {
    pub fn new(x0: F, x1: F, x2: F) -> Result<Self, ProgressionError> {
        if !x0.same_field(&x1) || !x0.same_field(&x2) {
            return Err(ProgressionError::FieldMismatch);
        }
        if x0.vanishes() && x1.vanishes() && x2.vanishes() {
            return Err(ProgressionError::AllZero);
        }
        Ok(APTriple { terms: [x0, x1, x2] })
    }

    pub fn terms(&self) -> &[F; 3] {
        &self.terms
    }

    pub fn cubes(&self) -> [F; 3] {
        [cube(&self.terms[0]), cube(&self.terms[1]), cube(&self.terms[2])]
    }

    /// `x1^3 - x0^3`, which equals `x2^3 - x1^3` for a valid triple.
    pub fn common_difference(&self) -> F {
        let [c0, c1, _] = self.cubes();
        c1 - c0
    }

    pub fn reversed(&self) -> Self {
        let [a, b, c] = self.terms.clone();
        APTriple { terms: [c, b, a] }
    }

    pub fn scale(&self, k: &F) -> Self {
        let [a, b, c] = self.terms.clone();
        APTriple {
            terms: [a * k.clone(), b * k.clone(), c * k.clone()],
        }
    }
}

impl<F: fmt::Display> fmt::Display for APTriple<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = &self.terms;
        write!(f, "({a}, {b}, {c})")
    }
}

/// `x1^3 - x0^3 = x2^3 - x1^3`.
pub fn is_ap<F: FieldElement>(t: &APTriple<F>) -> bool {
    let [c0, c1, c2] = t.cubes();
    c1.clone() - c0 == c2 - c1
}

/// `x0^3 - 2 x1^3 + x2^3 = 0`.
pub fn is_on_c<F: FieldElement>(t: &APTriple<F>) -> bool {
    let [c0, c1, c2] = t.cubes();
    (c0 - int(&c1, 2) * c1 + c2).vanishes()
}

/// Whether the cube triple is a nonzero multiple of `(1, 1, 1)` or of
/// `(-1, 0, 1)`. Comparing cubes rather than the terms themselves lets
/// `(1, w, w^2)` with `w^3 = 1` count as constant.
pub fn is_trivial_ap<F: FieldElement>(t: &APTriple<F>) -> bool {
    let [c0, c1, c2] = t.cubes();
    let constant = c0 == c1 && c1 == c2 && !c0.vanishes();
    let symmetric = c1.vanishes() && (c0.clone() + c2).vanishes() && !c0.vanishes();
    constant || symmetric
}

/// A point of the projective plane. Equality is up to a common nonzero
/// scalar.
#[derive(Clone, Debug)]
pub struct ProjectiveTriple<F> {
    coords: [F; 3],
}

impl<F: FieldElement> ProjectiveTriple<F> {
    pub fn new(x: F, y: F, z: F) -> Result<Self, ProgressionError> {
        if !x.same_field(&y) || !x.same_field(&z) {
            return Err(ProgressionError::FieldMismatch);
        }
        if x.vanishes() && y.vanishes() && z.vanishes() {
            return Err(ProgressionError::AllZero);
        }
        Ok(ProjectiveTriple { coords: [x, y, z] })
    }

    pub fn coords(&self) -> &[F; 3] {
        &self.coords
    }

    /// `[x, y, 1]` for an affine point, `[0, 1, 0]` for infinity. `like`
    /// fixes the field when the point carries no coordinates.
    pub fn from_point(p: &Point<F>, like: &F) -> Self {
        match p {
            Point::Infinity => ProjectiveTriple {
                coords: [int(like, 0), int(like, 1), int(like, 0)],
            },
            Point::Affine { x, y } => ProjectiveTriple {
                coords: [x.clone(), y.clone(), int(x, 1)],
            },
        }
    }

    /// Dehomogenizes a point on a Weierstrass curve: `z = 0` is infinity.
    pub fn to_point(&self) -> Point<F> {
        let [x, y, z] = &self.coords;
        if z.vanishes() {
            Point::Infinity
        } else {
            Point::affine(x.clone() / z.clone(), y.clone() / z.clone())
        }
    }

    /// `z y^2 = x^3 - 27 z^3`.
    pub fn is_on_e(&self) -> bool {
        let [x, y, z] = &self.coords;
        z.clone() * y.clone() * y.clone() == cube(x) - int(x, 27) * cube(z)
    }
}

impl<F: FieldElement> PartialEq for ProjectiveTriple<F> {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = (&self.coords, &other.coords);
        a[0].same_field(&b[0])
            && (0..3).all(|i| (i + 1..3).all(|j| a[i].clone() * b[j].clone() == a[j].clone() * b[i].clone()))
    }
}

impl<F: FieldElement> Eq for ProjectiveTriple<F> {}

impl<F: fmt::Display> fmt::Display for ProjectiveTriple<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = &self.coords;
        write!(f, "[{a}, {b}, {c}]")
    }
}

/// `(x0, x1, x2) -> [6 x1, 9 (x0 - x2), x0 + x2]` on `E`.
pub fn point_from_ap<F: FieldElement>(t: &APTriple<F>) -> Result<ProjectiveTriple<F>, ProgressionError> {
    if !is_ap(t) {
        return Err(ProgressionError::NotAProgression(t.to_string()));
    }
    let [x0, x1, x2] = t.terms.clone();
    ProjectiveTriple::new(
        int(&x1, 6) * x1,
        int(&x0, 9) * (x0.clone() - x2.clone()),
        x0 + x2,
    )
}

/// `[x, y, z] -> (9z + y, 3x, 9z - y)`.
pub fn ap_from_point<F: FieldElement>(p: &ProjectiveTriple<F>) -> Result<APTriple<F>, ProgressionError> {
    if !p.is_on_e() {
        return Err(ProgressionError::NotOnE(p.to_string()));
    }
    let [x, y, z] = p.coords.clone();
    let nine_z = int(&z, 9) * z;
    APTriple::new(nine_z.clone() + y.clone(), int(&x, 3) * x, nine_z - y)
}

/// `(x, y) -> (x/d, y sqrt(d) / d^2)`, from `E^d` over Q to `E` over
/// Q(sqrt d).
pub fn twist_point_to_e(d: &BigInt, p: &Point<Rational>) -> Result<Point<QuadElem>, ProgressionError> {
    let twist = Curve::e_twist(d)?;
    if !twist.is_on_curve(p) {
        return Err(EllipticError::NotOnCurve(p.to_string()).into());
    }
    Ok(lift_twist_point(d, p)?)
}

/// `(9d^2 + y sqrt d, 3 x d, 9d^2 - y sqrt d)` for a point `(x, y)` of
/// `E^d`. Up to the factor `d^2` this is [`ap_from_point`] applied to
/// [`twist_point_to_e`].
pub fn ap_from_twist_point(d: &BigInt, p: &Point<Rational>) -> Result<APTriple<QuadElem>, ProgressionError> {
    let twist = Curve::e_twist(d)?;
    if !twist.is_on_curve(p) {
        return Err(EllipticError::NotOnCurve(p.to_string()).into());
    }
    let Some((x, y)) = p.coords() else {
        return Err(ProgressionError::AtInfinity);
    };
    let root = QuadElem::sqrt_radicand(d)?;
    let dr = Rational::from_integer(d.clone());
    let nine_d2 = root.embed(&(Rational::from_integer(9.into()) * &dr * &dr));
    let y_root = root.scale(y);
    APTriple::new(
        &nine_d2 + &y_root,
        root.embed(&(Rational::from_integer(3.into()) * x * &dr)),
        &nine_d2 - &y_root,
    )
}

/// The 2-isogeny `F^d -> E^d`,
/// `(x, y) -> ((x^3 + 4d^3)/x^2, y (x^3 - 8d^3)/x^3)`. Its kernel, the
/// points with `x = 0`, goes to infinity.
pub fn isogeny_f_to_e(d: &BigInt, p: &Point<Rational>) -> Result<Point<Rational>, ProgressionError> {
    let source = Curve::f_twist(d)?;
    if !source.is_on_curve(p) {
        return Err(EllipticError::NotOnCurve(p.to_string()).into());
    }
    let Some((x, y)) = p.coords() else {
        return Ok(Point::Infinity);
    };
    if x.is_zero() {
        return Ok(Point::Infinity);
    }
    let d3 = Rational::from_integer(d * d * d);
    let x2 = x * x;
    let x3 = &x2 * x;
    let four = Rational::from_integer(4.into());
    let eight = Rational::from_integer(8.into());
    Ok(Point::affine(
        (&x3 + four * &d3) / &x2,
        y * (&x3 - eight * &d3) / &x3,
    ))
}

/// `(1, 1, 1)` over Q, the constant progression.
pub fn constant_progression() -> APTriple<Rational> {
    let one = Rational::one();
    APTriple::new(one.clone(), one.clone(), one).expect("nonzero")
}
