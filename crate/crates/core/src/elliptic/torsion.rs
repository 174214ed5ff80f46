//! Torsion subgroups over Q (Nagell-Lutz) and over a quadratic field
//! Q(sqrt d) (odd part from the curve and its twist, 2-power part by
//! repeated halving).

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::curve::{Curve, FieldElement, Point, PointOrder};
use super::factors::{rational_roots, roots_in_field};
use super::poly::IntPolynomial;
use super::EllipticError;
use crate::arith::{factorize, QuadElem, Rational};

/// A finite abelian group `Z/n1 + Z/n2` with `n1 | n2`, listed as
/// `invariants` (empty for the trivial group, `[n]` when cyclic).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionGroup<F> {
    pub invariants: Vec<u32>,
    pub generators: Vec<Point<F>>,
    pub points: Vec<Point<F>>,
}

impl<F> TorsionGroup<F> {
    pub fn order(&self) -> usize {
        self.points.len()
    }

    /// `Z/2 x Z/6`, `Z/6`, or `0`.
    pub fn structure(&self) -> String {
        if self.invariants.is_empty() {
            return "0".to_string();
        }
        self.invariants
            .iter()
            .map(|n| format!("Z/{n}"))
            .collect::<Vec<_>>()
            .join(" x ")
    }
}

impl<F> fmt::Display for TorsionGroup<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.structure())
    }
}

fn rat(n: BigInt) -> Rational {
    Rational::from_integer(n)
}

/// Positive `y` with `y^2 | n`.
fn square_divisors(n: &BigInt) -> Result<Vec<BigInt>, EllipticError> {
    let f = factorize(n)?;
    let mut out = vec![BigInt::one()];
    for (p, e) in &f.factors {
        let mut next = Vec::new();
        for d in &out {
            let mut power = d.clone();
            next.push(power.clone());
            for _ in 0..e / 2 {
                power *= p;
                next.push(power.clone());
            }
        }
        out = next;
    }
    out.sort();
    Ok(out)
}

/// The torsion subgroup of `curve` over Q. Points are reported on the
/// given model even when the search runs on an integral one.
pub fn torsion_over_q(curve: &Curve) -> Result<TorsionGroup<Rational>, EllipticError> {
    let (model, u) = curve.integral_model();
    let (a, b) = model
        .integer_coefficients()
        .expect("integral model has integer coefficients");
    let cubic = |shift: &BigInt| IntPolynomial::new(vec![&b - shift, a.clone(), BigInt::zero(), BigInt::one()]);
    let disc = BigInt::from(4) * &a * &a * &a + BigInt::from(27) * &b * &b;

    let mut candidates = vec![Point::Infinity];
    for y in std::iter::once(BigInt::zero()).chain(square_divisors(&disc)?) {
        for x in rational_roots(&cubic(&(&y * &y)))? {
            if !x.is_integer() {
                continue;
            }
            let y = rat(y.clone());
            candidates.push(Point::affine(x.clone(), y.clone()));
            if !y.is_zero() {
                candidates.push(Point::affine(x, -y));
            }
        }
    }
    let mut points = Vec::new();
    for p in candidates {
        if model.point_order(&p)?.is_finite() {
            points.push(p);
        }
    }
    let u2 = rat(&u * &u);
    let u3 = &u2 * rat(u.clone());
    let back: Vec<Point<Rational>> = points
        .iter()
        .map(|p| match p {
            Point::Infinity => Point::Infinity,
            Point::Affine { x, y } => Point::affine(x / &u2, y / &u3),
        })
        .collect();
    assemble_group(curve, back)
}

/// Lifts a point of the twist `y^2 = x^3 + a d^2 x + b d^3` to `curve`
/// over Q(sqrt d) by `(x, y) -> (x/d, y sqrt(d) / d^2)`.
pub fn lift_twist_point(d: &BigInt, p: &Point<Rational>) -> Result<Point<QuadElem>, EllipticError> {
    let root = QuadElem::sqrt_radicand(d)?;
    let dr = rat(d.clone());
    Ok(match p {
        Point::Infinity => Point::Infinity,
        Point::Affine { x, y } => Point::affine(root.embed(&(x / &dr)), root.scale(&(y / (&dr * &dr)))),
    })
}

/// The twist of `curve` by `d`, as `y^2 = x^3 + a d^2 x + b d^3`.
fn quadratic_twist(curve: &Curve, d: &BigInt) -> Result<Curve, EllipticError> {
    let dr = rat(d.clone());
    Curve::new(curve.a() * &dr * &dr, curve.b() * &dr * &dr * &dr)
}

/// The torsion subgroup of `curve` over Q(sqrt d).
pub fn torsion_over_quadratic(curve: &Curve, d: &BigInt) -> Result<TorsionGroup<QuadElem>, EllipticError> {
    let field = QuadElem::zero(d)?;
    let d = field.radicand().clone();
    let embed = |p: &Point<Rational>| p.map(|c| field.embed(c));

    let own = torsion_over_q(curve)?;
    let twist = quadratic_twist(curve, &d)?;
    let twisted = torsion_over_q(&twist)?;
    let own_odd = odd_points(curve, &own)?;
    let mut twist_odd = Vec::new();
    for p in odd_points(&twist, &twisted)? {
        twist_odd.push(lift_twist_point(&d, &p)?);
    }
    let mut odd_part = Vec::new();
    for p in &own_odd {
        for q in &twist_odd {
            push_new(&mut odd_part, curve.add(&embed(p), q)?);
        }
    }

    let two_power = two_power_torsion(curve, &field)?;
    let mut all = Vec::new();
    for p in &odd_part {
        for q in &two_power {
            push_new(&mut all, curve.add(p, q)?);
        }
    }
    assemble_group(curve, all)
}

/// The torsion subgroup of `E: y^2 = x^3 - 27` over Q(sqrt d).
pub fn e_torsion_over_quadratic(d: &BigInt) -> Result<TorsionGroup<QuadElem>, EllipticError> {
    if !crate::arith::is_squarefree(d) {
        return Err(EllipticError::InvalidTwist(d.clone()));
    }
    torsion_over_quadratic(&Curve::e(), d)
}

fn odd_points(curve: &Curve, g: &TorsionGroup<Rational>) -> Result<Vec<Point<Rational>>, EllipticError> {
    let mut out = Vec::new();
    for p in &g.points {
        if let PointOrder::Finite(n) = curve.point_order(p)? {
            if n % 2 == 1 {
                out.push(p.clone());
            }
        }
    }
    Ok(out)
}

fn push_new<F: PartialEq>(v: &mut Vec<F>, p: F) {
    if !v.contains(&p) {
        v.push(p);
    }
}

/// `O`, the 2-torsion and everything reachable from them by halving.
fn two_power_torsion(curve: &Curve, field: &QuadElem) -> Result<Vec<Point<QuadElem>>, EllipticError> {
    let mut found = vec![Point::Infinity];
    let mut frontier = vec![Point::Infinity];
    while let Some(p) = frontier.pop() {
        for q in halves(curve, field, &p)? {
            if !found.contains(&q) {
                found.push(q.clone());
                frontier.push(q);
            }
        }
    }
    Ok(found)
}

/// Every `Q` over the field with `2Q = P`.
fn halves(curve: &Curve, field: &QuadElem, p: &Point<QuadElem>) -> Result<Vec<Point<QuadElem>>, EllipticError> {
    let e = |r: &Rational| field.embed(r);
    let (a, b) = (e(curve.a()), e(curve.b()));
    let xs = match p {
        Point::Infinity => roots_in_field(&[b.clone(), a.clone(), field.clone(), e(&Rational::one())], field.radicand())?,
        Point::Affine { x, .. } => {
            // x(2Q) = x_P rearranged into a quartic in x(Q).
            let four = e(&Rational::from_integer(4.into()));
            let eight = e(&Rational::from_integer(8.into()));
            let two = e(&Rational::from_integer(2.into()));
            let coeffs = [
                a.clone() * a.clone() - four.clone() * b.clone() * x.clone(),
                -(eight * b.clone() + four.clone() * a.clone() * x.clone()),
                -(two * a.clone()),
                -(four * x.clone()),
                e(&Rational::one()),
            ];
            roots_in_field(&coeffs, field.radicand())?
        }
    };
    let mut out = Vec::new();
    for x in xs {
        let Some(y) = curve.rhs(&x).sqrt() else { continue };
        for q in [Point::affine(x.clone(), y.clone()), Point::affine(x.clone(), -y.clone())] {
            if curve.double(&q)? == *p {
                push_new(&mut out, q);
            }
        }
    }
    Ok(out)
}

/// Splits a finite set of torsion points into invariant factors. Fails if
/// the orders are inconsistent with a subgroup of rank at most two.
pub fn assemble_group<F: FieldElement>(
    curve: &Curve,
    points: Vec<Point<F>>,
) -> Result<TorsionGroup<F>, EllipticError> {
    let total = points.len() as u32;
    let mut orders = Vec::with_capacity(points.len());
    for p in &points {
        match curve.order_within(p, total)? {
            PointOrder::Finite(n) => orders.push(n),
            PointOrder::Infinite => {
                return Err(EllipticError::InconsistentGroup(format!("{p} has order above {total}")))
            }
        }
    }
    if total <= 1 {
        return Ok(TorsionGroup {
            invariants: Vec::new(),
            generators: Vec::new(),
            points,
        });
    }
    let (big_idx, &n2) = orders
        .iter()
        .enumerate()
        .max_by_key(|&(i, n)| (*n, std::cmp::Reverse(i)))
        .expect("nonempty");
    let g2 = points[big_idx].clone();
    if n2 == total {
        return Ok(TorsionGroup {
            invariants: vec![n2],
            generators: vec![g2],
            points,
        });
    }
    if total % n2 != 0 || n2 % (total / n2) != 0 {
        return Err(EllipticError::InconsistentGroup(format!(
            "{total} points with exponent {n2}"
        )));
    }
    let n1 = total / n2;
    let mut span = vec![Point::Infinity];
    for _ in 1..n2 {
        let next = curve.add(span.last().expect("nonempty"), &g2)?;
        span.push(next);
    }
    for (p, &n) in points.iter().zip(&orders) {
        if n != n1 {
            continue;
        }
        let mut multiple = p.clone();
        let mut independent = true;
        for _ in 1..n1 {
            if span.contains(&multiple) {
                independent = false;
                break;
            }
            multiple = curve.add(&multiple, p)?;
        }
        if independent {
            return Ok(TorsionGroup {
                invariants: vec![n1, n2],
                generators: vec![p.clone(), g2],
                points,
            });
        }
    }
    Err(EllipticError::InconsistentGroup(format!(
        "no complement of order {n1} to a point of order {n2}"
    )))
}
