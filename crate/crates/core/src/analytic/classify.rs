use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::lattice::{a_d, quartic_minus3_has_root};
use super::AnalyticError;
use crate::arith::{factorize, is_prime, squarefree_decompose, QuadElem, Rational};
use crate::elliptic::{Curve, Point, PointOrder};
use crate::progression::{ap_from_twist_point, is_ap, is_trivial_ap, APTriple};

/// `classify` only evaluates the lattice sum for `|D|` up to this bound.
pub const CLASSIFY_LATTICE_LIMIT: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Status {
    Exists,
    ExistsUnderBsd,
    NotExists,
    Unknown,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Exists => "exists",
            Status::ExistsUnderBsd => "exists-under-bsd",
            Status::NotExists => "not-exists",
            Status::Unknown => "unknown",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The individual sufficient conditions the classifier knows about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Criterion {
    /// `D = 1`: the field is Q itself.
    RationalField,
    /// Every prime dividing `D` is 3 or `5 (mod 12)`.
    PrimesFiveModTwelveOrThree,
    /// `D = -p`, `p = 1 (mod 12)` prime, and `x^4 + 3` has no root mod `p`.
    NegativePrimeQuarticNoRoot,
    /// `D = -d` with `d` coprime to 6 and `A_d != 0`.
    LatticeSumNonzero,
    /// `|D| = p > 3` prime with `p = 3 (mod 4)`.
    PrimeThreeModFour,
    /// BSD: `D > 0` even and prime to 3.
    PositiveEvenPrimeToThree,
    /// BSD: `D < 0` and `D = 1, 5 (mod 12)`.
    NegativeOneOrFiveModTwelve,
    /// BSD: `D = -d` with `d` coprime to 6 and `A_d = 0`.
    LatticeSumZero,
    /// A rational point of infinite order on `E^D` was supplied.
    InfiniteOrderWitness,
}

impl Criterion {
    pub fn tag(self) -> &'static str {
        match self {
            Criterion::RationalField => "rational-field",
            Criterion::PrimesFiveModTwelveOrThree => "primes-5-mod-12-or-3",
            Criterion::NegativePrimeQuarticNoRoot => "negative-prime-quartic-no-root",
            Criterion::LatticeSumNonzero => "lattice-sum-nonzero",
            Criterion::PrimeThreeModFour => "prime-3-mod-4",
            Criterion::PositiveEvenPrimeToThree => "positive-even-prime-to-3",
            Criterion::NegativeOneOrFiveModTwelve => "negative-1-or-5-mod-12",
            Criterion::LatticeSumZero => "lattice-sum-zero",
            Criterion::InfiniteOrderWitness => "infinite-order-witness",
        }
    }

    /// What a match of this criterion alone implies.
    pub fn implies(self) -> Status {
        match self {
            Criterion::RationalField
            | Criterion::PrimesFiveModTwelveOrThree
            | Criterion::NegativePrimeQuarticNoRoot
            | Criterion::LatticeSumNonzero => Status::NotExists,
            Criterion::PrimeThreeModFour | Criterion::InfiniteOrderWitness => Status::Exists,
            Criterion::PositiveEvenPrimeToThree
            | Criterion::NegativeOneOrFiveModTwelve
            | Criterion::LatticeSumZero => Status::ExistsUnderBsd,
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionMatch {
    pub criterion: Criterion,
    pub justification: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub point: Point<Rational>,
    pub progression: APTriple<QuadElem>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub d: BigInt,
    pub status: Status,
    pub criteria: Vec<CriterionMatch>,
    /// Matches that could not be decided, e.g. a lattice sum too large to
    /// enumerate.
    pub notes: Vec<String>,
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn matched(&self, c: Criterion) -> bool {
        self.criteria.iter().any(|m| m.criterion == c)
    }
}

fn combine(criteria: &[CriterionMatch]) -> Result<Status, AnalyticError> {
    let has = |s: Status| criteria.iter().any(|m| m.criterion.implies() == s);
    let negative = has(Status::NotExists);
    if negative && (has(Status::Exists) || has(Status::ExistsUnderBsd)) {
        let tags: Vec<_> = criteria.iter().map(|m| m.criterion.tag()).collect();
        return Err(AnalyticError::Inconsistent(format!(
            "contradictory criteria matched: {}",
            tags.join(", ")
        )));
    }
    Ok(if negative {
        Status::NotExists
    } else if has(Status::Exists) {
        Status::Exists
    } else if has(Status::ExistsUnderBsd) {
        Status::ExistsUnderBsd
    } else {
        Status::Unknown
    })
}

fn push(out: &mut Vec<CriterionMatch>, criterion: Criterion, justification: String) {
    out.push(CriterionMatch {
        criterion,
        justification,
    });
}

/// Decides, as far as the known criteria allow, whether Q(sqrt D) has a
/// nontrivial three-term progression of cubes. Every matching criterion is
/// recorded; contradictory matches are reported as an internal error.
pub fn classify(d: &BigInt) -> Result<Verdict, AnalyticError> {
    if d.is_zero() {
        return Err(AnalyticError::Zero);
    }
    let dec = squarefree_decompose(d).expect("nonzero");
    if !dec.cofactor.is_one() {
        return Err(AnalyticError::NotSquarefree {
            value: d.clone(),
            core: dec.core,
        });
    }
    let abs = d.abs();
    let primes: Vec<BigInt> = factorize(&abs)
        .expect("nonzero")
        .factors
        .into_iter()
        .map(|(p, _)| p)
        .collect();
    let mut criteria = Vec::new();
    let mut notes = Vec::new();

    if d.is_one() {
        push(
            &mut criteria,
            Criterion::RationalField,
            "Q(sqrt 1) = Q, where every progression of three rational cubes is trivial".into(),
        );
    }

    let five_mod_12 = |p: &BigInt| p == &BigInt::from(3) || p.mod_floor(&BigInt::from(12)) == BigInt::from(5);
    if primes.iter().all(five_mod_12) {
        let scope = if primes.is_empty() {
            "no prime divides D, so the condition holds vacuously".to_string()
        } else {
            let list: Vec<_> = primes.iter().map(|p| p.to_string()).collect();
            format!("prime divisors {{{}}} are each 3 or 5 (mod 12)", list.join(", "))
        };
        push(
            &mut criteria,
            Criterion::PrimesFiveModTwelveOrThree,
            format!("{scope}; the condition is applied regardless of the sign of D"),
        );
    }

    let twelve = BigInt::from(12);
    if d.is_negative() && is_prime(&abs) && abs.mod_floor(&twelve).is_one() && !quartic_minus3_has_root(&abs)? {
        push(
            &mut criteria,
            Criterion::NegativePrimeQuarticNoRoot,
            format!("D = -{abs}, {abs} = 1 (mod 12) and x^4 + 3 has no root mod {abs}"),
        );
    }

    let six = BigInt::from(6);
    if d.is_negative() && abs.gcd(&six).is_one() {
        match abs.to_u64().filter(|&v| v <= CLASSIFY_LATTICE_LIMIT) {
            Some(_) => {
                let r = a_d(&abs)?;
                let criterion = if r.value == 0 {
                    Criterion::LatticeSumZero
                } else {
                    Criterion::LatticeSumNonzero
                };
                let conditional = if r.value == 0 { " (conditional on BSD)" } else { "" };
                push(
                    &mut criteria,
                    criterion,
                    format!("A_{abs} = {} from {} lattice points{conditional}", r.value, r.triple_count),
                );
            }
            None => notes.push(format!(
                "lattice sum A_{abs} not evaluated: above the limit {CLASSIFY_LATTICE_LIMIT}"
            )),
        }
    }

    let four = BigInt::from(4);
    if abs > BigInt::from(3) && is_prime(&abs) && abs.mod_floor(&four) == BigInt::from(3) {
        push(
            &mut criteria,
            Criterion::PrimeThreeModFour,
            format!("|D| = {abs} is a prime congruent to 3 (mod 4)"),
        );
    }

    if d.is_positive() && d.is_even() && !(d % 3u32).is_zero() {
        push(
            &mut criteria,
            Criterion::PositiveEvenPrimeToThree,
            format!("D = {d} is positive, even and prime to 3 (conditional on BSD)"),
        );
    }
    let residue = d.mod_floor(&twelve);
    if d.is_negative() && (residue.is_one() || residue == BigInt::from(5)) {
        push(
            &mut criteria,
            Criterion::NegativeOneOrFiveModTwelve,
            format!("D = {d} is negative and D = {residue} (mod 12) (conditional on BSD)"),
        );
    }

    let status = combine(&criteria)?;
    Ok(Verdict {
        d: d.clone(),
        status,
        criteria,
        notes,
        witness: None,
    })
}

/// Upgrades `v` to an unconditional `Exists` using a rational point of
/// infinite order on `E^D: y^2 = x^3 - 27 D^3`.
pub fn upgrade_with_witness(v: &Verdict, p: &Point<Rational>) -> Result<Verdict, AnalyticError> {
    let twist = Curve::e_twist(&v.d)?;
    if !twist.is_on_curve(p) {
        return Err(crate::elliptic::EllipticError::NotOnCurve(p.to_string()).into());
    }
    if let PointOrder::Finite(n) = twist.point_order(p)? {
        return Err(AnalyticError::FiniteOrder(n));
    }
    let progression = ap_from_twist_point(&v.d, p)?;
    if !is_ap(&progression) || is_trivial_ap(&progression) {
        return Err(AnalyticError::Inconsistent(format!(
            "infinite-order point {p} produced the trivial or invalid triple {progression}"
        )));
    }
    if v.status == Status::NotExists {
        return Err(AnalyticError::Inconsistent(format!(
            "D = {} was classified as having no progression, yet {p} has infinite order",
            v.d
        )));
    }
    let mut out = v.clone();
    push(
        &mut out.criteria,
        Criterion::InfiniteOrderWitness,
        format!("{p} has infinite order on y^2 = x^3 - 27*({})^3", v.d),
    );
    out.status = Status::Exists;
    out.witness = Some(Witness {
        point: p.clone(),
        progression,
    });
    Ok(out)
}
