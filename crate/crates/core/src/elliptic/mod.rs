//! Curves in short Weierstrass form over Q and quadratic fields, their
//! division polynomials and torsion subgroups.

use num_bigint::BigInt;
use thiserror::Error;

use crate::arith::ArithError;

pub mod curve;
pub mod division;
pub mod factors;
pub mod numeric;
pub mod poly;
pub mod torsion;

pub use curve::{Curve, FieldElement, Point, PointOrder};
pub use division::{division_polynomial, kamienny_factor_scan, low_degree_division_factors, ScanFactor, SCAN_ORDERS};
pub use factors::{low_degree_factors, rational_roots, roots_in_field, roots_in_quadratic_field};
pub use poly::{IntPolynomial, RatPoly};
pub use torsion::{assemble_group, e_torsion_over_quadratic, lift_twist_point, torsion_over_q, torsion_over_quadratic, TorsionGroup};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EllipticError {
    #[error("singular curve (zero discriminant)")]
    Singular,
    #[error("twist parameter {0} must be a nonzero squarefree integer")]
    InvalidTwist(BigInt),
    #[error("point {0} is not on the curve")]
    NotOnCurve(String),
    #[error("coordinates lie in different fields")]
    FieldMismatch,
    #[error("the zero polynomial has no finite root set")]
    ZeroPolynomial,
    #[error("root approximation for a degree {degree} polynomial did not converge in {iterations} iterations")]
    RootIsolation { degree: usize, iterations: usize },
    #[error("curve coefficients must be integers")]
    NonIntegralModel,
    #[error("division polynomial index must be at least 2, got {0}")]
    InvalidDivisionIndex(u32),
    #[error("factor {0} does not divide the order-{1} division polynomial")]
    FactorCheckFailed(String, u32),
    #[error("torsion points do not form a group: {0}")]
    InconsistentGroup(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}
