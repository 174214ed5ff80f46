//! Division polynomials with `y^2` eliminated, and the low-degree factor
//! scan over the prime-order candidates for torsion over quadratic fields.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;

use super::curve::Curve;
use super::factors::low_degree_factors;
use super::poly::IntPolynomial;
use super::EllipticError;

/// Orders worth checking for torsion growth over a quadratic field: the
/// primes that can divide such a torsion order, plus 4 because `E` already
/// has a rational 2-torsion point.
pub const SCAN_ORDERS: [u32; 7] = [2, 3, 4, 5, 7, 11, 13];

/// Builds `f_n` where `psi_n = f_n` for odd `n` and `psi_n = y f_n` for
/// even `n`, using `y^2 = x^3 + a x + b` to stay in `Z[x]`.
struct DivisionTable {
    curve_rhs: IntPolynomial,
    cache: HashMap<u32, IntPolynomial>,
}

impl DivisionTable {
    fn new(a: &BigInt, b: &BigInt) -> Self {
        let x = |c: &[i64]| IntPolynomial::from_i64s(c);
        let c = |k: i64| BigInt::from(k);
        let a2 = a * a;
        let mut cache = HashMap::new();
        cache.insert(0, IntPolynomial::default());
        cache.insert(1, x(&[1]));
        cache.insert(2, x(&[2]));
        cache.insert(
            3,
            IntPolynomial::new(vec![-&a2, c(12) * b, c(6) * a, c(0), c(3)]),
        );
        cache.insert(
            4,
            IntPolynomial::new(vec![
                c(-4) * (c(8) * b * b + &a2 * a),
                c(-16) * a * b,
                c(-20) * &a2,
                c(80) * b,
                c(20) * a,
                c(0),
                c(4),
            ]),
        );
        let curve_rhs = IntPolynomial::new(vec![b.clone(), a.clone(), c(0), c(1)]);
        DivisionTable { curve_rhs, cache }
    }

    fn get(&mut self, n: u32) -> IntPolynomial {
        if let Some(f) = self.cache.get(&n) {
            return f.clone();
        }
        let m = n / 2;
        let f = if n % 2 == 1 {
            // psi_{2m+1} = psi_{m+2} psi_m^3 - psi_{m-1} psi_{m+1}^3
            let y4 = self.curve_rhs.pow(2);
            let (fm2, fm, fm1, fp1) = (self.get(m + 2), self.get(m), self.get(m - 1), self.get(m + 1));
            let left = &fm2 * &fm.pow(3);
            let right = &fm1 * &fp1.pow(3);
            if m % 2 == 0 {
                &(&y4 * &left) - &right
            } else {
                &left - &(&y4 * &right)
            }
        } else {
            // psi_{2m} = psi_m (psi_{m+2} psi_{m-1}^2 - psi_{m-2} psi_{m+1}^2) / (2y)
            let (fm, fm2, fm1, fmm2, fp1) =
                (self.get(m), self.get(m + 2), self.get(m - 1), self.get(m - 2), self.get(m + 1));
            let inner = &(&fm2 * &fm1.pow(2)) - &(&fmm2 * &fp1.pow(2));
            (&fm * &inner).div_exact(&BigInt::from(2))
        };
        self.cache.insert(n, f.clone());
        f
    }
}

/// The polynomial in `x` cutting out the points of order dividing `n`
/// other than the identity:
///
/// * `n = 2`: `x^3 + a x + b`;
/// * odd `n`: `psi_n` itself;
/// * even `n > 2`: `psi_n / (2y)`, the part beyond the 2-torsion.
pub fn division_polynomial(curve: &Curve, n: u32) -> Result<IntPolynomial, EllipticError> {
    if n < 2 {
        return Err(EllipticError::InvalidDivisionIndex(n));
    }
    let (a, b) = curve
        .integer_coefficients()
        .ok_or(EllipticError::NonIntegralModel)?;
    let mut table = DivisionTable::new(&a, &b);
    Ok(match n {
        2 => table.curve_rhs.clone(),
        n if n % 2 == 1 => table.get(n),
        n => table.get(n).div_exact(&BigInt::from(2)),
    })
}

/// One irreducible factor together with the orders whose division
/// polynomial it divides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanFactor {
    pub factor: IntPolynomial,
    pub sources: Vec<u32>,
}

/// Collects the irreducible factors of degree at most two of the division
/// polynomials of `curve` for each order in `orders`. Every reported factor
/// has been checked to divide its source polynomial exactly.
pub fn low_degree_division_factors(
    curve: &Curve,
    orders: &[u32],
) -> Result<Vec<ScanFactor>, EllipticError> {
    let polys = orders
        .iter()
        .map(|&n| division_polynomial(curve, n).map(|f| (n, f)))
        .collect::<Result<Vec<_>, _>>()?;
    let per_order: Vec<Result<(u32, Vec<IntPolynomial>), EllipticError>> =
        std::thread::scope(|scope| {
            let handles: Vec<_> = polys
                .iter()
                .map(|(n, f)| scope.spawn(move || low_degree_factors(f).map(|fs| (*n, fs))))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("factor worker panicked"))
                .collect()
        });

    let mut merged: BTreeMap<(usize, IntPolynomial), Vec<u32>> = BTreeMap::new();
    for (result, (_, source)) in per_order.into_iter().zip(&polys) {
        let (n, factors) = result?;
        for factor in factors {
            if !factor.to_rat().divides(&source.to_rat()) {
                return Err(EllipticError::FactorCheckFailed(factor.to_string(), n));
            }
            let key = (factor.degree().unwrap_or(0), factor);
            merged.entry(key).or_default().push(n);
        }
    }
    Ok(merged
        .into_iter()
        .map(|((_, factor), sources)| ScanFactor { factor, sources })
        .collect())
}

/// The factor scan for `E: y^2 = x^3 - 27` over [`SCAN_ORDERS`].
pub fn kamienny_factor_scan() -> Result<Vec<ScanFactor>, EllipticError> {
    low_degree_division_factors(&Curve::e(), &SCAN_ORDERS)
}
