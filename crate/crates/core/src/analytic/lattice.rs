use num_bigint::BigInt;
use num_integer::{Integer as _, Roots};
use num_traits::{One, Signed, ToPrimitive};

use super::AnalyticError;
use crate::arith::{is_prime, is_prime_u64, squarefree_decompose};

/// Largest `d` accepted by [`a_d`]; the enumeration is linear in `d`.
pub const LATTICE_LIMIT: u64 = 1_000_000_000;

/// Below this bound [`quartic_minus3_has_root`] scans every residue.
const SCAN_LIMIT: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ADResult {
    pub d: u64,
    pub value: i64,
    /// Number of lattice points `(m, n, k)` that entered the sum.
    pub triple_count: u64,
}

fn validate(d: &BigInt) -> Result<u64, AnalyticError> {
    if !d.is_positive() {
        return Err(AnalyticError::NonPositive(d.clone()));
    }
    let dec = squarefree_decompose(d).expect("nonzero");
    if !dec.cofactor.is_one() {
        return Err(AnalyticError::NotSquarefree {
            value: d.clone(),
            core: dec.core,
        });
    }
    if !d.gcd(&BigInt::from(6)).is_one() {
        return Err(AnalyticError::NotCoprimeToSix(d.clone()));
    }
    match d.to_u64() {
        Some(v) if v <= LATTICE_LIMIT => Ok(v),
        _ => Err(AnalyticError::TooLarge {
            value: d.clone(),
            limit: LATTICE_LIMIT,
        }),
    }
}

/// Calls `visit(m, n, k)` for each integer solution of `m^2 + n^2 + k^2 = d`
/// with `m = 1 (mod 3)`, `n = 0 (mod 3)` and `m + n` odd.
fn for_each_solution(d: u64, mut visit: impl FnMut(i64, i64, i64)) {
    let r = d.sqrt() as i64;
    // least m >= -r with m = 1 (mod 3)
    let m_start = -r + (1 + r).rem_euclid(3);
    let n_start = -r + r.rem_euclid(3);
    for m in (m_start..=r).step_by(3) {
        let rest_m = d - (m * m) as u64;
        for n in (n_start..=r).step_by(3) {
            if (m + n).rem_euclid(2) != 1 || ((n * n) as u64) > rest_m {
                continue;
            }
            let rest = rest_m - (n * n) as u64;
            let k = rest.sqrt();
            if k * k != rest {
                continue;
            }
            let k = k as i64;
            visit(m, n, k);
            if k != 0 {
                visit(m, n, -k);
            }
        }
    }
}

/// `sum (-1)^n` over the lattice points above. Requires `d` positive,
/// squarefree and coprime to 6.
pub fn a_d(d: &BigInt) -> Result<ADResult, AnalyticError> {
    let d = validate(d)?;
    let mut value = 0i64;
    let mut count = 0u64;
    for_each_solution(d, |_, n, _| {
        value += if n % 2 == 0 { 1 } else { -1 };
        count += 1;
    });
    Ok(ADResult {
        d,
        value,
        triple_count: count,
    })
}

/// The lattice points behind [`a_d`], sorted.
pub fn a_d_solutions(d: &BigInt) -> Result<Vec<(i64, i64, i64)>, AnalyticError> {
    let d = validate(d)?;
    let mut out = Vec::new();
    for_each_solution(d, |m, n, k| out.push((m, n, k)));
    out.sort();
    Ok(out)
}

/// Whether `x^4 + 3 = 0` has a solution modulo the prime `p`.
pub fn quartic_minus3_has_root(p: &BigInt) -> Result<bool, AnalyticError> {
    if !is_prime(p) {
        return Err(AnalyticError::NotPrime(p.clone()));
    }
    if let Some(small) = p.to_u64().filter(|&v| v < SCAN_LIMIT) {
        debug_assert!(is_prime_u64(small));
        return Ok(quartic_scan(small));
    }
    // p > 3 here, so -3 is a unit and x^4 = -3 is solvable exactly when
    // -3 is a g-th power residue, g = gcd(4, p - 1).
    let pm1: BigInt = p - 1u32;
    let g = pm1.gcd(&BigInt::from(4));
    let minus3 = (p - 3u32) % p;
    Ok((minus3.modpow(&(&pm1 / &g), p)).is_one())
}

fn quartic_scan(p: u64) -> bool {
    let p = p as u128;
    (0..p).any(|x| {
        let x2 = x * x % p;
        (x2 * x2 + 3) % p == 0
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ad(d: i64) -> i64 {
        a_d(&BigInt::from(d)).unwrap().value
    }

    #[test]
    fn small_values() {
        assert_eq!(ad(1), 1);
        assert_eq!(ad(5), 2);
        assert_eq!(ad(7), 0);
        assert_eq!(ad(11), 0);
        assert_eq!(ad(13), -2);
        assert_eq!(a_d(&BigInt::from(7)).unwrap().triple_count, 0);
        assert_eq!(a_d_solutions(&BigInt::from(13)).unwrap(), vec![(-2, -3, 0), (-2, 3, 0)]);
        assert_eq!(a_d_solutions(&BigInt::from(5)).unwrap(), vec![(1, 0, -2), (1, 0, 2)]);
    }

    #[test]
    fn invalid_inputs_have_distinct_reasons() {
        assert!(matches!(a_d(&BigInt::from(0)), Err(AnalyticError::NonPositive(_))));
        assert!(matches!(a_d(&BigInt::from(-5)), Err(AnalyticError::NonPositive(_))));
        assert!(matches!(a_d(&BigInt::from(25)), Err(AnalyticError::NotSquarefree { .. })));
        assert!(matches!(a_d(&BigInt::from(6)), Err(AnalyticError::NotCoprimeToSix(_))));
        assert!(matches!(a_d(&BigInt::from(35)), Ok(_)));
    }

    #[test]
    fn quartic_examples() {
        let has = |p: i64| quartic_minus3_has_root(&BigInt::from(p)).unwrap();
        assert!(!has(13));
        assert!(has(3));
        assert!(has(2));
        // 3^4 + 3 = 84 = 12 * 7
        assert!(has(7));
        assert!(has(37) && has(61) && !has(73) && !has(97));
        assert!(quartic_minus3_has_root(&BigInt::from(15)).is_err());
    }

    #[test]
    fn residue_test_agrees_with_scan() {
        let criterion = |p: u64| {
            let big = BigInt::from(p);
            let pm1 = &big - 1u32;
            let g = pm1.gcd(&BigInt::from(4));
            BigInt::from(p - 3).modpow(&(&pm1 / &g), &big).is_one()
        };
        for p in (5u64..5000).filter(|&p| is_prime_u64(p)) {
            assert_eq!(quartic_scan(p), criterion(p), "p = {p}");
        }
    }

    #[test]
    fn large_prime_path() {
        // 1_000_003 = 3 (mod 4): fourth powers are the squares, and -3 is a
        // square modulo p exactly when p = 1 (mod 3).
        let p = BigInt::from(1_000_003u64);
        assert!(is_prime(&p));
        let expected = 1_000_003u64 % 3 == 1;
        assert_eq!(quartic_minus3_has_root(&p).unwrap(), expected);
        assert_eq!(quartic_scan(1_000_003), expected);
    }
}
