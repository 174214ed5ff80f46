use cubeprog_core::analytic::{a_d, a_d_solutions, AnalyticError};
use cubeprog_core::arith::is_squarefree;
use num_bigint::BigInt;
use proptest::prelude::*;

/// Brute force over the full box, k outermost, congruences checked last.
fn oracle(d: i64) -> (i64, u64) {
    let r = (d as f64).sqrt() as i64 + 1;
    let (mut value, mut count) = (0, 0);
    for k in -r..=r {
        for n in -r..=r {
            for m in -r..=r {
                if m * m + n * n + k * k != d {
                    continue;
                }
                if m.rem_euclid(3) == 1 && n.rem_euclid(3) == 0 && (m + n).rem_euclid(2) == 1 {
                    value += if n % 2 == 0 { 1 } else { -1 };
                    count += 1;
                }
            }
        }
    }
    (value, count)
}

fn valid(d: i64) -> bool {
    d > 0 && d % 2 != 0 && d % 3 != 0 && is_squarefree(&BigInt::from(d))
}

#[test]
fn matches_box_enumeration_up_to_500() {
    let mut checked = 0;
    for d in (1..=500).filter(|&d| valid(d)) {
        let r = a_d(&BigInt::from(d)).unwrap();
        assert_eq!((r.value, r.triple_count), oracle(d), "d = {d}");
        assert!(r.value.unsigned_abs() <= r.triple_count);
        checked += 1;
    }
    assert!(checked > 100);
}

#[test]
fn spot_values() {
    for (d, v) in [(1, 1), (5, 2), (7, 0), (11, 0), (13, -2)] {
        assert_eq!(a_d(&BigInt::from(d)).unwrap().value, v, "d = {d}");
    }
}

#[test]
fn vanishes_where_negative_twists_have_points() {
    for d in [7, 11, 19, 23] {
        assert_eq!(a_d(&BigInt::from(d)).unwrap().value, 0, "d = {d}");
    }
}

#[test]
fn rejects_out_of_domain() {
    for d in [-7, 0] {
        assert!(matches!(a_d(&BigInt::from(d)), Err(AnalyticError::NonPositive(_))));
    }
    for d in [49, 125, 245] {
        assert!(matches!(a_d(&BigInt::from(d)), Err(AnalyticError::NotSquarefree { .. })));
    }
    for d in [2, 3, 6, 15, 35 * 2] {
        assert!(matches!(a_d(&BigInt::from(d)), Err(AnalyticError::NotCoprimeToSix(_))));
    }
}

proptest! {
    #[test]
    fn solutions_are_symmetric_in_k(d in 1i64..3000) {
        prop_assume!(valid(d));
        let sols = a_d_solutions(&BigInt::from(d)).unwrap();
        let mut reflected: Vec<_> = sols.iter().map(|&(m, n, k)| (m, n, -k)).collect();
        reflected.sort();
        prop_assert_eq!(&reflected, &sols);
        let zero_k = sols.iter().filter(|s| s.2 == 0).count();
        prop_assert_eq!((sols.len() - zero_k) % 2, 0);
        for &(m, n, k) in &sols {
            prop_assert_eq!(m * m + n * n + k * k, d);
        }
    }
}
