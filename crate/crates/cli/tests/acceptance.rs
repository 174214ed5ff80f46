//! End-to-end gate. Each check prints one PASS/FAIL line; any failure makes
//! the process exit nonzero.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use cubeprog::table;
use cubeprog::{execute, Cli};
use cubeprog_core::analytic::{a_d, classify, upgrade_with_witness, Criterion, Status};
use cubeprog_core::arith::{is_squarefree, QuadElem, Rational};
use cubeprog_core::elliptic::{
    division_polynomial, e_torsion_over_quadratic, kamienny_factor_scan, torsion_over_q, Curve, IntPolynomial,
    Point,
};
use cubeprog_core::progression::{
    ap_from_point, ap_from_twist_point, is_ap, is_on_c, is_trivial_ap, point_from_ap, twist_point_to_e,
    ProjectiveTriple,
};
use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use serde_json::Value;

type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn table_reproduction() -> Check {
    let rows = table::embedded();
    ensure!(rows.len() == 18, "expected 18 rows, found {}", rows.len());
    let checks = table::verify_rows(&rows, 4);
    let failed: Vec<String> = checks
        .iter()
        .filter(|c| !c.passed())
        .map(|c| format!("D = {} ({})", c.row.d, c.first_failure().unwrap_or("?")))
        .collect();
    ensure!(failed.is_empty(), "failing rows: {}", failed.join(", "));
    Ok(())
}

fn quadratic_torsion() -> Check {
    let g = e_torsion_over_quadratic(&big(-3)).map_err(|e| e.to_string())?;
    ensure!(g.invariants == vec![2, 6], "D = -3 gave {}", g.structure());
    ensure!(g.points.len() == 12, "D = -3 gave {} points", g.points.len());
    let mut fields = 0;
    for d in (-50i64..=50).filter(|&d| d != 0 && d != -3 && is_squarefree(&big(d))) {
        let structure = if d == 1 {
            torsion_over_q(&Curve::e()).map_err(|e| e.to_string())?.invariants
        } else {
            e_torsion_over_quadratic(&big(d)).map_err(|e| format!("D = {d}: {e}"))?.invariants
        };
        ensure!(structure == vec![2], "D = {d} gave invariants {structure:?}");
        fields += 1;
    }
    ensure!(fields == 61, "checked {fields} fields");
    Ok(())
}

fn rational_torsion() -> Check {
    let g = torsion_over_q(&Curve::e()).map_err(|e| e.to_string())?;
    ensure!(g.invariants == vec![2], "structure {}", g.structure());
    let affine: Vec<&Point<Rational>> = g.points.iter().filter(|p| !p.is_infinity()).collect();
    ensure!(affine == vec![&Point::affine(q(3), q(0))], "affine points {affine:?}");
    Ok(())
}

fn factor_scan() -> Check {
    let scan = kamienny_factor_scan().map_err(|e| e.to_string())?;
    let found: BTreeSet<IntPolynomial> = scan.iter().map(|f| f.factor.clone()).collect();
    let expected: BTreeSet<IntPolynomial> = [
        IntPolynomial::from_i64s(&[0, 1]),
        IntPolynomial::from_i64s(&[-3, 1]),
        IntPolynomial::from_i64s(&[9, 3, 1]),
        IntPolynomial::from_i64s(&[-18, -6, 1]),
    ]
    .into_iter()
    .collect();
    ensure!(scan.len() == 4 && found == expected, "scan returned {found:?}");
    let e = Curve::e();
    for f in &scan {
        ensure!(!f.sources.is_empty(), "{} has no source", f.factor);
        for &n in &f.sources {
            let psi = division_polynomial(&e, n).map_err(|e| e.to_string())?;
            let (_, rem) = psi.to_rat().div_rem(&f.factor.to_rat());
            ensure!(rem.is_zero(), "{} leaves a remainder in order {n}", f.factor);
        }
    }
    Ok(())
}

fn lattice_oracle(d: i64) -> i64 {
    let r = (d as f64).sqrt() as i64 + 1;
    let mut value = 0;
    for m in -r..=r {
        for n in -r..=r {
            for k in -r..=r {
                if m * m + n * n + k * k == d
                    && m.rem_euclid(3) == 1
                    && n.rem_euclid(3) == 0
                    && (m + n).rem_euclid(2) == 1
                {
                    value += if n.rem_euclid(2) == 0 { 1 } else { -1 };
                }
            }
        }
    }
    value
}

fn lattice_sums() -> Check {
    let value = |d: i64| a_d(&big(d)).map(|r| r.value).map_err(|e| format!("d = {d}: {e}"));
    let mut checked = 0;
    for d in (1i64..=500).filter(|d| d % 2 == 1 && d % 3 != 0 && is_squarefree(&big(*d))) {
        let (got, want) = (value(d)?, lattice_oracle(d));
        ensure!(got == want, "A_{d} = {got}, oracle {want}");
        checked += 1;
    }
    ensure!(checked > 100, "only {checked} values compared");
    for (d, want) in [(1, 1), (5, 2), (7, 0), (11, 0), (13, -2)] {
        ensure!(value(d)? == want, "A_{d} = {}, expected {want}", value(d)?);
    }
    for d in [7, 11, 19, 23] {
        ensure!(value(d)? == 0, "A_{d} is nonzero despite a known point on the twist");
        ensure!(table::witness_for(&big(d)).is_some(), "no table point for {d}");
    }
    Ok(())
}

fn run_classify(d: &str) -> Result<Value, String> {
    let cli = Cli::try_parse_from(["cubeprog", "--json", "classify", d]).map_err(|e| e.to_string())?;
    execute(&cli).map(|o| o.payload).map_err(|e| e.message().to_string())
}

fn classifier_regression() -> Check {
    let expect = |d: i64, status: Status, must: &[Criterion]| -> Check {
        let v = classify(&big(d)).map_err(|e| e.to_string())?;
        ensure!(v.status == status, "classify({d}) = {}, expected {}", v.status.as_str(), status.as_str());
        for c in must {
            ensure!(v.matched(*c), "classify({d}) missing {}", c.tag());
        }
        Ok(())
    };
    expect(7, Status::Exists, &[Criterion::PrimeThreeModFour])?;
    expect(-7, Status::Exists, &[Criterion::PrimeThreeModFour])?;
    expect(5, Status::NotExists, &[Criterion::PrimesFiveModTwelveOrThree])?;
    expect(-3, Status::NotExists, &[Criterion::PrimesFiveModTwelveOrThree])?;
    expect(-13, Status::NotExists, &[Criterion::NegativePrimeQuarticNoRoot, Criterion::LatticeSumNonzero])?;
    expect(10, Status::ExistsUnderBsd, &[Criterion::PositiveEvenPrimeToThree])?;
    expect(-11, Status::Exists, &[Criterion::NegativeOneOrFiveModTwelve])?;
    expect(37, Status::Unknown, &[])?;

    for d in [10i64, -11] {
        let before = classify(&big(d)).map_err(|e| e.to_string())?;
        let row = table::witness_for(&big(d)).ok_or(format!("no table row for {d}"))?;
        let after = upgrade_with_witness(&before, &row.point()).map_err(|e| e.to_string())?;
        ensure!(after.status == Status::Exists, "{d} not upgraded");
        ensure!(after.matched(Criterion::InfiniteOrderWitness), "{d} lacks the witness criterion");
        let w = after.witness.as_ref().ok_or(format!("{d} has no witness"))?;
        ensure!(is_ap(&w.progression) && !is_trivial_ap(&w.progression), "{d} witness is trivial");

        let payload = run_classify(&d.to_string())?;
        ensure!(payload["status"] == "exists", "cli classify {d}: {}", payload["status"]);
        ensure!(payload["witness_source"] == "table", "cli classify {d}: {}", payload["witness_source"]);
    }
    let payload = run_classify("37")?;
    ensure!(payload["status"] == "unknown", "cli classify 37: {}", payload["status"]);
    Ok(())
}

fn root2() -> QuadElem {
    QuadElem::sqrt_radicand(&big(2)).expect("2 is squarefree")
}

fn root2_multiple(k: i64) -> Point<QuadElem> {
    let s = root2();
    let g = Point::affine(s.embed(&q(5)), s.scale(&q(7)));
    Curve::e().scalar_mul(&big(k), &g).expect("on curve")
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    (-60i64..60, 1i64..25)
        .prop_filter("nonzero", |(n, _)| *n != 0)
        .prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn property<S: Strategy>(
    name: &str,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Check {
    let mut runner = TestRunner::new(Config { cases: 200, failure_persistence: None, ..Config::default() });
    runner.run(&strategy, test).map_err(|e| format!("{name}: {e}"))
}

fn map_identities() -> Check {
    property("projective round trip", (-8i64..=8, nonzero_rational()), |(k, scale)| {
        let p = root2_multiple(k);
        let proj = ProjectiveTriple::from_point(&p, &root2());
        let t = ap_from_point(&proj).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let back = point_from_ap(&t).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert!(back.is_on_e());
        prop_assert_eq!(&back, &proj);
        prop_assert_eq!(back.to_point(), p);
        let scaled = point_from_ap(&t.scale(&root2().embed(&scale))).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(scaled, proj);
        Ok(())
    })?;
    let rows = table::embedded();
    property("progression lies on the cubic", (0..rows.len(), -3i64..=3), |(i, k)| {
        let row = &rows[i];
        let twist = Curve::e_twist(&row.d).unwrap();
        let p = twist.scalar_mul(&big(k), &row.point()).unwrap();
        prop_assume!(!p.is_infinity());
        let t = ap_from_twist_point(&row.d, &p).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let [a, b, c] = t.cubes();
        prop_assert!((&(&a + &c) - &b.scale(&q(2))).is_zero());
        prop_assert!(is_on_c(&t) && !is_trivial_ap(&t));
        Ok(())
    })?;
    property("twisted isogeny identity", (nonzero_rational(), -40i64..40), |(x, d)| {
        let dc = q(d) * q(d) * q(d);
        let x3 = &x * &x * &x;
        let a = &x3 + q(4) * &dc;
        let b = &x3 - q(8) * &dc;
        prop_assert_eq!(&a * &a * &a - q(27) * &dc * &x3 * &x3, (&x3 + &dc) * &b * &b);
        Ok(())
    })?;
    property("group law on multiples of (5, 7 sqrt 2)", (-5i64..=5, -5i64..=5, -5i64..=5), |(a, b, c)| {
        let e = Curve::e();
        let (p, r, s) = (root2_multiple(a), root2_multiple(b), root2_multiple(c));
        let pr = e.add(&p, &r).unwrap();
        prop_assert!(e.is_on_curve(&pr));
        prop_assert_eq!(&pr, &e.add(&r, &p).unwrap());
        prop_assert_eq!(e.add(&pr, &s).unwrap(), e.add(&p, &e.add(&r, &s).unwrap()).unwrap());
        prop_assert_eq!(pr, root2_multiple(a + b));
        Ok(())
    })?;
    Ok(())
}

fn worked_example() -> Check {
    let d = big(2);
    let p = Point::affine(q(10), q(28));
    ensure!(Curve::e_twist(&d).unwrap().is_on_curve(&p), "(10, 28) is not on the twist");
    let image = twist_point_to_e(&d, &p).map_err(|e| e.to_string())?;
    let s = root2();
    ensure!(image == Point::affine(s.embed(&q(5)), s.scale(&q(7))), "image {image}");

    let t = ap_from_twist_point(&d, &p).map_err(|e| e.to_string())?;
    let expected = [
        QuadElem::new(q(9), q(7), d.clone()).unwrap(),
        s.embed(&q(15)),
        QuadElem::new(q(9), q(-7), d.clone()).unwrap(),
    ];
    let lead = t.terms()[1].clone() / expected[1].clone();
    ensure!(!lead.is_zero(), "middle term vanishes");
    let normalized: Vec<QuadElem> = t.terms().iter().map(|x| x.clone() / lead.clone()).collect();
    ensure!(normalized == expected, "progression {normalized:?}");

    let cubes: Vec<QuadElem> = expected.iter().map(|x| x.pow(3)).collect();
    let diff = s.scale(&q(-2387));
    // (9 + 7r)^3 = 729 + 1701r + 2646 + 686r with r^2 = 2
    let oracle = QuadElem::new(q(729 + 2646), q(1701 + 686), d.clone()).unwrap();
    ensure!(cubes[0] == oracle, "first cube {}", cubes[0]);
    ensure!(&cubes[1] - &cubes[0] == diff, "first difference {}", &cubes[1] - &cubes[0]);
    ensure!(&cubes[2] - &cubes[1] == diff, "second difference {}", &cubes[2] - &cubes[1]);
    ensure!(is_ap(&t) && !is_trivial_ap(&t), "pipeline progression rejected");
    Ok(())
}

fn main() -> ExitCode {
    let checks: [(&str, fn() -> Check); 8] = [
        ("table reproduction", table_reproduction),
        ("torsion over quadratic fields", quadratic_torsion),
        ("rational torsion of E", rational_torsion),
        ("division polynomial factor scan", factor_scan),
        ("lattice sums", lattice_sums),
        ("classifier regression set", classifier_regression),
        ("map identities", map_identities),
        ("worked example D = 2", worked_example),
    ];
    let mut failures = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(()) => println!("PASS {} {name} ({secs:.1}s)", i + 1),
            Err(msg) => {
                failures += 1;
                println!("FAIL {} {name} ({secs:.1}s): {msg}", i + 1);
            }
        }
    }
    println!("{}/{} acceptance checks passed", checks.len() - failures, checks.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
