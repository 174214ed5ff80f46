//! The embedded table of rational points of infinite order on `E^D`,
//! and its row-by-row verification.

use std::thread;

use cubeprog_core::arith::{parse_rational, QuadElem, Rational};
use cubeprog_core::elliptic::{Curve, Point, PointOrder};
use cubeprog_core::progression::{ap_from_twist_point, is_ap, is_trivial_ap, APTriple};
use num_bigint::BigInt;
use serde::Deserialize;

pub const EMBEDDED: &str = include_str!("../../../data/table_s5.csv");

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub d: BigInt,
    pub x: Rational,
    pub y: Rational,
}

impl TableRow {
    pub fn point(&self) -> Point<Rational> {
        Point::affine(self.x.clone(), self.y.clone())
    }
}

#[derive(Deserialize)]
struct RawRow {
    #[serde(rename = "D")]
    d: String,
    x: String,
    y: String,
}

/// Parses `D,x,y` rows with fractions written `p/q`.
pub fn parse_table(text: &str) -> Result<Vec<TableRow>, String> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (i, record) in reader.deserialize::<RawRow>().enumerate() {
        let line = i + 2;
        let raw = record.map_err(|e| format!("line {line}: {e}"))?;
        let d = raw
            .d
            .parse::<BigInt>()
            .map_err(|_| format!("line {line}: D = {:?} is not an integer", raw.d))?;
        let x = parse_rational(&raw.x).map_err(|e| format!("line {line}: {e}"))?;
        let y = parse_rational(&raw.y).map_err(|e| format!("line {line}: {e}"))?;
        rows.push(TableRow { d, x, y });
    }
    Ok(rows)
}

pub fn embedded() -> Vec<TableRow> {
    parse_table(EMBEDDED).expect("embedded table is well formed")
}

pub fn witness_for(d: &BigInt) -> Option<TableRow> {
    embedded().into_iter().find(|r| &r.d == d)
}

/// The predicates checked per row, in the order they are evaluated.
pub const PREDICATES: [&str; 5] = ["on_curve", "infinite_order", "ap_built", "is_ap", "non_trivial"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowCheck {
    pub row: TableRow,
    /// One entry per [`PREDICATES`] name; `None` when an earlier check failed.
    pub results: [Option<bool>; 5],
    pub order: Option<PointOrder>,
    pub progression: Option<APTriple<QuadElem>>,
}

impl RowCheck {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| *r == Some(true))
    }

    pub fn first_failure(&self) -> Option<&'static str> {
        PREDICATES
            .iter()
            .zip(&self.results)
            .find(|(_, r)| **r != Some(true))
            .map(|(name, _)| *name)
    }
}

pub fn check_row(row: &TableRow) -> RowCheck {
    let mut check = RowCheck {
        row: row.clone(),
        results: [None; 5],
        order: None,
        progression: None,
    };
    let p = row.point();
    let Ok(curve) = Curve::e_twist(&row.d) else {
        check.results[0] = Some(false);
        return check;
    };
    let on_curve = curve.is_on_curve(&p);
    check.results[0] = Some(on_curve);
    if !on_curve {
        return check;
    }
    let order = curve.point_order(&p).ok();
    check.order = order;
    let infinite = order == Some(PointOrder::Infinite);
    check.results[1] = Some(infinite);
    if !infinite {
        return check;
    }
    match ap_from_twist_point(&row.d, &p) {
        Ok(t) => {
            check.results[2] = Some(true);
            check.results[3] = Some(is_ap(&t));
            check.results[4] = Some(!is_trivial_ap(&t));
            check.progression = Some(t);
        }
        Err(_) => check.results[2] = Some(false),
    }
    check
}

/// Worker count from `CUBEPROG_THREADS`; unset, empty or 0 means
/// sequential.
pub fn threads_from_env() -> usize {
    std::env::var("CUBEPROG_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .unwrap_or(0)
}

/// Checks every row, fanning out to `threads` workers when above 1. The
/// result order always matches the input order.
pub fn verify_rows(rows: &[TableRow], threads: usize) -> Vec<RowCheck> {
    if threads <= 1 || rows.len() <= 1 {
        return rows.iter().map(check_row).collect();
    }
    let workers = threads.min(rows.len());
    let mut slots: Vec<Option<RowCheck>> = vec![None; rows.len()];
    thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                scope.spawn(move || {
                    (w..rows.len())
                        .step_by(workers)
                        .map(|i| (i, check_row(&rows[i])))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (i, c) in h.join().expect("verification worker panicked") {
                slots[i] = Some(c);
            }
        }
    });
    slots.into_iter().map(|c| c.expect("every row checked")).collect()
}
