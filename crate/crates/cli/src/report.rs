//! Conversion of exact values into report payloads. Every number is a
//! decimal string so no precision is lost in JSON.

use cubeprog_core::analytic::Verdict;
use cubeprog_core::arith::{format_rational, QuadElem, Rational};
use cubeprog_core::elliptic::{FieldElement, Point, PointOrder, TorsionGroup};
use cubeprog_core::progression::{is_ap, is_trivial_ap, APTriple};
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

/// Values that print as one exact string.
pub trait Exact {
    fn exact(&self) -> String;
}

impl Exact for Rational {
    fn exact(&self) -> String {
        format_rational(self)
    }
}

impl Exact for QuadElem {
    fn exact(&self) -> String {
        self.to_string()
    }
}

pub fn point<F: Exact>(p: &Point<F>) -> Value {
    match p {
        Point::Infinity => json!("infinity"),
        Point::Affine { x, y } => json!({ "x": x.exact(), "y": y.exact() }),
    }
}

pub fn order(o: PointOrder) -> Value {
    json!(o.to_string())
}

pub fn progression<F: FieldElement + Exact>(t: &APTriple<F>) -> Value {
    let terms: Vec<String> = t.terms().iter().map(Exact::exact).collect();
    let cubes: Vec<String> = t.cubes().iter().map(Exact::exact).collect();
    json!({
        "terms": terms,
        "cubes": cubes,
        "common_difference": t.common_difference().exact(),
        "is_ap": is_ap(t),
        "is_trivial": is_trivial_ap(t),
    })
}

/// Floating-point rendering of `a + b sqrt d`, for `--approx` only.
pub fn approximate(v: &QuadElem) -> String {
    let a = v.rational_part().to_f64().unwrap_or(f64::NAN);
    let b = v.irrational_part().to_f64().unwrap_or(f64::NAN);
    let d = v.radicand().to_f64().unwrap_or(f64::NAN);
    if d > 0.0 {
        format!("{:.12}", a + b * d.sqrt())
    } else {
        format!("{:.12} + {:.12}*i", a, b * (-d).sqrt())
    }
}

pub fn approximate_progression(t: &APTriple<QuadElem>) -> Value {
    let terms: Vec<String> = t.terms().iter().map(approximate).collect();
    json!({ "note": "floating-point approximation, not exact", "terms": terms })
}

pub fn torsion<F: Exact>(g: &TorsionGroup<F>, orders: &[PointOrder]) -> Value {
    let generators: Vec<Value> = g
        .generators
        .iter()
        .zip(&g.invariants)
        .map(|(p, n)| json!({ "point": point(p), "order": n.to_string() }))
        .collect();
    let points: Vec<Value> = g
        .points
        .iter()
        .zip(orders)
        .map(|(p, o)| json!({ "point": point(p), "order": o.to_string() }))
        .collect();
    json!({
        "structure": g.structure(),
        "invariants": g.invariants.iter().map(|n| n.to_string()).collect::<Vec<_>>(),
        "order": g.order().to_string(),
        "generators": generators,
        "points": points,
    })
}

pub fn verdict(v: &Verdict, approx: bool) -> Map<String, Value> {
    let mut out = Map::new();
    out.insert("D".into(), json!(v.d.to_string()));
    out.insert("status".into(), json!(v.status.as_str()));
    let criteria: Vec<Value> = v
        .criteria
        .iter()
        .map(|m| {
            json!({
                "tag": m.criterion.tag(),
                "implies": m.criterion.implies().as_str(),
                "justification": m.justification,
            })
        })
        .collect();
    out.insert("criteria".into(), Value::Array(criteria));
    if !v.notes.is_empty() {
        out.insert("notes".into(), json!(v.notes));
    }
    if let Some(w) = &v.witness {
        let mut witness = Map::new();
        witness.insert("point".into(), point(&w.point));
        witness.insert("progression".into(), progression(&w.progression));
        if approx {
            witness.insert("approximate".into(), approximate_progression(&w.progression));
        }
        out.insert("witness".into(), Value::Object(witness));
    }
    out
}
