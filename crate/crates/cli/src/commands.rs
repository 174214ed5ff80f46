//! Command definitions and dispatch. Each command produces a JSON payload
//! and an exit code; rendering happens in `main`.

use clap::{Args, Parser, Subcommand};
use cubeprog_core::analytic::{self, AnalyticError, Status};
use cubeprog_core::arith::{parse_rational, squarefree_decompose, Rational};
use cubeprog_core::elliptic::{e_torsion_over_quadratic, Curve, EllipticError, Point, PointOrder};
use cubeprog_core::progression::{ap_from_twist_point, ProgressionError};
use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Map, Value};

use crate::report;
use crate::table::{self, RowCheck, TableRow, PREDICATES};

#[derive(Parser, Debug)]
#[command(name = "cubeprog", version, about = "Three-term progressions of cubes over quadratic fields")]
pub struct Cli {
    /// Emit JSON instead of indented text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Include extra detail (lattice points for `ad`).
    #[arg(long, global = true)]
    pub verbose: bool,
    /// Also print floating-point approximations of field elements.
    #[arg(long, global = true)]
    pub approx: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide whether Q(sqrt D) has a nontrivial progression of three cubes.
    Classify {
        #[arg(allow_hyphen_values = true)]
        d: String,
        /// A rational point on y^2 = x^3 - 27 D^3 to use as a witness.
        #[arg(long, num_args = 2, value_names = ["X", "Y"], allow_hyphen_values = true)]
        point: Option<Vec<String>>,
    },
    /// The lattice sum A_d for squarefree d > 0 coprime to 6.
    Ad {
        #[arg(allow_hyphen_values = true)]
        d: String,
    },
    /// Torsion subgroup of y^2 = x^3 - 27 over Q(sqrt D).
    Torsion {
        #[arg(allow_hyphen_values = true)]
        d: String,
    },
    /// Build the progression attached to a point (x, y) of y^2 = x^3 - 27 D^3.
    Ap(ApArgs),
    /// Check every row of the embedded table.
    VerifyTable {
        /// Read rows from this CSV file instead of the embedded table.
        #[arg(long, hide = true)]
        table: Option<std::path::PathBuf>,
    },
    /// Naive search for a rational point of infinite order on y^2 = x^3 - 27 D^3.
    Search(SearchArgs),
}

#[derive(Args, Debug)]
pub struct ApArgs {
    #[arg(allow_hyphen_values = true)]
    pub d: String,
    #[arg(allow_hyphen_values = true)]
    pub x: String,
    #[arg(allow_hyphen_values = true)]
    pub y: String,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    #[arg(allow_hyphen_values = true)]
    pub d: String,
    /// Bound H on |x| (numerators up to H c^2).
    #[arg(conflicts_with = "height_flag")]
    pub height: Option<String>,
    /// Bound C on the denominator square root c.
    #[arg(conflicts_with = "denom_flag")]
    pub denom: Option<String>,
    #[arg(long = "height", value_name = "H")]
    pub height_flag: Option<String>,
    #[arg(long = "denom", value_name = "C")]
    pub denom_flag: Option<String>,
}

/// Payload plus exit code of a command that ran to completion.
#[derive(Debug)]
pub struct Outcome {
    pub payload: Value,
    pub exit: i32,
}

#[derive(Debug, PartialEq, Eq)]
pub enum CliError {
    /// Bad user input; exit code 2.
    Input(String),
    /// Internal inconsistency; exit code 1.
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Internal(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Internal(m) => m,
        }
    }
}

impl From<AnalyticError> for CliError {
    fn from(e: AnalyticError) -> Self {
        if e.is_internal() {
            CliError::Internal(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

impl From<EllipticError> for CliError {
    fn from(e: EllipticError) -> Self {
        match e {
            EllipticError::InconsistentGroup(_) | EllipticError::FactorCheckFailed(..) => {
                CliError::Internal(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<ProgressionError> for CliError {
    fn from(e: ProgressionError) -> Self {
        CliError::Input(e.to_string())
    }
}

fn parse_integer(name: &str, s: &str) -> Result<BigInt, CliError> {
    s.trim()
        .parse::<BigInt>()
        .map_err(|_| CliError::Input(format!("{name} = {s:?} is not an integer")))
}

fn parse_rat(name: &str, s: &str) -> Result<Rational, CliError> {
    parse_rational(s.trim()).map_err(|_| CliError::Input(format!("{name} = {s:?} is not a rational number (use p/q)")))
}

/// A squarefree `D` other than 0, with the squarefree core suggested when
/// it is not.
fn parse_field(s: &str, allow_one: bool) -> Result<BigInt, CliError> {
    let d = parse_integer("D", s)?;
    if d.is_zero() {
        return Err(CliError::Input("D must be nonzero".into()));
    }
    if !allow_one && d.is_one() {
        return Err(CliError::Input("D = 1 does not define a quadratic field".into()));
    }
    let dec = squarefree_decompose(&d).expect("nonzero");
    if !dec.cofactor.is_one() {
        return Err(CliError::Input(format!(
            "{d} is not squarefree; its squarefree core is {}",
            dec.core
        )));
    }
    Ok(d)
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let ok = |payload: Value| Ok(Outcome { payload, exit: 0 });
    match &cli.command {
        Command::Classify { d, point } => ok(classify(d, point.as_deref(), cli.approx)?),
        Command::Ad { d } => ok(ad(d, cli.verbose)?),
        Command::Torsion { d } => ok(torsion(d)?),
        Command::Ap(args) => ok(ap(args, cli.approx)?),
        Command::VerifyTable { table } => verify_table(table.as_deref()),
        Command::Search(args) => ok(search(args)?),
    }
}

fn classify(d: &str, point: Option<&[String]>, approx: bool) -> Result<Value, CliError> {
    let d = parse_field(d, true)?;
    let base = analytic::classify(&d)?;
    let mut verdict = base.clone();
    let mut source = None;
    if let Some(coords) = point {
        let p = Point::affine(parse_rat("x", &coords[0])?, parse_rat("y", &coords[1])?);
        verdict = analytic::upgrade_with_witness(&verdict, &p)?;
        source = Some("user");
    } else if let Some(row) = table::witness_for(&d) {
        verdict = analytic::upgrade_with_witness(&verdict, &row.point())?;
        source = Some("table");
    }
    let mut out = Map::new();
    out.insert("command".into(), json!("classify"));
    out.extend(report::verdict(&verdict, approx));
    if verdict.status != base.status {
        out.insert("status_before_witness".into(), json!(base.status.as_str()));
    }
    if let Some(s) = source {
        out.insert("witness_source".into(), json!(s));
    }
    if base.status == Status::ExistsUnderBsd && verdict.status == Status::Exists {
        out.insert("upgraded".into(), json!(true));
    }
    Ok(Value::Object(out))
}

fn ad(d: &str, verbose: bool) -> Result<Value, CliError> {
    let d = parse_integer("d", d)?;
    let r = analytic::a_d(&d)?;
    let mut out = json!({
        "command": "ad",
        "d": r.d.to_string(),
        "value": r.value.to_string(),
        "triple_count": r.triple_count.to_string(),
    });
    if verbose {
        let sols: Vec<Value> = analytic::a_d_solutions(&d)?
            .into_iter()
            .map(|(m, n, k)| json!([m.to_string(), n.to_string(), k.to_string()]))
            .collect();
        out["solutions"] = Value::Array(sols);
    }
    Ok(out)
}

fn torsion(d: &str) -> Result<Value, CliError> {
    let d = parse_field(d, false)?;
    let g = e_torsion_over_quadratic(&d)?;
    let e = Curve::e();
    let orders = g
        .points
        .iter()
        .map(|p| e.point_order(p))
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = Map::new();
    out.insert("command".into(), json!("torsion"));
    out.insert("D".into(), json!(d.to_string()));
    out.insert("curve".into(), json!(e.to_string()));
    if let Value::Object(m) = report::torsion(&g, &orders) {
        out.extend(m);
    }
    Ok(Value::Object(out))
}

fn ap(args: &ApArgs, approx: bool) -> Result<Value, CliError> {
    let d = parse_field(&args.d, false)?;
    let (x, y) = (parse_rat("x", &args.x)?, parse_rat("y", &args.y)?);
    let curve = Curve::e_twist(&d)?;
    let p = Point::affine(x.clone(), y.clone());
    if !curve.is_on_curve(&p) {
        let dr = Rational::from_integer(d.clone());
        let rhs = &x * &x * &x - Rational::from_integer(27.into()) * &dr * &dr * &dr;
        let residual = &y * &y - &rhs;
        return Err(CliError::Input(format!(
            "({}, {}) is not on {curve}: y^2 - (x^3 - 27*D^3) = {}",
            report::Exact::exact(&x),
            report::Exact::exact(&y),
            report::Exact::exact(&residual)
        )));
    }
    let t = ap_from_twist_point(&d, &p)?;
    let order = curve.point_order(&p)?;
    let mut out = Map::new();
    out.insert("command".into(), json!("ap"));
    out.insert("D".into(), json!(d.to_string()));
    out.insert("point".into(), report::point(&p));
    out.insert("order".into(), report::order(order));
    out.insert("progression".into(), report::progression(&t));
    if approx {
        out.insert("approximate".into(), report::approximate_progression(&t));
    }
    Ok(Value::Object(out))
}

fn row_payload(c: &RowCheck) -> Value {
    let mut checks = Map::new();
    for (name, r) in PREDICATES.iter().zip(&c.results) {
        checks.insert(
            (*name).into(),
            json!(match r {
                Some(true) => "pass",
                Some(false) => "fail",
                None => "skipped",
            }),
        );
    }
    let mut row = Map::new();
    row.insert("D".into(), json!(c.row.d.to_string()));
    row.insert("point".into(), report::point(&c.row.point()));
    if let Some(o) = c.order {
        row.insert("order".into(), report::order(o));
    }
    row.insert("checks".into(), Value::Object(checks));
    row.insert("passed".into(), json!(c.passed()));
    if let Some(f) = c.first_failure() {
        row.insert("failed_check".into(), json!(f));
    }
    if let Some(t) = &c.progression {
        row.insert("progression".into(), json!(t.terms().iter().map(|v| v.to_string()).collect::<Vec<_>>()));
    }
    Value::Object(row)
}

fn verify_table(path: Option<&std::path::Path>) -> Result<Outcome, CliError> {
    let rows: Vec<TableRow> = match path {
        None => table::embedded(),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Input(format!("cannot read {}: {e}", p.display())))?;
            table::parse_table(&text).map_err(CliError::Input)?
        }
    };
    let checks = table::verify_rows(&rows, table::threads_from_env());
    let passed = checks.iter().filter(|c| c.passed()).count();
    let payload = json!({
        "command": "verify-table",
        "passed": passed.to_string(),
        "total": checks.len().to_string(),
        "all_passed": passed == checks.len(),
        "rows": checks.iter().map(row_payload).collect::<Vec<_>>(),
    });
    Ok(Outcome {
        payload,
        exit: if passed == checks.len() { 0 } else { 1 },
    })
}

fn positive(name: &str, s: &str) -> Result<BigInt, CliError> {
    let v = parse_integer(name, s)?;
    if !v.is_positive() {
        return Err(CliError::Input(format!("{name} must be positive, got {v}")));
    }
    Ok(v)
}

fn search(args: &SearchArgs) -> Result<Value, CliError> {
    let d = parse_field(&args.d, false)?;
    let h = args
        .height
        .as_ref()
        .or(args.height_flag.as_ref())
        .ok_or_else(|| CliError::Input("a height bound is required".into()))?;
    let c = args
        .denom
        .as_ref()
        .or(args.denom_flag.as_ref())
        .ok_or_else(|| CliError::Input("a denominator bound is required".into()))?;
    let (h, c) = (positive("height", h)?, positive("denom", c)?);
    let curve = Curve::e_twist(&d)?;
    let b = BigInt::from(-27) * &d * &d * &d;
    let mut tried = 0u64;
    let mut found = None;
    let mut den = BigInt::one();
    'outer: while den <= c {
        let c2 = &den * &den;
        let c6 = &c2 * &c2 * &c2;
        let bound = &h * &c2;
        let mut a = -bound.clone();
        while a <= bound {
            if a.gcd(&den).is_one() {
                tried += 1;
                let s2 = &a * &a * &a + &b * &c6;
                if !s2.is_negative() {
                    let s = s2.sqrt();
                    if &s * &s == s2 && !s.is_zero() {
                        let x = Rational::new(a.clone(), c2.clone());
                        let y = Rational::new(s, &c2 * &den);
                        let p = Point::affine(x, y);
                        if curve.point_order(&p)? == PointOrder::Infinite {
                            found = Some(p);
                            break 'outer;
                        }
                    }
                }
            }
            a += 1;
        }
        den += 1;
    }
    let mut out = json!({
        "command": "search",
        "D": d.to_string(),
        "height": h.to_string(),
        "denom": c.to_string(),
        "candidates_tried": tried.to_string(),
    });
    match found {
        Some(p) => {
            out["found"] = json!(true);
            out["point"] = report::point(&p);
        }
        None => {
            out["found"] = json!(false);
            out["note"] = json!("no point of infinite order within the bounds; this proves nothing about the rank");
        }
    }
    Ok(out)
}
