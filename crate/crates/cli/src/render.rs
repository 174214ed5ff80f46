//! Indented `key: value` rendering of a JSON payload for terminals.

use serde_json::Value;

pub fn text(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, 0);
    out
}

/// One line per table row with a pass/fail cell per check, for the
/// `verify-table` payload.
pub fn verify_matrix(v: &Value) -> Option<String> {
    let rows = v.get("rows")?.as_array()?;
    let names: Vec<String> = rows.first()?.get("checks")?.as_object()?.keys().cloned().collect();
    let mut out = format!("{:>5}  {}  result\n", "D", names.join("  "));
    for row in rows {
        let checks = row.get("checks")?.as_object()?;
        let cells: Vec<String> = names
            .iter()
            .map(|n| format!("{:^w$}", checks.get(n).and_then(Value::as_str).unwrap_or("-"), w = n.len()))
            .collect();
        let result = match row.get("failed_check").and_then(Value::as_str) {
            Some(f) => format!("FAIL ({f})"),
            None => "PASS".to_string(),
        };
        out.push_str(&format!("{:>5}  {}  {result}\n", row.get("D")?.as_str()?, cells.join("  ")));
    }
    out.push_str(&format!(
        "{}/{} rows passed\n",
        v.get("passed")?.as_str()?,
        v.get("total")?.as_str()?
    ));
    Some(out)
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("null".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.is_empty() => Some("[]".into()),
        Value::Object(o) if o.is_empty() => Some("{}".into()),
        _ => None,
    }
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, item) in map {
                match scalar(item) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        write_value(out, item, indent + 1);
                    }
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match scalar(item) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        write_value(out, item, indent + 1);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}
