//! Canonical JSON (12 significant digits, sorted keys) and the lossy TSV view.

use serde::Serialize;
use serde_json::{Map, Number, Value};

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Rounds every float in `v` to [`SIGNIFICANT_DIGITS`]; `-0` becomes `0`.
pub fn round_value(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64 number");
            let r: f64 = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().expect("formatted float parses");
            let r = if r == 0.0 { 0.0 } else { r };
            Number::from_f64(r).map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_value).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_value(v))).collect::<Map<_, _>>()),
        other => other,
    }
}

pub fn to_json<T: Serialize>(report: &T) -> Value {
    round_value(serde_json::to_value(report).expect("reports serialize"))
}

pub fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

/// Subtrees dropped from the TSV view.
const TSV_SKIP: &[&str] = &["certificates", "diagnostics", "argmax", "w", "lp"];

/// One `path<TAB>value` line per scalar leaf; arrays of scalars are joined
/// with commas.
pub fn render_tsv(v: &Value) -> String {
    let mut out = String::new();
    flatten("", v, &mut out);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("null".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Object(o) if o.get("infinite") == Some(&Value::Bool(true)) && o.len() == 1 => Some("inf".into()),
        _ => None,
    }
}

fn flatten(path: &str, v: &Value, out: &mut String) {
    if let Some(s) = scalar(v) {
        out.push_str(&format!("{path}\t{s}\n"));
        return;
    }
    let join = |k: &str| if path.is_empty() { k.to_string() } else { format!("{path}.{k}") };
    match v {
        Value::Array(a) => {
            if let Some(items) = a.iter().map(scalar).collect::<Option<Vec<_>>>() {
                out.push_str(&format!("{path}\t{}\n", items.join(",")));
            } else {
                for (i, x) in a.iter().enumerate() {
                    flatten(&join(&i.to_string()), x, out);
                }
            }
        }
        Value::Object(o) => {
            for (k, x) in o.iter().filter(|(k, _)| !TSV_SKIP.contains(&k.as_str())) {
                flatten(&join(k), x, out);
            }
        }
        _ => unreachable!("scalars handled above"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn rounds_to_twelve_digits() {
        let v = round_value(json!({"a": 5f64.sqrt(), "b": [1.0 / 3.0, -0.0, 2], "c": 1e-20}));
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"{"a":2.2360679775,"b":[0.333333333333,0.0,2],"c":1e-20}"#);
    }

    #[test]
    fn tsv_flattens_and_skips_certificates() {
        let v = json!({"alpha": 2.0, "levels": [1, 2], "certificates": {"x": 1}, "c": {"infinite": true}, "r": [{"a": 1}]});
        assert_eq!(render_tsv(&v), "alpha\t2.0\nc\tinf\nlevels\t1,2\nr.0.a\t1\n");
    }
}
