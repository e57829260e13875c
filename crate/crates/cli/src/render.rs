use serde_json::Value;

/// Flattens a report into `path  value` rows with aligned columns.
pub fn table(v: &Value) -> String {
    let mut rows = Vec::new();
    flatten(v, String::new(), &mut rows);
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, v) in rows {
        out.push_str(&format!("{k:<width$}  {v}\n"));
    }
    out
}

fn flatten(v: &Value, path: String, rows: &mut Vec<(String, String)>) {
    let child = |p: &str, k: &str| if p.is_empty() { k.to_string() } else { format!("{p}.{k}") };
    match v {
        Value::Object(m) if !m.is_empty() => {
            for (k, x) in m {
                flatten(x, child(&path, k), rows);
            }
        }
        Value::Array(a) if !a.is_empty() && a.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in a.iter().enumerate() {
                flatten(x, child(&path, &i.to_string()), rows);
            }
        }
        Value::String(s) => rows.push((path, s.clone())),
        other => rows.push((path, other.to_string())),
    }
}
