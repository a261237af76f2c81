use serde::Serialize;
use serde_json::Value;

use crate::config::Format;
use crate::error::CliError;

/// Leaves of `value` keyed by their JSON pointer relative to `value`,
/// without the leading slash.
pub fn flatten(value: &Value) -> Vec<(String, Value)> {
    fn walk(v: &Value, path: &mut String, out: &mut Vec<(String, Value)>) {
        let push = |path: &mut String, key: &str, child: &Value, out: &mut Vec<(String, Value)>| {
            let len = path.len();
            if !path.is_empty() {
                path.push('/');
            }
            path.push_str(&key.replace('~', "~0").replace('/', "~1"));
            walk(child, path, out);
            path.truncate(len);
        };
        match v {
            Value::Object(map) => map.iter().for_each(|(k, c)| push(path, k, c, out)),
            Value::Array(items) => items.iter().enumerate().for_each(|(i, c)| push(path, &i.to_string(), c, out)),
            leaf => out.push((path.clone(), leaf.clone())),
        }
    }
    let mut out = Vec::new();
    walk(value, &mut String::new(), &mut out);
    out
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// One CSV row per element of the array at `rows`. Columns are JSON
/// pointers into each element, in order of first appearance; a cell is
/// empty where the element has no such leaf.
pub fn to_csv(value: &Value, rows: &str) -> Result<String, CliError> {
    let items = value
        .pointer(rows)
        .and_then(Value::as_array)
        .ok_or_else(|| CliError::numerical(format!("no rows at {rows}")))?;
    let flat: Vec<Vec<(String, Value)>> = items.iter().map(flatten).collect();
    let mut header: Vec<&str> = Vec::new();
    for row in &flat {
        for (k, _) in row {
            if !header.contains(&k.as_str()) {
                header.push(k);
            }
        }
    }
    let csv_err = |e: csv::Error| CliError::numerical(e.to_string());
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header).map_err(csv_err)?;
    for row in &flat {
        let cells = header
            .iter()
            .map(|h| row.iter().find(|(k, _)| k == h).map(|(_, v)| cell(v)).unwrap_or_default());
        w.write_record(cells).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::numerical(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::numerical(e.to_string()))
}

pub fn render<T: Serialize>(report: &T, rows: &str, format: Format) -> Result<String, CliError> {
    let value = serde_json::to_value(report).map_err(|e| CliError::numerical(e.to_string()))?;
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&value).map_err(|e| CliError::numerical(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => to_csv(&value, rows),
    }
}
