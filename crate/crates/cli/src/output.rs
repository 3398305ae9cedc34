//! Structured output: JSON by default, with plain and CSV renderings of the
//! same data. Numeric values are decimal strings, never floats, each carrying
//! an `error_exp` bound where applicable.

use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum OutFormat {
    Json,
    Plain,
    Csv,
}

/// Renders a JSON object in the chosen format.
pub fn render(value: &Value, format: OutFormat) -> String {
    match format {
        OutFormat::Json => serde_json::to_string_pretty(value).expect("serializable"),
        OutFormat::Plain => {
            let mut lines = Vec::new();
            flatten(value, "", &mut |k, v| lines.push(format!("{k} = {v}")));
            lines.join("\n")
        }
        OutFormat::Csv => {
            let mut lines = vec!["field,value".to_string()];
            flatten(value, "", &mut |k, v| {
                lines.push(format!("{k},{}", csv_quote(&v)));
            });
            lines.join("\n")
        }
    }
}

fn csv_quote(v: &str) -> String {
    if v.contains(',') || v.contains('"') {
        format!("\"{}\"", v.replace('"', "\"\""))
    } else {
        v.to_string()
    }
}

fn scalar_to_string(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn flatten(value: &Value, prefix: &str, emit: &mut impl FnMut(String, String)) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(v, &key, emit);
            }
        }
        Value::Array(items) => {
            if items.iter().all(|i| !matches!(i, Value::Object(_) | Value::Array(_))) {
                let joined =
                    items.iter().map(scalar_to_string).collect::<Vec<_>>().join("; ");
                emit(prefix.to_string(), joined);
            } else {
                for (i, v) in items.iter().enumerate() {
                    flatten(v, &format!("{prefix}[{i}]"), emit);
                }
            }
        }
        scalar => emit(prefix.to_string(), scalar_to_string(scalar)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn renders_all_formats() {
        let v = json!({"value": "1.5", "digits": 30, "list": [1, 2, 3]});
        assert!(render(&v, OutFormat::Json).contains("\"value\": \"1.5\""));
        let plain = render(&v, OutFormat::Plain);
        assert!(plain.contains("value = 1.5"));
        assert!(plain.contains("list = 1; 2; 3"));
        let csv = render(&v, OutFormat::Csv);
        assert!(csv.starts_with("field,value"));
        assert!(csv.contains("digits,30"));
    }
}
