use clap::ValueEnum;
use serde_json::{Map, Value};
use spectre_core::Rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// Keys whose string values are exact rationals and get a decimal companion.
const RATIONAL_KEYS: [&str; 12] = [
    "alpha",
    "alpha_max",
    "alpha_min",
    "bound",
    "contribution",
    "defect",
    "e",
    "naive_defect",
    "S",
    "variance",
    "mu_expansion",
    "c0_plus",
];

/// Adds a `<key>_decimal` entry next to every rational entry, recursively.
pub fn add_decimals(v: &mut Value, digits: usize) {
    match v {
        Value::Object(map) => {
            let mut extra = Vec::new();
            for (k, x) in map.iter_mut() {
                if let (true, Value::String(s)) = (RATIONAL_KEYS.contains(&k.as_str()), &*x) {
                    if let Ok(r) = s.parse::<Rat>() {
                        extra.push((format!("{k}_decimal"), Value::String(r.to_decimal(digits))));
                    }
                } else {
                    add_decimals(x, digits);
                }
            }
            map.extend(extra);
        }
        Value::Array(items) => items.iter_mut().for_each(|x| add_decimals(x, digits)),
        _ => {}
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn is_flat(v: &Value) -> bool {
    v.as_object().is_some_and(|m| m.values().all(|x| !x.is_object() && !x.is_array()))
}

fn is_table(items: &[Value]) -> bool {
    !items.is_empty() && items.iter().all(is_flat)
}

fn is_records(items: &[Value]) -> bool {
    !items.is_empty() && items.iter().all(Value::is_object)
}

fn table(items: &[Value], indent: &str, out: &mut String) {
    let mut columns: Vec<&String> = Vec::new();
    for item in items {
        for k in item.as_object().into_iter().flat_map(Map::keys) {
            if !columns.contains(&k) {
                columns.push(k);
            }
        }
    }
    let rows: Vec<Vec<String>> =
        items.iter().map(|it| columns.iter().map(|c| it.get(c.as_str()).map_or(String::new(), cell)).collect()).collect();
    let widths: Vec<usize> = columns
        .iter()
        .enumerate()
        .map(|(i, c)| rows.iter().map(|r| r[i].chars().count()).chain([c.chars().count()]).max().unwrap_or(0))
        .collect();
    let line = |cells: Vec<String>| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
        format!("{indent}{}\n", padded.join("  ").trim_end())
    };
    out.push_str(&line(columns.iter().map(|c| c.to_string()).collect()));
    for r in rows {
        out.push_str(&line(r));
    }
}

fn render(v: &Value, indent: &str, out: &mut String) {
    match v {
        Value::Object(map) => {
            let scalars: Vec<(&String, &Value)> =
                map.iter().filter(|(_, x)| !x.is_object() && !matches!(x, Value::Array(a) if is_records(a))).collect();
            let width = scalars.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
            for (k, x) in scalars {
                out.push_str(&format!("{indent}{k:<width$}  {}\n", cell(x)));
            }
            for (k, x) in map {
                match x {
                    Value::Object(_) => {
                        out.push_str(&format!("{indent}{k}:\n"));
                        render(x, &format!("{indent}  "), out);
                    }
                    Value::Array(a) if is_records(a) => {
                        out.push_str(&format!("{indent}{k}:\n"));
                        render(x, &format!("{indent}  "), out);
                    }
                    _ => {}
                }
            }
        }
        Value::Array(a) if is_table(a) => table(a, indent, out),
        Value::Array(a) if is_records(a) => {
            for (i, item) in a.iter().enumerate() {
                out.push_str(&format!("{indent}[{i}]\n"));
                render(item, &format!("{indent}  "), out);
            }
        }
        other => out.push_str(&format!("{indent}{}\n", cell(other))),
    }
}

/// Renders a result as compact JSON with sorted keys or as aligned text.
pub fn emit(mut v: Value, format: Format, decimal: Option<usize>) -> String {
    if let Some(d) = decimal {
        add_decimals(&mut v, d);
    }
    match format {
        Format::Json => format!("{v}\n"),
        Format::Text => {
            let mut out = String::new();
            render(&v, "", &mut out);
            out
        }
    }
}
