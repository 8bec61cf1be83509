//! Records printed either as a tab-separated table or as JSON lines.

use std::io::{self, Write};

use serde_json::Value;

/// One output row: ordered (column, value) pairs.
pub type Record = Vec<(&'static str, Value)>;

fn cell(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(cell).collect::<Vec<_>>().join(","),
        other => other.to_string(),
    }
}

pub fn emit(records: &[Record], json: bool, out: &mut impl Write) -> io::Result<()> {
    if json {
        for r in records {
            let fields: Vec<String> = r
                .iter()
                .map(|(k, v)| format!("{}:{}", Value::from(*k), v))
                .collect();
            writeln!(out, "{{{}}}", fields.join(","))?;
        }
        return Ok(());
    }
    let Some(first) = records.first() else {
        return Ok(());
    };
    let header: Vec<&str> = first.iter().map(|(k, _)| *k).collect();
    writeln!(out, "{}", header.join("\t"))?;
    for r in records {
        let cells: Vec<String> = r.iter().map(|(_, v)| cell(v)).collect();
        writeln!(out, "{}", cells.join("\t"))?;
    }
    Ok(())
}

/// Like [`emit`] but with display headers for the table and keys for JSON.
pub fn emit_with_headers(
    headers: &[&str],
    records: &[Record],
    json: bool,
    out: &mut impl Write,
) -> io::Result<()> {
    if json {
        return emit(records, true, out);
    }
    writeln!(out, "{}", headers.join("\t"))?;
    for r in records {
        let cells: Vec<String> = r.iter().map(|(_, v)| cell(v)).collect();
        writeln!(out, "{}", cells.join("\t"))?;
    }
    Ok(())
}
