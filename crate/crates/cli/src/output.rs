//! CSV and JSON writers for sweep records.

use std::io::Write;

use serde_json::{Map, Value};

use crate::error::CliError;
use crate::measure::Record;

/// Full-precision scientific notation; `nan` for missing values.
pub fn format_number(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else {
        format!("{v:.16e}")
    }
}

pub fn write_csv<W: Write>(out: W, axes: (&str, &str), records: &[Record]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([axes.0, axes.1, "value", "error", "converged"])?;
    for r in records {
        w.write_record([format_number(r.a), format_number(r.b), format_number(r.value), format_number(r.error), r.converged.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

fn json_number(v: f64) -> Value {
    serde_json::Number::from_f64(v).map(Value::Number).unwrap_or(Value::Null)
}

/// An array of objects with the CSV columns plus any measure-specific fields.
pub fn write_json<W: Write>(mut out: W, axes: (&str, &str), records: &[Record]) -> Result<(), CliError> {
    let rows: Vec<Value> = records
        .iter()
        .map(|r| {
            let mut o = Map::new();
            o.insert(axes.0.into(), json_number(r.a));
            o.insert(axes.1.into(), json_number(r.b));
            o.insert("value".into(), json_number(r.value));
            o.insert("error".into(), json_number(r.error));
            o.insert("converged".into(), Value::Bool(r.converged));
            for (k, v) in &r.extras {
                o.insert((*k).into(), v.clone());
            }
            Value::Object(o)
        })
        .collect();
    serde_json::to_writer_pretty(&mut out, &rows)?;
    writeln!(out)?;
    Ok(())
}
