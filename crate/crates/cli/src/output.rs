use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use ckn_core::report::round_sig;
use serde_json::Value;

pub const SCHEMA: u64 = 1;
pub const DIGITS: usize = 12;

/// Opens `path`, or stdout when absent.
pub fn sink(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Rounds every float in `v` to the output precision.
pub fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().expect("f64"), DIGITS);
            *v = serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number);
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// Pretty-prints `v` (after rounding) followed by a newline.
pub fn write_json(mut v: Value, path: Option<&Path>) -> io::Result<()> {
    round_floats(&mut v);
    let mut out = sink(path)?;
    serde_json::to_writer_pretty(&mut out, &v)?;
    writeln!(out)?;
    out.flush()
}
