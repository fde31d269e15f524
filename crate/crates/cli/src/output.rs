//! JSON and CSV rendering with floats at 17 significant digits.

use serde::Serialize;
use serde_json::ser::Formatter;
use serde_json::Value;
use std::io;

struct SeventeenDigits;

impl Formatter for SeventeenDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(float(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// `{:.16e}` renders exactly 17 significant digits and is valid JSON.
pub fn float(v: f64) -> String {
    if v == 0.0 {
        // keep the sign of zero out of diffs
        return "0.0000000000000000e0".into();
    }
    format!("{v:.16e}")
}

pub fn to_json(v: &Value) -> serde_json::Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SeventeenDigits);
    v.serialize(&mut ser)?;
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

pub fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Number(n) if n.is_f64() => float(n.as_f64().unwrap_or(f64::NAN)),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_round_trip_with_17_digits() {
        let x = 0.1 + 0.2;
        let s = to_json(&json!({"x": x, "n": 3})).unwrap();
        assert_eq!(s, r#"{"n":3,"x":3.0000000000000004e-1}"#);
        let back: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["x"].as_f64().unwrap(), x);
        assert_eq!(to_json(&json!([f64::NAN])).unwrap(), "[null]");
    }
}
