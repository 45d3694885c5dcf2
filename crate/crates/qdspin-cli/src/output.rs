use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde_json::Value;

/// `x` rounded to 12 significant digits.
pub fn sig12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Text form of [`sig12`]; empty for non-finite values.
pub fn fmt12(x: f64) -> String {
    if x.is_finite() {
        format!("{}", sig12(x))
    } else {
        String::new()
    }
}

/// JSON number with 12 significant digits, `null` when not finite.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(sig12(x)).map_or(Value::Null, Value::Number)
}

pub fn opt_num(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

/// Write to `out` or stdout.
pub fn emit(out: Option<&Path>, text: &str) -> io::Result<()> {
    match out {
        Some(p) => fs::write(p, text),
        None => {
            let mut s = io::stdout().lock();
            s.write_all(text.as_bytes())?;
            s.flush()
        }
    }
}

pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt12(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt12(2.0), "2");
        assert_eq!(fmt12(-12345.678901234567), "-12345.6789012");
        assert_eq!(fmt12(f64::NAN), "");
        assert_eq!(num(f64::INFINITY), Value::Null);
    }
}
