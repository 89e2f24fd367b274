//! Deterministic report documents.
//!
//! Reports are JSON objects with sorted keys. Every float is rounded to 12
//! significant digits before it is written, so identical runs print
//! byte-identical output.

use linopt::nls::{Coefficients, NlsParams, KLM_SUCCESS, QUOTED_SUCCESS};
use linopt::Complex64;
use serde_json::{json, Map, Value};

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Rounds to [`SIGNIFICANT_DIGITS`]; non-finite values become strings.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::String(x.to_string());
    }
    let rounded: f64 = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses");
    // no negative zero in reports
    let rounded = if rounded == 0.0 { 0.0 } else { rounded };
    json!(rounded)
}

pub fn complex(z: Complex64) -> Value {
    json!([num(z.re), num(z.im)])
}

pub fn coefficients(c: &Coefficients) -> Value {
    Value::Array(c.iter().map(|&z| complex(z)).collect())
}

pub fn angle(radians: f64) -> Value {
    json!({ "degrees": num(radians.to_degrees()), "radians": num(radians) })
}

pub fn params(p: NlsParams) -> Value {
    json!({ "sigma": angle(p.sigma), "theta": angle(p.theta) })
}

pub fn comparison(closed_form_success: f64) -> Value {
    json!({
        "closed_form_success": num(closed_form_success),
        "klm_success": num(KLM_SUCCESS),
        "quoted_success": num(QUOTED_SUCCESS),
    })
}

/// A report under construction.
#[derive(Debug, Default)]
pub struct Report(Map<String, Value>);

impl Report {
    pub fn new(command: &str) -> Self {
        let mut r = Self::default();
        r.set("command", command);
        r.set("tool_version", env!("CARGO_PKG_VERSION"));
        r
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.0.insert(key.to_owned(), value.into());
        self
    }

    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&Value::Object(self.0.clone()))
            .expect("report values serialize");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(num(0.226_540_919_660_986_44).to_string(), "0.226540919661");
        assert_eq!(num(1.0 / 3.0).to_string(), "0.333333333333");
        assert_eq!(num(123_456.789_012_345_6).to_string(), "123456.789012");
        assert_eq!(num(-0.0).to_string(), "0.0");
        assert_eq!(num(1e-30).to_string(), "1e-30");
        assert_eq!(num(f64::NAN), Value::String("NaN".into()));
    }

    #[test]
    fn keys_are_sorted() {
        let mut r = Report::new("x");
        r.set("zeta", 1).set("alpha", 2);
        let text = r.render();
        let a = text.find("alpha").unwrap();
        let c = text.find("command").unwrap();
        let z = text.find("zeta").unwrap();
        assert!(a < c && c < z);
    }
}
