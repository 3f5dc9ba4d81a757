//! Versioned JSON reports with fixed 17-significant-digit floats.

use serde_json::ser::Formatter;
use serde_json::{json, Value};
use std::io;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub params: Value,
    pub results: Value,
    pub residuals: Value,
    pub tolerances: Value,
    pub pass: bool,
}

impl Report {
    pub fn new(command: &str, params: Value) -> Self {
        Report {
            command: command.into(),
            params,
            results: json!({}),
            residuals: json!({}),
            tolerances: json!({}),
            pass: true,
        }
    }

    pub fn result(&mut self, key: &str, v: impl serde::Serialize) {
        self.results[key] = serde_json::to_value(v).expect("serializable result");
    }

    /// Records a residual against its tolerance; the report fails if any exceeds it.
    pub fn residual(&mut self, key: &str, value: f64, tol: f64) {
        self.residuals[key] = json!(value);
        self.tolerances[key] = json!(tol);
        self.pass &= value <= tol;
    }

    /// Same as [`Report::residual`] for a quantity that must lie within `tol` of `target`.
    pub fn within(&mut self, key: &str, value: f64, target: f64, tol: f64) {
        self.residuals[key] = json!(value);
        self.tolerances[key] = json!({ "target": target, "tol": tol });
        self.pass &= (value - target).abs() <= tol;
    }

    pub fn to_value(&self) -> Value {
        json!({
            "schema": SCHEMA,
            "command": self.command,
            "params": self.params,
            "results": self.results,
            "residuals": self.residuals,
            "tolerances": self.tolerances,
            "pass": self.pass,
        })
    }

    pub fn to_json(&self) -> String {
        let mut buf = Vec::new();
        let mut ser = serde_json::Serializer::with_formatter(&mut buf, Fixed17::default());
        serde::Serialize::serialize(&self.to_value(), &mut ser).expect("in-memory serialization");
        let mut s = String::from_utf8(buf).expect("utf-8 JSON");
        s.push('\n');
        s
    }
}

/// Pretty printer that writes every float with 17 significant digits.
#[derive(Default)]
pub struct Fixed17 {
    inner: serde_json::ser::PrettyFormatter<'static>,
}

impl Formatter for Fixed17 {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        if value == 0.0 {
            return w.write_all(if value.is_sign_negative() { b"-0.0" } else { b"0.0" });
        }
        write!(w, "{value:.16e}")
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_array(w)
    }
    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array(w)
    }
    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array_value(w)
    }
    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object(w)
    }
    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object(w)
    }
    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_object_key(w, first)
    }
    fn end_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object_key(w)
    }
    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object_value(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_seventeen_digits() {
        let mut r = Report::new("x", json!({ "a": 0.1 }));
        r.residual("res", 1.0 / 3.0, 1e-8);
        let s = r.to_json();
        assert!(s.contains("1.0000000000000001e-1"), "{s}");
        assert!(s.contains("3.3333333333333331e-1"), "{s}");
        let back: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["residuals"]["res"].as_f64().unwrap(), 1.0 / 3.0);
        assert_eq!(back["schema"], 1);
        assert!(!Report { pass: false, ..r }.to_value()["pass"].as_bool().unwrap());
    }
}
