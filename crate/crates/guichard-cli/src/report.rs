//! Deterministic report writers.
//!
//! Two runs with identical configs must produce byte-identical files, so all
//! JSON is emitted by a hand-rolled writer with fixed key order and every
//! float serialized with 17 significant digits.

use guichard_core::ResidualReport;

/// 17 significant digits; round-trips every f64 exactly.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Minimal JSON string escaping (our strings hold no exotic content).
pub fn json_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

pub struct JsonWriter {
    buf: String,
    needs_comma: Vec<bool>,
}

impl Default for JsonWriter {
    fn default() -> Self {
        Self::new()
    }
}

impl JsonWriter {
    pub fn new() -> Self {
        JsonWriter {
            buf: String::new(),
            needs_comma: vec![false],
        }
    }

    fn pre_value(&mut self) {
        if let Some(last) = self.needs_comma.last_mut() {
            if *last {
                self.buf.push(',');
            }
            *last = true;
        }
    }

    pub fn begin_object(&mut self) -> &mut Self {
        self.pre_value();
        self.buf.push('{');
        self.needs_comma.push(false);
        self
    }

    pub fn end_object(&mut self) -> &mut Self {
        self.buf.push('}');
        self.needs_comma.pop();
        self
    }

    pub fn begin_array(&mut self) -> &mut Self {
        self.pre_value();
        self.buf.push('[');
        self.needs_comma.push(false);
        self
    }

    pub fn end_array(&mut self) -> &mut Self {
        self.buf.push(']');
        self.needs_comma.pop();
        self
    }

    pub fn key(&mut self, k: &str) -> &mut Self {
        self.pre_value();
        self.buf.push('"');
        self.buf.push_str(&json_escape(k));
        self.buf.push_str("\":");
        // The value that follows is part of this key-value pair.
        if let Some(last) = self.needs_comma.last_mut() {
            *last = false;
        }
        self
    }

    pub fn string(&mut self, s: &str) -> &mut Self {
        self.pre_value();
        self.buf.push('"');
        self.buf.push_str(&json_escape(s));
        self.buf.push('"');
        self
    }

    pub fn float(&mut self, x: f64) -> &mut Self {
        self.pre_value();
        self.buf.push_str(&fmt_float(x));
        self
    }

    pub fn int(&mut self, x: i64) -> &mut Self {
        self.pre_value();
        self.buf.push_str(&x.to_string());
        self
    }

    pub fn uint(&mut self, x: u64) -> &mut Self {
        self.pre_value();
        self.buf.push_str(&x.to_string());
        self
    }

    pub fn boolean(&mut self, b: bool) -> &mut Self {
        self.pre_value();
        self.buf.push_str(if b { "true" } else { "false" });
        self
    }

    pub fn float_array(&mut self, xs: &[f64]) -> &mut Self {
        self.begin_array();
        for &x in xs {
            self.float(x);
        }
        self.end_array()
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

/// Residual report in the documented schema: an array of
/// `{"family", "max_abs", "mean_abs", "worst_point", "pass"}` objects.
pub fn write_residual_report(w: &mut JsonWriter, rep: &ResidualReport) {
    w.begin_object();
    w.key("tolerance").float(rep.tolerance);
    w.key("pass").boolean(rep.pass());
    w.key("families").begin_array();
    for fam in &rep.families {
        w.begin_object();
        w.key("family").string(&fam.name);
        w.key("max_abs").float(fam.max_abs);
        w.key("mean_abs").float(fam.mean_abs);
        w.key("worst_point").float_array(&fam.worst_point);
        w.key("pass").boolean(fam.pass(rep.tolerance));
        w.end_object();
    }
    w.end_array();
    w.end_object();
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_has_17_digits() {
        assert_eq!(fmt_float(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_float(1.0), "1.0000000000000000e0");
    }

    #[test]
    #[allow(clippy::excessive_precision)]
    fn float_format_round_trips() {
        for &x in &[0.1, -3.5e-11, 1.6857503548125961, 2.0f64.sqrt()] {
            let s = fmt_float(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back, x, "{s}");
        }
    }

    #[test]
    fn writer_produces_valid_json() {
        let mut w = JsonWriter::new();
        w.begin_object();
        w.key("name").string("x\"y");
        w.key("values").float_array(&[1.0, 0.5]);
        w.key("n").int(-3);
        w.key("ok").boolean(true);
        w.end_object();
        let s = w.finish();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["name"], "x\"y");
        assert_eq!(v["n"], -3);
    }
}
