//! Minimal CSV emission with fixed float formatting.

use std::fmt::Write as _;

/// 17 significant digits in scientific notation; round-trips every `f64`.
pub fn fmt_float(x: f64) -> String {
    if x == 0.0 {
        // drop the sign of negative zero so mirrored runs stay byte-identical
        return format!("{:.16e}", 0.0);
    }
    format!("{x:.16e}")
}

/// Builds a CSV document row by row.
#[derive(Debug, Default, Clone)]
pub struct CsvWriter {
    buf: String,
}

impl CsvWriter {
    pub fn new(header: &[&str]) -> Self {
        let mut w = Self::default();
        w.buf.push_str(&header.join(","));
        w.buf.push('\n');
        w
    }

    pub fn row(&mut self, fields: &[Field<'_>]) {
        for (k, f) in fields.iter().enumerate() {
            if k > 0 {
                self.buf.push(',');
            }
            match f {
                Field::Num(x) => self.buf.push_str(&fmt_float(*x)),
                Field::Text(s) => {
                    if s.contains([',', '"', '\n']) {
                        let _ = write!(self.buf, "\"{}\"", s.replace('"', "\"\""));
                    } else {
                        self.buf.push_str(s);
                    }
                }
            }
        }
        self.buf.push('\n');
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

#[derive(Debug, Clone, Copy)]
pub enum Field<'a> {
    Num(f64),
    Text(&'a str),
}
