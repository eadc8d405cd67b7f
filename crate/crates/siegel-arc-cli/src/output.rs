//! Plain-decimal JSON and CSV rendering.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

/// Plain decimal rendering with `sig` significant digits (no exponent).
pub fn plain_decimal(v: f64, sig: usize) -> String {
    if v == 0.0 {
        return format!("{:.*}", sig.saturating_sub(1), 0.0);
    }
    let magnitude = v.abs().log10().floor() as i64;
    let decimals = (sig as i64 - 1 - magnitude).clamp(0, 340) as usize;
    let s = format!("{v:.decimals$}");
    // rounding can carry into a new leading digit (9.99… → 10.0…)
    let digits = s.chars().filter(|c| c.is_ascii_digit()).collect::<String>();
    let significant = digits.trim_start_matches('0').len();
    if significant > sig && decimals > 0 {
        format!("{v:.*}", decimals - 1)
    } else {
        s
    }
}

/// Shortest-roundtrip plain decimal: 17 significant digits with trailing
/// zeros trimmed (at least one fractional digit kept).
fn json_number(v: f64) -> String {
    let s = plain_decimal(v, 17);
    match s.find('.') {
        Some(dot) => {
            let t = s.trim_end_matches('0');
            if t.len() == dot + 1 {
                format!("{t}0")
            } else {
                t.to_string()
            }
        }
        None => format!("{s}.0"),
    }
}

/// Pretty JSON whose floats never use exponent notation.
struct PlainFormatter<'a>(PrettyFormatter<'a>);

impl Formatter for PlainFormatter<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(json_number(value).as_bytes())
    }
    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }
    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, PlainFormatter(PrettyFormatter::new()));
    value.serialize(&mut ser).expect("in-memory serialization");
    buf.push(b'\n');
    String::from_utf8(buf).expect("JSON is UTF-8")
}

/// Writes `text` to `path`, or to standard output when no path is given.
pub fn emit(path: Option<&Path>, text: &str) -> io::Result<()> {
    match path {
        Some(p) => {
            let mut f = BufWriter::new(File::create(p)?);
            f.write_all(text.as_bytes())?;
            f.flush()
        }
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}

/// CSV cell: 12 significant digits, plain decimal.
pub fn csv_number(v: f64) -> String {
    if v.is_finite() {
        plain_decimal(v, 12)
    } else {
        "nan".into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(plain_decimal(1.0, 12), "1.00000000000");
        assert_eq!(plain_decimal(-0.000123456789012345, 12), "-0.000123456789012");
        assert_eq!(plain_decimal(123456.7890123456, 12), "123456.789012");
        assert_eq!(plain_decimal(9.9999999999999, 12), "10.0000000000");
        assert_eq!(plain_decimal(0.0, 12), "0.00000000000");
    }

    #[test]
    fn json_numbers_roundtrip_without_exponent() {
        for v in [1e-15, 6.3e-16, 0.1, 2.0, -3.25, 1234567.0, std::f64::consts::PI, 3e20] {
            let s = json_number(v);
            assert!(!s.contains('e'), "{s}");
            assert_eq!(s.parse::<f64>().unwrap(), v, "{s}");
        }
        assert_eq!(json_number(2.0), "2.0");
        assert_eq!(to_json(&vec![1e-7]).replace(char::is_whitespace, ""), "[0.0000001]");
    }
}
