//! Output tables and their JSON / CSV encodings.
//!
//! Multiprecision reals are written as decimal strings carrying every digit
//! the working precision supports, so a table round-trips without loss.

use std::io::{self, Write};

use apostol_core::{Complex, Float};
use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(Float),
    /// A double-precision diagnostic such as a fitted constant.
    Double(f64),
    Complex(Complex),
    Bool(bool),
    Text(String),
    Null,
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(i64::from(v))
    }
}

impl From<Float> for Cell {
    fn from(v: Float) -> Self {
        Cell::Real(v)
    }
}

impl From<Complex> for Cell {
    fn from(v: Complex) -> Self {
        Cell::Complex(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Double(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Null, Into::into)
    }
}

/// Significant decimal digits that a `bits`-bit mantissa determines.
fn digits_for(bits: u32) -> usize {
    ((bits as f64) * std::f64::consts::LOG10_2).floor().max(1.0) as usize
}

pub fn format_float(x: &Float) -> String {
    if x.is_zero() {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x.is_sign_negative() {
            "-inf".into()
        } else {
            "inf".into()
        };
    }
    x.to_string_radix(10, Some(digits_for(x.prec())))
}

fn format_double(x: f64) -> String {
    if x.is_finite() {
        format!("{x:e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// `a+bi` with both parts at full precision.
pub fn format_complex(z: &Complex) -> String {
    let re = format_float(z.real());
    let im = format_float(z.imag());
    if im.starts_with('-') {
        format!("{re}{im}i")
    } else {
        format!("{re}+{im}i")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub command: &'static str,
    pub lambda: String,
    pub precision_bits: u32,
    /// Run-level facts, written only to JSON.
    pub meta: Vec<(&'static str, Cell)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(command: &'static str, lambda: String, precision_bits: u32, columns: &[&'static str]) -> Self {
        Table {
            command,
            lambda,
            precision_bits,
            meta: Vec::new(),
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn meta(&mut self, key: &'static str, value: impl Into<Cell>) {
        self.meta.push((key, value.into()));
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let mut m = Map::new();
                for (c, v) in self.columns.iter().zip(r) {
                    m.insert((*c).to_string(), cell_json(v));
                }
                Value::Object(m)
            })
            .collect();
        let mut meta = Map::new();
        for (k, v) in &self.meta {
            meta.insert((*k).to_string(), cell_json(v));
        }
        json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "lambda": self.lambda,
            "precision_bits": self.precision_bits,
            "meta": Value::Object(meta),
            "columns": self.columns,
            "rows": rows,
        })
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> io::Result<()> {
        serde_json::to_writer_pretty(&mut out, &self.to_json())?;
        writeln!(out)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{}", self.columns.join(","))?;
        for r in &self.rows {
            let line: Vec<String> = r.iter().map(cell_csv).collect();
            writeln!(out, "{}", line.join(","))?;
        }
        Ok(())
    }
}

fn cell_json(c: &Cell) -> Value {
    match c {
        Cell::Int(v) => json!(v),
        Cell::Real(x) => json!(format_float(x)),
        Cell::Double(x) => json!(format_double(*x)),
        Cell::Complex(z) => json!({ "re": format_float(z.real()), "im": format_float(z.imag()) }),
        Cell::Bool(b) => json!(b),
        Cell::Text(s) => json!(s),
        Cell::Null => Value::Null,
    }
}

fn cell_csv(c: &Cell) -> String {
    match c {
        Cell::Int(v) => v.to_string(),
        Cell::Real(x) => format_float(x),
        Cell::Double(x) => format_double(*x),
        Cell::Complex(z) => format_complex(z),
        Cell::Bool(b) => b.to_string(),
        Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Cell::Text(s) => s.clone(),
        Cell::Null => String::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_text_round_trips() {
        let x = Float::with_val(128, 1) / 3u32;
        let s = format_float(&x);
        assert_eq!(s.len(), "3.3333333333333333333333333333333333333e-1".len());
        let back = Float::with_val(128, Float::parse(&s).unwrap());
        let rel = Float::with_val(128, (back - &x) / &x).abs().to_f64();
        assert!(rel < 1e-37);
        assert_eq!(format_float(&Float::new(64)), "0");
    }

    #[test]
    fn complex_text() {
        let z = Complex::with_val(53, (1.5, -2));
        assert_eq!(format_complex(&z), "1.50000000000000-2.00000000000000i");
        let z = Complex::with_val(53, (0, 1));
        assert_eq!(format_complex(&z), "0+1.00000000000000i");
    }

    #[test]
    fn json_and_csv_layout() {
        let mut t = Table::new("eval", "1+0i".into(), 64, &["n", "value", "flag", "note"]);
        t.push(vec![
            2usize.into(),
            Complex::with_val(64, (0.25, 0)).into(),
            true.into(),
            Cell::Null,
        ]);
        let v = t.to_json();
        assert_eq!(v["rows"][0]["n"], 2);
        assert_eq!(v["rows"][0]["value"]["re"], "2.500000000000000000e-1");
        assert_eq!(v["rows"][0]["note"], Value::Null);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert_eq!(s, "n,value,flag,note\n2,2.500000000000000000e-1+0i,true,\n");
    }
}
