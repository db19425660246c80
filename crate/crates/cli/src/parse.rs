//! Parsers for complex numbers, degree ranges and real grids given on the
//! command line. Decimal input is rounded once, at the working precision.

use apostol_core::{Complex, Float};
use rug::float::Constant;

/// A complex number as typed by the user, kept as text until the working
/// precision is known.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexArg {
    form: ComplexForm,
}

#[derive(Debug, Clone, PartialEq)]
enum ComplexForm {
    Rect {
        re: String,
        im: String,
    },
    /// `polar(r, t)`: `r e^{2 pi i t}` with `t` in turns.
    Polar {
        r: String,
        turns: String,
    },
}

impl ComplexArg {
    pub fn to_complex(&self, bits: u32) -> Complex {
        match &self.form {
            ComplexForm::Rect { re, im } => Complex::with_val(bits, (float(re, bits), float(im, bits))),
            ComplexForm::Polar { r, turns } => {
                let r = float(r, bits);
                let mut angle = Float::with_val(bits, Constant::Pi) * 2u32;
                angle *= float(turns, bits);
                let (sin, cos) = angle.sin_cos(Float::new(bits));
                Complex::with_val(bits, (cos * &r, sin * r))
            }
        }
    }

    /// The input as typed, normalized to `a+bi` or `polar(r,t)`.
    pub fn canonical(&self) -> String {
        match &self.form {
            ComplexForm::Rect { re, im } => {
                if im.starts_with('-') {
                    format!("{re}{im}i")
                } else {
                    format!("{re}+{im}i")
                }
            }
            ComplexForm::Polar { r, turns } => format!("polar({r},{turns})"),
        }
    }
}

fn float(s: &str, bits: u32) -> Float {
    Float::with_val(bits, Float::parse(s).expect("validated when parsed"))
}

fn check_real(s: &str) -> Result<String, String> {
    let t = s.trim();
    let t = t.strip_prefix('+').unwrap_or(t);
    if t.is_empty() || t.chars().any(|c| c.is_ascii_alphabetic() && c != 'e' && c != 'E') {
        return Err(format!("'{s}' is not a real number"));
    }
    Float::parse(t).map_err(|e| format!("'{s}' is not a real number: {e}"))?;
    Ok(t.to_string())
}

/// Accepts `a`, `bi`, `a+bi`, `a-bi` (with `i` or `j`, signs optional) and
/// `polar(r,t)`.
pub fn parse_complex(s: &str) -> Result<ComplexArg, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err("empty complex number".into());
    }
    if let Some(inner) = t.strip_prefix("polar(").and_then(|r| r.strip_suffix(')')) {
        let (r, turns) = inner
            .split_once(',')
            .ok_or_else(|| format!("'{s}': polar form needs two arguments"))?;
        return Ok(ComplexArg {
            form: ComplexForm::Polar {
                r: check_real(r)?,
                turns: check_real(turns)?,
            },
        });
    }
    let Some(body) = t.strip_suffix('i').or_else(|| t.strip_suffix('j')) else {
        return Ok(ComplexArg {
            form: ComplexForm::Rect {
                re: check_real(&t)?,
                im: "0".into(),
            },
        });
    };
    // split at the last sign that is not an exponent sign or the leading sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1".to_string(),
        "-" => "-1".to_string(),
        other => check_real(other)?,
    };
    Ok(ComplexArg {
        form: ComplexForm::Rect {
            re: check_real(re)?,
            im,
        },
    })
}

/// Inclusive integer range `a..b`, or a single value `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeRange {
    pub from: usize,
    pub to: usize,
}

pub fn parse_range(s: &str) -> Result<DegreeRange, String> {
    let int = |x: &str| {
        x.trim()
            .parse::<usize>()
            .map_err(|_| format!("'{x}' is not a nonnegative integer"))
    };
    let (from, to) = match s.split_once("..") {
        Some((a, b)) => (int(a)?, int(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let v = int(s)?;
            (v, v)
        }
    };
    if to < from {
        return Err(format!("range {s} is empty"));
    }
    Ok(DegreeRange { from, to })
}

/// Signed inclusive range for Fourier indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexRange {
    pub from: i64,
    pub to: i64,
}

pub fn parse_index_range(s: &str) -> Result<IndexRange, String> {
    let int = |x: &str| x.trim().parse::<i64>().map_err(|_| format!("'{x}' is not an integer"));
    // the separator is the first ".." so negative bounds parse
    let (from, to) = match s.find("..") {
        Some(i) => (int(&s[..i])?, int(&s[i + 2..])?),
        None => {
            let v = int(s)?;
            (v, v)
        }
    };
    if to < from {
        return Err(format!("range {s} is empty"));
    }
    Ok(IndexRange { from, to })
}

/// Points at which to evaluate: one complex number, or the real grid
/// `from..to[..step]` (inclusive, default step 1).
#[derive(Debug, Clone, PartialEq)]
pub enum ZSpec {
    Point(ComplexArg),
    Grid { from: String, to: String, step: String },
}

/// Largest number of grid points accepted.
pub const MAX_GRID_POINTS: usize = 100_000;

impl ZSpec {
    pub fn points(&self, bits: u32) -> Result<Vec<Complex>, String> {
        match self {
            ZSpec::Point(c) => Ok(vec![c.to_complex(bits)]),
            ZSpec::Grid { from, to, step } => {
                let a = float(from, bits);
                let b = float(to, bits);
                let h = float(step, bits);
                if !(h > 0u32) {
                    return Err("grid step must be positive".into());
                }
                if b < a {
                    return Err("grid is empty".into());
                }
                // count = floor((b - a)/h) + 1, tolerating rounding of the quotient
                let span = Float::with_val(bits, &b - &a) / &h;
                let nearest = Float::with_val(bits, span.round_ref());
                let tol = Float::with_val(bits, Float::with_val(bits, 1u32) >> (bits / 2));
                let steps = if Float::with_val(bits, &span - &nearest).abs() <= tol {
                    nearest
                } else {
                    span.floor()
                };
                let steps = steps
                    .to_integer()
                    .and_then(|i| i.to_usize())
                    .filter(|s| *s < MAX_GRID_POINTS)
                    .ok_or_else(|| format!("grid has more than {MAX_GRID_POINTS} points"))?;
                Ok((0..=steps)
                    .map(|i| {
                        let x = Float::with_val(bits, &h * i as u32) + &a;
                        Complex::with_val(bits, (x, 0))
                    })
                    .collect())
            }
        }
    }
}

pub fn parse_z(s: &str) -> Result<ZSpec, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.contains("..") {
        let parts: Vec<&str> = t.split("..").collect();
        let (from, to, step) = match parts.as_slice() {
            [a, b] => (*a, *b, "1"),
            [a, b, h] => (*a, *b, *h),
            _ => return Err(format!("'{s}' is not a grid from..to[..step]")),
        };
        return Ok(ZSpec::Grid {
            from: check_real(from)?,
            to: check_real(to)?,
            step: check_real(step)?,
        });
    }
    parse_complex(&t).map(ZSpec::Point)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parts(s: &str) -> (f64, f64) {
        let c = parse_complex(s).unwrap().to_complex(64);
        (c.real().to_f64(), c.imag().to_f64())
    }

    #[test]
    fn complex_forms() {
        assert_eq!(parts("2"), (2.0, 0.0));
        assert_eq!(parts("-3"), (-3.0, 0.0));
        assert_eq!(parts("i"), (0.0, 1.0));
        assert_eq!(parts("-i"), (0.0, -1.0));
        assert_eq!(parts("0+1i"), (0.0, 1.0));
        assert_eq!(parts("0.3+0.2i"), (0.3, 0.2));
        assert_eq!(parts("0.5 - 2j"), (0.5, -2.0));
        assert_eq!(parts("1e-3-2.5e2i"), (1e-3, -250.0));
        assert_eq!(parts("-1.5e+1+i"), (-15.0, 1.0));
        assert_eq!(parts("2.5i"), (0.0, 2.5));
        let (re, im) = parts("polar(1,0.375)");
        let t = 0.75 * std::f64::consts::PI;
        assert!((re - t.cos()).abs() < 1e-15 && (im - t.sin()).abs() < 1e-15);
    }

    #[test]
    fn complex_rejects_garbage() {
        for s in ["", "abc", "1+2k", "1++2i", "polar(1)", "2x"] {
            assert!(parse_complex(s).is_err(), "{s}");
        }
    }

    #[test]
    fn canonical_text() {
        assert_eq!(parse_complex("0.3 + 0.2i").unwrap().canonical(), "0.3+0.2i");
        assert_eq!(parse_complex("1-i").unwrap().canonical(), "1-1i");
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("10..60").unwrap(), DegreeRange { from: 10, to: 60 });
        assert_eq!(parse_range("2..=4").unwrap(), DegreeRange { from: 2, to: 4 });
        assert_eq!(parse_range("7").unwrap(), DegreeRange { from: 7, to: 7 });
        assert!(parse_range("5..3").is_err());
        assert!(parse_range("-1..3").is_err());
        assert_eq!(parse_index_range("-2..2").unwrap(), IndexRange { from: -2, to: 2 });
        assert_eq!(parse_index_range("-5..-3").unwrap(), IndexRange { from: -5, to: -3 });
    }

    #[test]
    fn grids() {
        let g = parse_z("0..1..0.1").unwrap().points(128).unwrap();
        assert_eq!(g.len(), 11);
        assert!((g[10].real().to_f64() - 1.0).abs() < 1e-30);
        assert!((g[3].real().to_f64() - 0.3).abs() < 1e-30);
        assert_eq!(parse_z("-1..1").unwrap().points(64).unwrap().len(), 3);
        assert!(parse_z("1..0").unwrap().points(64).is_err());
        assert!(parse_z("0..1..0").unwrap().points(64).is_err());
        assert!(matches!(parse_z("0.3+0.2i").unwrap(), ZSpec::Point(_)));
    }
}
