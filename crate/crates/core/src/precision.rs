//! Working-precision configuration and small multiprecision helpers shared by
//! every module.

use rug::float::Constant;
use rug::{Complex, Float, Integer};

use crate::error::{Error, Result};

/// Smallest supported working precision, in bits (IEEE double).
pub const MIN_BITS: u32 = 53;

/// Precision and tolerance settings for a computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrecisionConfig {
    /// Mantissa bits used for every multiprecision quantity.
    pub working_bits: u32,
    /// Minimum allowed `|lambda - 1|` before the evaluation is flagged as
    /// ill-conditioned and the precision is raised.
    pub conditioning_threshold: f64,
    /// Tolerance of the adaptive quadrature oracle.
    pub quadrature_tolerance: f64,
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        PrecisionConfig {
            working_bits: 128,
            conditioning_threshold: 1e-3,
            quadrature_tolerance: 1e-12,
        }
    }
}

impl PrecisionConfig {
    pub fn with_bits(bits: u32) -> Result<Self> {
        let cfg = PrecisionConfig {
            working_bits: bits,
            ..Default::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.working_bits < MIN_BITS {
            return Err(Error::InvalidPrecision(self.working_bits));
        }
        if !(self.conditioning_threshold > 0.0) {
            return Err(Error::InvalidArgument("conditioning threshold must be positive".into()));
        }
        if !(self.quadrature_tolerance > 0.0) {
            return Err(Error::InvalidArgument("quadrature tolerance must be positive".into()));
        }
        Ok(())
    }

    /// Same settings with `extra` guard bits added to the working precision.
    pub fn guarded(&self, extra: u32) -> Self {
        PrecisionConfig {
            working_bits: self.working_bits.saturating_add(extra),
            ..*self
        }
    }
}

/// Outcome of the conditioning check performed before dividing by `lambda - 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Conditioning {
    WellConditioned,
    /// `0 < |lambda - 1| < threshold`; the working precision was doubled once.
    IllConditioned {
        distance: f64,
        raised_bits: u32,
    },
}

impl Conditioning {
    pub fn is_ill(&self) -> bool {
        matches!(self, Conditioning::IllConditioned { .. })
    }
}

pub fn pi(bits: u32) -> Float {
    Float::with_val(bits, Constant::Pi)
}

pub fn two_pi(bits: u32) -> Float {
    pi(bits) * 2u32
}

/// `2 pi i` as a complex number.
pub fn two_pi_i(bits: u32) -> Complex {
    Complex::with_val(bits, (0, two_pi(bits)))
}

pub fn cx(bits: u32, re: f64, im: f64) -> Complex {
    Complex::with_val(bits, (re, im))
}

pub fn zero(bits: u32) -> Complex {
    Complex::new(bits)
}

/// `[1/0!, 1/1!, ..., 1/n!]`, each correctly rounded.
pub fn inverse_factorials(n: usize, bits: u32) -> Vec<Float> {
    (0..=n)
        .map(|k| {
            let f = Integer::from(Integer::factorial(k as u32));
            Float::with_val(bits, f).recip()
        })
        .collect()
}

/// `[w^0/0!, w^1/1!, ..., w^n/n!]`.
pub fn scaled_powers(w: &Complex, n: usize, bits: u32) -> Vec<Complex> {
    let mut out = Vec::with_capacity(n + 1);
    let mut term = Complex::with_val(bits, 1);
    out.push(term.clone());
    for k in 1..=n {
        term *= w;
        term /= k as u32;
        out.push(term.clone());
    }
    out
}

pub fn abs(z: &Complex) -> Float {
    Float::with_val(z.prec().0.max(z.prec().1), z.abs_ref())
}

/// `log2 |x|` without underflow for magnitudes outside the `f64` range.
/// Returns `-inf` for zero.
pub fn log2_abs_float(x: &Float) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (m, e) = x.to_f64_exp();
    m.abs().log2() + f64::from(e)
}

pub fn log2_abs(z: &Complex) -> f64 {
    log2_abs_float(&abs(z))
}

pub fn to_c64(z: &Complex) -> num_complex::Complex64 {
    num_complex::Complex64::new(z.real().to_f64(), z.imag().to_f64())
}

/// Distance between two complex numbers.
pub fn dist(a: &Complex, b: &Complex) -> Float {
    let d = Complex::with_val(a.prec().0.max(b.prec().0), a - b);
    abs(&d)
}

/// Precision (in bits) carried by a complex number.
pub fn bits_of(z: &Complex) -> u32 {
    z.prec().0.max(z.prec().1)
}
