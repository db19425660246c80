//! Exact evaluation of the factorially scaled Apostol-Bernoulli values
//! `b_n(z) = B_n(z; lambda) / n!`.
//!
//! Two independent paths are provided: the numbers `b_n(0)` followed by the
//! Appell shift, and a recurrence run directly in powers of `z`. A quadrature
//! oracle for the Fourier coefficients of `x -> lambda^x B_n(x; lambda)` lives
//! here as well.

use log::warn;
use num_complex::Complex64;
use rug::ops::Pow;
use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::params::{LambdaClass, ParamContext};
use crate::precision::{abs, inverse_factorials, scaled_powers, to_c64, two_pi_i, Conditioning, PrecisionConfig};
use crate::quadrature::{integrate_adaptive, MAX_PANELS};

/// One scaled value `B_n(z; lambda) / n!`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledValue {
    pub n: usize,
    pub z: Complex,
    pub value: Complex,
    pub lambda: Complex,
    /// Precision the value was computed at; larger than requested when the
    /// conditioning check raised it.
    pub bits: u32,
}

/// `b_0(z), ..., b_N(z)` for one `z`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledSeries {
    pub z: Complex,
    pub lambda: Complex,
    pub values: Vec<Complex>,
    pub bits: u32,
    pub conditioning: Conditioning,
}

impl ScaledSeries {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, n: usize) -> Option<&Complex> {
        self.values.get(n)
    }

    pub fn value(&self, n: usize) -> Option<ScaledValue> {
        self.values.get(n).map(|v| ScaledValue {
            n,
            z: self.z.clone(),
            value: v.clone(),
            lambda: self.lambda.clone(),
            bits: self.bits,
        })
    }

    pub fn into_values(self) -> Vec<ScaledValue> {
        let ScaledSeries {
            z,
            lambda,
            values,
            bits,
            ..
        } = self;
        values
            .into_iter()
            .enumerate()
            .map(|(n, value)| ScaledValue {
                n,
                z: z.clone(),
                value,
                lambda: lambda.clone(),
                bits,
            })
            .collect()
    }
}

/// Validates `prec` and returns `ctx` at the precision the evaluation will
/// actually use. When `0 < |lambda - 1| < threshold` the division by
/// `lambda - 1` loses about `log2(1/|lambda - 1|)` bits per step, so the
/// working precision is doubled once and a warning is logged.
pub fn conditioned_context(ctx: &ParamContext, prec: &PrecisionConfig) -> Result<(ParamContext, Conditioning)> {
    prec.validate()?;
    let mut bits = prec.working_bits.max(ctx.bits());
    let mut conditioning = Conditioning::WellConditioned;
    if ctx.class() != LambdaClass::One {
        let d = Complex::with_val(ctx.bits(), ctx.lambda() - 1u32);
        let distance = abs(&d).to_f64();
        if distance < prec.conditioning_threshold {
            bits = bits.saturating_mul(2);
            warn!(
                "|lambda - 1| = {distance:e} is below {:e}; raising precision to {bits} bits",
                prec.conditioning_threshold
            );
            conditioning = Conditioning::IllConditioned {
                distance,
                raised_bits: bits,
            };
        }
    }
    Ok((ctx.at_precision(bits)?, conditioning))
}

fn lift(z: &Complex, bits: u32) -> Complex {
    Complex::with_val(bits, z)
}

/// The scaled numbers `b_n(0)`, `n = 0..=n_max`.
///
/// For `lambda != 1`: `(lambda - 1) b_n = [n = 1] - lambda sum_{k<n} b_k / (n-k)!`.
/// For `lambda = 1`: `b_0 = 1`, `b_n = -sum_{k<n} b_k / (n-k+1)!`.
pub fn ab_numbers_scaled(ctx: &ParamContext, n_max: usize, prec: &PrecisionConfig) -> Result<ScaledSeries> {
    let (ctx, conditioning) = conditioned_context(ctx, prec)?;
    let bits = ctx.bits();
    let values = numbers_at(&ctx, n_max);
    Ok(ScaledSeries {
        z: Complex::new(bits),
        lambda: ctx.lambda().clone(),
        values,
        bits,
        conditioning,
    })
}

fn numbers_at(ctx: &ParamContext, n_max: usize) -> Vec<Complex> {
    let bits = ctx.bits();
    let inv = inverse_factorials(n_max + 1, bits);
    let mut b: Vec<Complex> = Vec::with_capacity(n_max + 1);
    if ctx.class() == LambdaClass::One {
        b.push(Complex::with_val(bits, 1));
        for n in 1..=n_max {
            let mut s = Complex::new(bits);
            for (k, bk) in b.iter().enumerate() {
                s += Complex::with_val(bits, bk * &inv[n - k + 1]);
            }
            b.push(-s);
        }
        return b;
    }
    let lambda = ctx.lambda();
    let denom = Complex::with_val(bits, lambda - 1u32).recip();
    b.push(Complex::new(bits));
    for n in 1..=n_max {
        let mut s = Complex::new(bits);
        for (k, bk) in b.iter().enumerate() {
            s += Complex::with_val(bits, bk * &inv[n - k]);
        }
        let mut rhs = Complex::with_val(bits, -(s * lambda));
        if n == 1 {
            rhs += 1u32;
        }
        b.push(rhs * &denom);
    }
    b
}

/// `b_n(z)`, `n = 0..=n_max`, via `b_n(z) = sum_k b_{n-k}(0) z^k / k!`.
pub fn ab_poly_scaled(ctx: &ParamContext, z: &Complex, n_max: usize, prec: &PrecisionConfig) -> Result<ScaledSeries> {
    let (ctx, conditioning) = conditioned_context(ctx, prec)?;
    let bits = ctx.bits();
    let b0 = numbers_at(&ctx, n_max);
    let z = lift(z, bits);
    let powers = scaled_powers(&z, n_max, bits);
    let values = appell_shift(&b0, &powers, bits);
    Ok(ScaledSeries {
        z,
        lambda: ctx.lambda().clone(),
        values,
        bits,
        conditioning,
    })
}

/// Applies the Appell shift to a scaled sequence: given `c_n = P_n(x)/n!` and
/// `w^k/k!`, returns `P_n(x + w)/n!`.
pub fn appell_shift(c: &[Complex], powers: &[Complex], bits: u32) -> Vec<Complex> {
    (0..c.len())
        .map(|n| {
            let mut s = Complex::new(bits);
            for k in 0..=n {
                s += Complex::with_val(bits, &c[n - k] * &powers[k]);
            }
            s
        })
        .collect()
}

/// `b_n(z)` through the coefficient recurrence in powers of `z`, without
/// going through `b_n(0)`. Returns `b_0(z), ..., b_n(z)`.
///
/// For `lambda != 1`: `(lambda - 1) b_n(z) = z^{n-1}/(n-1)! - lambda sum_{k<n} b_k(z)/(n-k)!`.
/// For `lambda = 1`: `b_n(z) = z^n/n! - sum_{j=2}^{n+1} b_{n+1-j}(z)/j!`.
pub fn ab_poly_direct_series(
    ctx: &ParamContext,
    z: &Complex,
    n: usize,
    prec: &PrecisionConfig,
) -> Result<ScaledSeries> {
    let (ctx, conditioning) = conditioned_context(ctx, prec)?;
    let bits = ctx.bits();
    let z = lift(z, bits);
    let p = scaled_powers(&z, n, bits);
    let inv = inverse_factorials(n + 1, bits);
    let mut b: Vec<Complex> = Vec::with_capacity(n + 1);
    if ctx.class() == LambdaClass::One {
        for m in 0..=n {
            let mut s = p[m].clone();
            for j in 2..=m + 1 {
                s -= Complex::with_val(bits, &b[m + 1 - j] * &inv[j]);
            }
            b.push(s);
        }
    } else {
        let lambda = ctx.lambda();
        let denom = Complex::with_val(bits, lambda - 1u32).recip();
        b.push(Complex::new(bits));
        for m in 1..=n {
            let mut s = Complex::new(bits);
            for (k, bk) in b.iter().enumerate() {
                s += Complex::with_val(bits, bk * &inv[m - k]);
            }
            let rhs = Complex::with_val(bits, &p[m - 1] - s * lambda);
            b.push(rhs * &denom);
        }
    }
    Ok(ScaledSeries {
        z,
        lambda: ctx.lambda().clone(),
        values: b,
        bits,
        conditioning,
    })
}

/// The single value `b_n(z)` by the direct recurrence.
pub fn ab_poly_direct(ctx: &ParamContext, z: &Complex, n: usize, prec: &PrecisionConfig) -> Result<ScaledValue> {
    let series = ab_poly_direct_series(ctx, z, n, prec)?;
    Ok(series.value(n).expect("series has n + 1 entries"))
}

/// `B_n(z; 0) / n! = -z^{n-1} / (n-1)!` for `n >= 1`, and `0` for `n = 0`.
/// `lambda = 0` has no context, so this bypasses `ParamContext`.
pub fn ab_poly_lambda_zero(z: &Complex, n_max: usize, bits: u32) -> Result<Vec<Complex>> {
    PrecisionConfig::with_bits(bits)?;
    let z = lift(z, bits);
    let p = scaled_powers(&z, n_max.saturating_sub(1), bits);
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(Complex::new(bits));
    for n in 1..=n_max {
        out.push(Complex::with_val(bits, -&p[n - 1]));
    }
    Ok(out)
}

/// `-1 / (2 pi i k - log lambda)^n`: the scaled Fourier coefficient of
/// `x -> lambda^x b_n(x)` on `[0, 1]`. Zero for `lambda = 1, k = 0`.
pub fn fourier_coefficient_closed_form(ctx: &ParamContext, n: u32, k: i64) -> Result<Complex> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let bits = ctx.bits();
    if ctx.class() == LambdaClass::One && k == 0 {
        return Ok(Complex::new(bits));
    }
    let a = Complex::with_val(bits, two_pi_i(bits) * Float::with_val(bits, k)) - ctx.log_lambda();
    let an = a.pow(n);
    Ok(-an.recip())
}

/// `int_0^1 lambda^x b_n(x) e^{-2 pi i k x} dx` by adaptive Gauss-Legendre
/// quadrature in double precision.
pub fn fourier_coefficient_quadrature(
    ctx: &ParamContext,
    n: usize,
    k: i64,
    prec: &PrecisionConfig,
) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let numbers = ab_numbers_scaled(ctx, n, prec)?;
    // b_n(x) = sum_j b_{n-j}(0) x^j / j!, stored highest degree first for Horner.
    let inv = inverse_factorials(n, numbers.bits);
    let coeffs: Vec<Complex64> = (0..=n)
        .rev()
        .map(|j| to_c64(&Complex::with_val(numbers.bits, &numbers.values[n - j] * &inv[j])))
        .collect();
    let log_l = to_c64(ctx.log_lambda());
    let freq = Complex64::new(0.0, -2.0 * std::f64::consts::PI * k as f64);
    let integrand = |x: f64| {
        let mut poly = Complex64::new(0.0, 0.0);
        for c in &coeffs {
            poly = poly * x + c;
        }
        poly * ((log_l + freq) * x).exp()
    };
    integrate_adaptive(integrand, 0.0, 1.0, prec.quadrature_tolerance, MAX_PANELS)
}
