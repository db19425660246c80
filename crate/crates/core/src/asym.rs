//! Truncated pole sums and rigorous bounds on their distance from the exact
//! scaled values.
//!
//! For an admissible truncation set `F` with gap radius `mu`,
//!
//! ```text
//! | b_n(z) + sum_{a in F} e^{az} / a^n |
//!     <= c mu^{-n} e^{mu|z|} + #F mu e^{mu|z|} |z|^{n+1} / (n+1)! + head(z, n)
//! ```
//!
//! where `c >= mu^2 sum_{a not in F} |a|^{-2}` is the tail constant at `z = 0`.
//! The first two terms come from propagating the `z = 0` tail through the
//! Appell expansion and from the Lagrange remainder of the truncated
//! exponential series. The tail estimate `|T_j| <= c mu^{-j}` only holds for
//! `j >= 2`; `head` adds whatever the `j = 0, 1` tails exceed it by, so the
//! bound is valid for every `n >= 2`.

use rug::ops::Pow;
use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::exact::ab_poly_scaled;
use crate::params::{pole, LambdaClass, ParamContext, TruncationKind, TruncationSet};
use crate::precision::{abs, inverse_factorials, log2_abs_float, two_pi, PrecisionConfig};

/// Explicit summation window beyond the largest member index.
pub const EXPLICIT_TAIL_TERMS: i64 = 50;

/// A partial sum together with a rigorous bound on its error.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproxCertificate {
    pub n: usize,
    pub z: Complex,
    pub truncation: TruncationSet,
    /// `-sum_{a in F} e^{az} / a^n`.
    pub partial_sum: Complex,
    pub mu: Float,
    pub tail_constant: Float,
    /// Contribution of the `j = 0, 1` tails not covered by `tail_constant`.
    pub head_correction: Float,
    pub bound: Float,
}

fn check_degree(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("degree must be at least 2, got {n}")));
    }
    Ok(())
}

/// `-sum_{a in F} e^{az} / a^n`. For real `lambda` and real `z` the set is
/// closed under conjugation and the imaginary part is set to exactly zero.
pub fn partial_sum(ctx: &ParamContext, set: &TruncationSet, z: &Complex, n: usize) -> Result<Complex> {
    check_degree(n)?;
    Ok(pole_sum(ctx, set, z, n))
}

pub(crate) fn pole_sum(ctx: &ParamContext, set: &TruncationSet, z: &Complex, n: usize) -> Complex {
    let bits = ctx.bits();
    let z = Complex::with_val(bits, z);
    let mut s = Complex::new(bits);
    for a in &set.members {
        let num = Complex::with_val(bits, &a.value * &z).exp();
        let den = Complex::with_val(bits, (&a.value).pow(n as u32));
        s += num / den;
    }
    s = -s;
    if ctx.class().is_real() && z.imag().is_zero() {
        *s.mut_imag() = Float::new(bits);
    }
    s
}

/// `(1 + q/(sigma - 1)) q^{-sigma}`, an upper bound for the Hurwitz zeta
/// function `zeta(sigma, q)` obtained by comparing the sum with an integral.
pub fn hurwitz_zeta_upper(sigma: f64, q: f64) -> Result<f64> {
    if !(sigma > 1.0) || !(q > 0.0) || !sigma.is_finite() || !q.is_finite() {
        return Err(Error::DomainError(format!(
            "hurwitz bound needs sigma > 1 and q > 0, got sigma={sigma}, q={q}"
        )));
    }
    Ok((1.0 + q / (sigma - 1.0)) * q.powf(-sigma))
}

fn hurwitz_zeta_upper_float(sigma: u32, q: &Float) -> Float {
    let bits = q.prec();
    let s1 = Float::with_val(bits, sigma - 1);
    let lead = Float::with_val(bits, q / &s1) + 1u32;
    let pow = Float::with_val(bits, q.pow(sigma)).recip();
    lead * pow
}

/// Relative widening applied to computed bounds to absorb rounding in their
/// own evaluation.
fn inflate(x: Float) -> Float {
    let bits = x.prec();
    let eps = Float::with_val(bits, Float::i_exp(1, 16 - bits as i32));
    x * (eps + 1u32)
}

/// A rigorous `c` with `c >= mu^2 sum_{a in S \ F} |a|^{-2}`.
///
/// Excluded poles with `|k| <= K0 = max |k in F| + 50` are summed directly;
/// the rest is bounded by `2 (2 pi)^{-2} zeta(2, K0 + 1/2)` using
/// `|a_k| >= 2 pi (|k| - 1/2)`.
pub fn tail_constant(ctx: &ParamContext, set: &TruncationSet) -> Result<Float> {
    let bits = ctx.bits();
    let k0 = set.max_abs_index() + EXPLICIT_TAIL_TERMS;
    let mut sum = Float::new(bits);
    for k in -k0..=k0 {
        if !ctx.index_allowed(k) || set.contains(k) {
            continue;
        }
        let p = pole(ctx, k)?;
        let m2 = Float::with_val(bits, p.modulus.square_ref());
        sum += m2.recip();
    }
    let q = Float::with_val(bits, k0) + 0.5f64;
    let tp = two_pi(bits);
    let tp2 = Float::with_val(bits, tp.square_ref());
    let remainder = hurwitz_zeta_upper_float(2, &q) * 2u32 / tp2;
    sum += remainder;
    let mu2 = Float::with_val(bits, set.mu.square_ref());
    Ok(inflate(mu2 * sum))
}

/// `max(0, |T_1| - c/mu) |z|^{n-1}/(n-1)! + max(0, |T_0| - c) |z|^n/n!` with
/// `T_j = b_j(0) + sum_{a in F} a^{-j}`.
fn head_correction(ctx: &ParamContext, set: &TruncationSet, c: &Float, z_abs: &Float, n: usize) -> Float {
    let bits = ctx.bits();
    let (b0, b1) = if ctx.class() == LambdaClass::One {
        (Complex::with_val(bits, 1), Complex::with_val(bits, -0.5f64))
    } else {
        let lm1 = Complex::with_val(bits, ctx.lambda() - 1u32);
        (Complex::new(bits), lm1.recip())
    };
    let mut t0 = b0;
    t0 += set.len() as u32;
    let mut t1 = b1;
    for a in &set.members {
        t1 += Complex::with_val(bits, a.value.recip_ref());
    }
    let mu = &set.mu;
    let excess1 = (abs(&t1) - Float::with_val(bits, c / mu)).max(&Float::new(bits));
    let excess0 = (abs(&t0) - c).max(&Float::new(bits));
    let inv = inverse_factorials(n, bits);
    let zn1 = Float::with_val(bits, z_abs.pow(n as u32 - 1)) * &inv[n - 1];
    let zn = Float::with_val(bits, z_abs.pow(n as u32)) * &inv[n];
    inflate(excess1 * zn1 + excess0 * zn)
}

/// The certificate for `b_n(z)` against the partial sum over `set`.
pub fn error_certificate(ctx: &ParamContext, set: &TruncationSet, z: &Complex, n: usize) -> Result<ApproxCertificate> {
    check_degree(n)?;
    let c = tail_constant(ctx, set)?;
    certificate_with_constant(ctx, set, z, n, c)
}

fn certificate_with_constant(
    ctx: &ParamContext,
    set: &TruncationSet,
    z: &Complex,
    n: usize,
    c: Float,
) -> Result<ApproxCertificate> {
    let bits = ctx.bits();
    let z = Complex::with_val(bits, z);
    let z_abs = abs(&z);
    let mu = Float::with_val(bits, &set.mu);
    let growth = Float::with_val(bits, &mu * &z_abs).exp();
    let mu_n = Float::with_val(bits, (&mu).pow(n as u32));
    let propagated = Float::with_val(bits, &c * &growth) / &mu_n;

    let inv = inverse_factorials(n + 1, bits);
    let zpow = Float::with_val(bits, (&z_abs).pow(n as u32 + 1)) * &inv[n + 1];
    let remainder = Float::with_val(bits, &mu * &growth) * zpow * (set.len() as u32);

    let head = head_correction(ctx, set, &c, &z_abs, n);
    let bound = inflate(propagated + remainder + &head);
    Ok(ApproxCertificate {
        n,
        partial_sum: pole_sum(ctx, set, &z, n),
        z,
        truncation: set.clone(),
        mu,
        tail_constant: c,
        head_correction: head,
        bound,
    })
}

/// Precision at which the exact value must be computed so that its rounding
/// error is far below `bound`: the dynamic range of the Appell sum relative to
/// the bound plus 64 guard bits.
pub fn verification_bits(ctx: &ParamContext, z: &Complex, n: usize, bound: &Float, base_bits: u32) -> Result<u32> {
    let a_min = smallest_pole_modulus(ctx)?;
    let z_abs = abs(&Complex::with_val(ctx.bits(), z)).to_f64();
    let log2e = std::f64::consts::LOG2_E;
    let range = -(n as f64) * a_min.log2() + a_min * z_abs * log2e + a_min * log2e;
    let need = range - log2_abs_float(bound) + 64.0 + (n as f64 + 1.0).log2();
    Ok((need.ceil().max(0.0) as u32).max(base_bits))
}

fn smallest_pole_modulus(ctx: &ParamContext) -> Result<f64> {
    let first = crate::params::pole_chain(ctx, 1)?;
    Ok(first[0].modulus.to_f64())
}

/// One row of an error table.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorRow {
    pub n: usize,
    pub exact: Complex,
    pub partial_sum: Complex,
    pub true_error: Float,
    pub bound: Float,
    /// `bound / true_error`; infinite when the error is exactly zero.
    pub slack: f64,
    pub holds: bool,
    /// Precision the exact value was computed at.
    pub bits: u32,
}

/// Certificates for `n` in `n_from..=n_to`, each checked against the exact
/// value computed at a precision high enough to resolve the bound.
pub fn error_table(
    ctx: &ParamContext,
    set: &TruncationSet,
    z: &Complex,
    n_from: usize,
    n_to: usize,
    prec: &PrecisionConfig,
) -> Result<Vec<ErrorRow>> {
    check_degree(n_from)?;
    if n_to < n_from {
        return Err(Error::InvalidArgument(format!("empty degree range {n_from}..{n_to}")));
    }
    prec.validate()?;
    let c = tail_constant(ctx, set)?;
    let certs: Vec<ApproxCertificate> = (n_from..=n_to)
        .map(|n| certificate_with_constant(ctx, set, z, n, c.clone()))
        .collect::<Result<_>>()?;
    let mut bits = prec.working_bits;
    for cert in &certs {
        bits = bits.max(verification_bits(ctx, z, cert.n, &cert.bound, prec.working_bits)?);
    }
    let exact = ab_poly_scaled(ctx, z, n_to, &prec.guarded(bits - prec.working_bits))?;
    let bits = exact.bits;
    let hi = ctx.at_precision(bits)?;
    let hi_set = crate::params::truncation_set(&hi, set.kind, set.m)?;
    Ok(certs
        .into_iter()
        .map(|cert| {
            let value = exact.values[cert.n].clone();
            let ps = pole_sum(&hi, &hi_set, &exact.z, cert.n);
            let diff = Complex::with_val(bits, &value - &ps);
            let err = abs(&diff);
            let slack = if err.is_zero() {
                f64::INFINITY
            } else {
                Float::with_val(bits, &cert.bound / &err).to_f64()
            };
            ErrorRow {
                n: cert.n,
                holds: err <= cert.bound,
                exact: value,
                partial_sum: ps,
                true_error: err,
                bound: cert.bound,
                slack,
                bits,
            }
        })
        .collect())
}

/// Convenience wrapper building the truncation set from `(kind, m)`.
pub fn error_table_for(
    ctx: &ParamContext,
    kind: TruncationKind,
    m: u32,
    z: &Complex,
    n_from: usize,
    n_to: usize,
    prec: &PrecisionConfig,
) -> Result<Vec<ErrorRow>> {
    let set = crate::params::truncation_set(ctx, kind, m)?;
    error_table(ctx, &set, z, n_from, n_to, prec)
}

/// A polynomial value rescaled so that it approaches a cosine (even degree)
/// or a sine (odd degree), together with that target.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitForm {
    pub degree: usize,
    pub z: Complex,
    pub scaled_poly: Complex,
    pub target: Complex,
    pub deviation: Float,
}

impl LimitForm {
    pub fn is_cosine(&self) -> bool {
        self.degree % 2 == 0
    }
}

/// Bernoulli form of degree `degree >= 1`:
///
/// ```text
/// (-1)^{n-1} (2 pi)^{2n}   / (2 (2n)!)   B_{2n}(z)   -> cos 2 pi z
/// (-1)^{n-1} (2 pi)^{2n+1} / (2 (2n+1)!) B_{2n+1}(z) -> sin 2 pi z
/// ```
pub fn dilcher_form(degree: usize, z: &Complex, prec: &PrecisionConfig) -> Result<LimitForm> {
    if degree == 0 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    let mut v = dilcher_series(z, degree, degree, prec)?;
    Ok(v.pop().expect("one degree requested"))
}

/// Bernoulli forms for every degree in `from..=to`.
pub fn dilcher_series(z: &Complex, from: usize, to: usize, prec: &PrecisionConfig) -> Result<Vec<LimitForm>> {
    rescaled_forms(1, z, from, to, prec)
}

/// Forms for `lambda = 1` (period 1, scale `2 pi`) or `lambda = -1`
/// (period 2, scale `pi`): `(-1)^{n-1} s^d / 2 * b_d(z; lambda)` against
/// `cos(s z)` or `sin(s z)`, where `n = floor(d / 2)`.
pub(crate) fn rescaled_forms(
    lambda: i32,
    z: &Complex,
    from: usize,
    to: usize,
    prec: &PrecisionConfig,
) -> Result<Vec<LimitForm>> {
    if from == 0 || to < from {
        return Err(Error::InvalidArgument(format!("invalid degree range {from}..{to}")));
    }
    prec.validate()?;
    // The deviation decays like (ratio of the first two pole moduli)^d, so
    // that many bits beyond the value's own scale are needed, plus the
    // growth of e^{|a||z|} across the Appell sum.
    let per_degree = if lambda == 1 { 1.0 } else { 3f64.log2() };
    let z_abs = abs(z).to_f64();
    let need = to as f64 * per_degree + 6.0 * std::f64::consts::PI * z_abs * std::f64::consts::LOG2_E + 96.0;
    let bits = prec.working_bits.max(need.ceil() as u32);
    let ctx = ParamContext::with_bits(Complex::with_val(bits, lambda), bits)?;
    let series = ab_poly_scaled(
        &ctx,
        z,
        to,
        &PrecisionConfig {
            working_bits: bits,
            ..*prec
        },
    )?;
    let bits = series.bits;
    let z = series.z.clone();
    let s = if lambda == 1 {
        two_pi(bits)
    } else {
        crate::precision::pi(bits)
    };
    let arg = Complex::with_val(bits, &z * &s);
    let cos = Complex::with_val(bits, arg.cos_ref());
    let sin = Complex::with_val(bits, arg.sin_ref());
    let mut out = Vec::with_capacity(to - from + 1);
    for degree in from..=to {
        let half = degree / 2;
        // (-1)^{half - 1}
        let sign: i32 = if half % 2 == 1 { 1 } else { -1 };
        let scale = Float::with_val(bits, (&s).pow(degree as u32)) * sign / 2u32;
        let scaled_poly = Complex::with_val(bits, &series.values[degree] * &scale);
        let target = if degree % 2 == 0 { cos.clone() } else { sin.clone() };
        let deviation = abs(&Complex::with_val(bits, &scaled_poly - &target));
        out.push(LimitForm {
            degree,
            z: z.clone(),
            scaled_poly,
            target,
            deviation,
        });
    }
    Ok(out)
}
