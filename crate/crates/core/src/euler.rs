//! Apostol-Euler polynomials through the Apostol-Bernoulli family at `-lambda`:
//!
//! ```text
//! E_n(x; lambda) = -2/(n+1) B_{n+1}(x; -lambda)
//! ```
//!
//! so `E_n / (2 n!) = -b_{n+1}(x; -lambda)` and every Bernoulli result
//! transfers with the pole set `(2k+1) pi i - log lambda`.

use rug::ops::Pow;
use rug::{Complex, Float};

use crate::asym::{error_certificate, partial_sum, ApproxCertificate};
use crate::error::{Error, Result};
use crate::exact::ab_poly_scaled;
use crate::normalized::{beta_sequence, quotient_sequence, QuotientSeries};
use crate::params::{pole, truncation_set, LambdaClass, ParamContext, Pole, TruncationKind, TruncationSet};
use crate::precision::{abs, pi, PrecisionConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoleSetTag {
    /// `(2k+1) pi i - log lambda`, `k` in `Z`.
    Standard,
    /// `lambda = -1`: `2 pi i k` with `k != 0`, the pole at the origin removed.
    EulerAtMinusOne,
}

/// A parameter `lambda` paired with its mirror `-lambda`.
#[derive(Debug, Clone, PartialEq)]
pub struct EulerContext {
    pub base: ParamContext,
    pub mirror: ParamContext,
    /// `log(-lambda) = log(lambda) + eps_sign pi i`.
    pub eps_sign: i32,
    pub pole_set: PoleSetTag,
}

impl EulerContext {
    pub fn new(base: ParamContext) -> Result<Self> {
        let mirror = base.negated()?;
        let eps_sign = match base.class() {
            LambdaClass::RealPositiveNotOne | LambdaClass::One | LambdaClass::ImNegative => 1,
            LambdaClass::RealNegative | LambdaClass::ImPositive => -1,
        };
        let pole_set = if mirror.class() == LambdaClass::One {
            PoleSetTag::EulerAtMinusOne
        } else {
            PoleSetTag::Standard
        };
        Ok(EulerContext {
            base,
            mirror,
            eps_sign,
            pole_set,
        })
    }

    pub fn from_f64(re: f64, im: f64, bits: u32) -> Result<Self> {
        Self::new(ParamContext::from_f64(re, im, bits)?)
    }

    pub fn bits(&self) -> u32 {
        self.base.bits()
    }

    /// Index of the mirror pole that equals `(2j+1) pi i - log lambda`.
    pub fn mirror_index(&self, j: i64) -> i64 {
        j + i64::from((1 + self.eps_sign) / 2)
    }

    /// `(log lambda + eps pi i) / (log lambda - eps pi i)`.
    pub fn quotient_limit(&self) -> Result<Complex> {
        if self.base.class() == LambdaClass::RealNegative {
            return Err(Error::WrongClass {
                class: self.base.class(),
                reason: "the Euler quotient limit needs lambda off the negative axis",
            });
        }
        let bits = self.bits();
        let shift = Complex::with_val(bits, (0, pi(bits) * self.eps_sign));
        let num = Complex::with_val(bits, self.base.log_lambda() + &shift);
        let den = Complex::with_val(bits, self.base.log_lambda() - &shift);
        Ok(num / den)
    }
}

/// `(2j+1) pi i - log lambda`, read off the mirror pole set.
pub fn euler_pole(ectx: &EulerContext, j: i64) -> Result<Pole> {
    pole(&ectx.mirror, ectx.mirror_index(j))
}

/// `E_n(z; lambda) / (2 n!)` for `n = 0..=n_max`.
pub fn ae_poly_scaled(ectx: &EulerContext, z: &Complex, n_max: usize, prec: &PrecisionConfig) -> Result<Vec<Complex>> {
    let series = ab_poly_scaled(&ectx.mirror, z, n_max + 1, prec)?;
    Ok(series.values.into_iter().skip(1).map(|v| -v).collect())
}

/// `sum_{a in F} e^{az} / a^{n+1}` over the mirror truncation set, which
/// approximates `E_n(z; lambda) / (2 n!)`.
pub fn ae_fourier_partial(ectx: &EulerContext, kind: TruncationKind, m: u32, z: &Complex, n: usize) -> Result<Complex> {
    check_degree(n)?;
    let set = mirror_set(ectx, kind, m)?;
    Ok(-partial_sum(&ectx.mirror, &set, z, n + 1)?)
}

/// The mirror certificate at degree `n + 1`; its bound applies verbatim to
/// `E_n / (2 n!)` since the two differ only in sign.
pub fn ae_certificate(
    ectx: &EulerContext,
    kind: TruncationKind,
    m: u32,
    z: &Complex,
    n: usize,
) -> Result<ApproxCertificate> {
    check_degree(n)?;
    let set = mirror_set(ectx, kind, m)?;
    let mut cert = error_certificate(&ectx.mirror, &set, z, n + 1)?;
    cert.partial_sum = -cert.partial_sum;
    Ok(cert)
}

fn mirror_set(ectx: &EulerContext, kind: TruncationKind, m: u32) -> Result<TruncationSet> {
    truncation_set(&ectx.mirror, kind, m)
}

fn check_degree(n: usize) -> Result<()> {
    if n < 1 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    Ok(())
}

/// Both sides of `2^n B_n(z/2; lambda^2) = B_n(z; lambda) + B_n(z; -lambda)` in
/// scaled form.
#[derive(Debug, Clone, PartialEq)]
pub struct DuplicationResidual {
    pub n: usize,
    pub lhs: Complex,
    pub rhs: Complex,
    pub absolute: Float,
    /// `absolute / max(|lhs|, |b_n(z; lambda)| + |b_n(z; -lambda)|)`, zero when
    /// every term vanishes.
    pub relative: Float,
}

/// Duplication residuals for `n = 0..=n_max`. `lambda^2` is formed as a
/// complex square and its logarithm re-derived on the principal branch.
pub fn duplication_check(
    ctx: &ParamContext,
    z: &Complex,
    n_max: usize,
    prec: &PrecisionConfig,
) -> Result<Vec<DuplicationResidual>> {
    prec.validate()?;
    let bits = prec.working_bits.max(ctx.bits());
    let base = ctx.at_precision(bits)?;
    let square = ParamContext::with_bits(Complex::with_val(bits, base.lambda().square_ref()), bits)?;
    let z = Complex::with_val(bits, z);
    let half = Complex::with_val(bits, &z / 2u32);
    let p = ab_poly_scaled(&base, &z, n_max, prec)?;
    let q = ab_poly_scaled(&base.negated()?, &z, n_max, prec)?;
    let s = ab_poly_scaled(&square, &half, n_max, prec)?;
    let out_bits = p.bits.min(q.bits).min(s.bits);
    (0..=n_max)
        .map(|n| {
            let lhs = Complex::with_val(out_bits, &s.values[n] << n as u32);
            let rhs = Complex::with_val(out_bits, &p.values[n] + &q.values[n]);
            let absolute = abs(&Complex::with_val(out_bits, &lhs - &rhs));
            let scale = Float::with_val(out_bits, abs(&p.values[n]) + abs(&q.values[n])).max(&abs(&lhs));
            let relative = if scale.is_zero() {
                Float::new(out_bits)
            } else {
                Float::with_val(out_bits, &absolute / &scale)
            };
            Ok(DuplicationResidual {
                n,
                lhs,
                rhs,
                absolute,
                relative,
            })
        })
        .collect()
}

/// One value of the normalized Euler sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonValue {
    pub n: usize,
    pub z: Complex,
    pub epsilon: Complex,
}

/// `eps_n(z) = (-1)^{n+1} (log lambda + eps pi i)^{n+1} / (2 n!) e^{eps pi i z} lambda^z E_n(z)`,
/// which equals `beta_{n+1}(z; -lambda)`.
pub fn epsilon_n(ectx: &EulerContext, z: &Complex, n: usize, prec: &PrecisionConfig) -> Result<EpsilonValue> {
    let mut v = epsilon_sequence(ectx, z, n, n, prec)?;
    Ok(v.pop().expect("one degree requested"))
}

pub fn epsilon_sequence(
    ectx: &EulerContext,
    z: &Complex,
    n_from: usize,
    n_to: usize,
    prec: &PrecisionConfig,
) -> Result<Vec<EpsilonValue>> {
    require_not_minus_one(ectx)?;
    check_degree(n_from)?;
    let values = beta_sequence(&ectx.mirror, z, n_from + 1, n_to + 1, prec)?;
    Ok(values
        .into_iter()
        .map(|v| EpsilonValue {
            n: v.n - 1,
            z: v.z,
            epsilon: v.beta,
        })
        .collect())
}

/// `(eps_{n+1} - 1) / (eps_n - 1)` for `n` in `n_from..=n_to`; entries are
/// indexed by the Euler degree.
pub fn epsilon_quotients(
    ectx: &EulerContext,
    z: &Complex,
    n_from: usize,
    n_to: usize,
    prec: &PrecisionConfig,
) -> Result<QuotientSeries> {
    require_not_minus_one(ectx)?;
    check_degree(n_from)?;
    let mut series = quotient_sequence(&ectx.mirror, z, n_from + 1, n_to + 1, prec)?;
    for e in &mut series.entries {
        e.n -= 1;
    }
    Ok(series)
}

/// `((log lambda + pi i)/(log lambda - pi i))^{n+1} e^{2 pi i z}`, the
/// oscillating part of `eps_n` for `lambda > 0`.
pub fn epsilon_oscillation(ectx: &EulerContext, z: &Complex, n: usize) -> Result<Complex> {
    if !ectx.base.class().is_positive_real() {
        return Err(Error::WrongClass {
            class: ectx.base.class(),
            reason: "the oscillating Euler term needs lambda > 0",
        });
    }
    let bits = ectx.bits();
    let w = ectx.quotient_limit()?;
    let wn = Complex::with_val(bits, w.pow(n as u32 + 1));
    let phase = Complex::with_val(bits, crate::precision::two_pi_i(bits) * z).exp();
    Ok(wn * phase)
}

fn require_not_minus_one(ectx: &EulerContext) -> Result<()> {
    if ectx.pole_set == PoleSetTag::EulerAtMinusOne {
        return Err(Error::MinusOneLambda);
    }
    Ok(())
}
