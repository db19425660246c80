//! The normalized sequence
//! `beta_n(z) = (-1)^{n-1} (log lambda)^n lambda^z B_n(z; lambda) / n!`,
//! its Fourier form `sum_k e^{2 pi i k z} / (1 - k Lambda)^n` with
//! `Lambda = 2 pi i / log lambda`, and the successive quotients
//! `(beta_{n+1} - 1) / (beta_n - 1)`.

use rug::{Complex, Float};

use crate::asym::{error_certificate, pole_sum};
use crate::error::{Error, Result};
use crate::exact::ab_poly_scaled;
use crate::fit::envelope_rate;
use crate::params::{pole_chain, LambdaClass, ParamContext, TruncationSet};
use crate::precision::{abs, log2_abs, two_pi_i, PrecisionConfig};

/// One value of the normalized sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedValue {
    pub n: usize,
    pub z: Complex,
    pub beta: Complex,
    /// Sign used by the quotient limit: `+1` for `Im lambda > 0` or
    /// `lambda < 0`, `-1` for `Im lambda < 0`, absent for `lambda > 0`.
    pub epsilon_sign: Option<i32>,
}

fn require_not_one(ctx: &ParamContext) -> Result<&Complex> {
    ctx.cap_lambda().ok_or(Error::UnitLambda)
}

fn check_degree(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("degree must be at least 2, got {n}")));
    }
    Ok(())
}

/// `(-1)^{n-1} (log lambda)^n lambda^z`, evaluated as
/// `exp(n log(log lambda) + z log lambda)` so the magnitude never leaves the
/// exponent range for large `n`.
pub fn normalization_factor(ctx: &ParamContext, z: &Complex, n: usize) -> Result<Complex> {
    require_not_one(ctx)?;
    let bits = ctx.bits();
    let ll = ctx.log_lambda();
    let log_ll = Complex::with_val(bits, ll.ln_ref());
    let mut e = Complex::with_val(bits, &log_ll * n as u32);
    e += Complex::with_val(bits, z * ll);
    let f = e.exp();
    Ok(if n % 2 == 1 { f } else { -f })
}

/// `beta_n(z)` from the exact scaled value.
pub fn beta(ctx: &ParamContext, z: &Complex, n: usize, prec: &PrecisionConfig) -> Result<NormalizedValue> {
    let mut v = beta_sequence(ctx, z, n, n, prec)?;
    Ok(v.pop().expect("one degree requested"))
}

/// `beta_n(z)` for `n` in `n_from..=n_to`, from one exact series.
pub fn beta_sequence(
    ctx: &ParamContext,
    z: &Complex,
    n_from: usize,
    n_to: usize,
    prec: &PrecisionConfig,
) -> Result<Vec<NormalizedValue>> {
    require_not_one(ctx)?;
    check_degree(n_from)?;
    if n_to < n_from {
        return Err(Error::InvalidArgument(format!("empty degree range {n_from}..{n_to}")));
    }
    let series = ab_poly_scaled(ctx, z, n_to, prec)?;
    let hi = ctx.at_precision(series.bits)?;
    let bits = series.bits;
    (n_from..=n_to)
        .map(|n| {
            let f = normalization_factor(&hi, &series.z, n)?;
            Ok(NormalizedValue {
                n,
                z: series.z.clone(),
                beta: Complex::with_val(bits, &series.values[n] * &f),
                epsilon_sign: ctx.epsilon(),
            })
        })
        .collect()
}

/// `e^{2 pi i k x} / (1 - k Lambda)^n`.
pub fn beta_fourier_term(ctx: &ParamContext, k: i64, x: &Complex, n: usize) -> Result<Complex> {
    let cap = require_not_one(ctx)?;
    let bits = ctx.bits();
    let mut d = Complex::with_val(bits, cap * k);
    d = Complex::with_val(bits, 1u32 - &d);
    let dn = Complex::with_val(bits, rug::ops::Pow::pow(&d, n as u32));
    let arg = Complex::with_val(bits, two_pi_i(bits) * x) * k;
    Ok(arg.exp() / dn)
}

/// Sum of `beta_fourier_term` over the indices of `set`.
pub fn beta_partial_sum(ctx: &ParamContext, set: &TruncationSet, z: &Complex, n: usize) -> Result<Complex> {
    let mut s = Complex::new(ctx.bits());
    for &k in &set.indices {
        s += beta_fourier_term(ctx, k, z, n)?;
    }
    Ok(s)
}

/// The truncated Fourier form of `beta_n(z)` with a rigorous error bound,
/// obtained by transporting the certificate of the scaled value through the
/// normalization factor. The partial sum is computed on the pole side, which
/// is algebraically identical to [`beta_partial_sum`].
#[derive(Debug, Clone, PartialEq)]
pub struct BetaCertificate {
    pub n: usize,
    pub partial_sum: Complex,
    pub bound: Float,
}

pub fn beta_certificate(ctx: &ParamContext, set: &TruncationSet, z: &Complex, n: usize) -> Result<BetaCertificate> {
    check_degree(n)?;
    let f = normalization_factor(ctx, z, n)?;
    let cert = error_certificate(ctx, set, z, n)?;
    let bits = ctx.bits();
    let partial_sum = Complex::with_val(bits, &f * &pole_sum(ctx, set, z, n));
    let bound = abs(&f) * cert.bound;
    Ok(BetaCertificate { n, partial_sum, bound })
}

/// `1 / (1 - epsilon Lambda)`, the limit of the successive quotients off the
/// positive real axis.
pub fn quotient_limit(ctx: &ParamContext) -> Result<Complex> {
    let (eps_cap, _) = eps_lambda(ctx)?;
    let bits = ctx.bits();
    Ok(Complex::with_val(bits, 1u32 - &eps_cap).recip())
}

/// `|(1 - epsilon Lambda) / (1 + epsilon Lambda)|`, the geometric rate at
/// which the quotients approach their limit.
pub fn quotient_rate(ctx: &ParamContext) -> Result<f64> {
    let (eps_cap, _) = eps_lambda(ctx)?;
    let bits = ctx.bits();
    let num = Complex::with_val(bits, 1u32 - &eps_cap);
    let den = Complex::with_val(bits, 1u32 + &eps_cap);
    Ok(Float::with_val(bits, abs(&num) / abs(&den)).to_f64())
}

fn eps_lambda(ctx: &ParamContext) -> Result<(Complex, i32)> {
    let cap = require_not_one(ctx)?;
    let eps = ctx.epsilon().ok_or(Error::WrongClass {
        class: ctx.class(),
        reason: "the quotient limit needs lambda off the positive real axis",
    })?;
    Ok((Complex::with_val(ctx.bits(), cap * eps), eps))
}

/// Modulus of the dominant non-constant Fourier term denominator: the
/// quotients run at `|beta_n - 1| ~ r^{-n}` with this `r`.
fn dominant_denominator(ctx: &ParamContext) -> Result<f64> {
    let cap = require_not_one(ctx)?;
    let bits = ctx.bits();
    let m = Complex::with_val(bits, 1u32 - cap);
    let p = Complex::with_val(bits, 1u32 + cap);
    Ok(abs(&m).to_f64().min(abs(&p).to_f64()))
}

/// Working precision for quotients up to `n_to`: `2^{-bits/2}` must sit far
/// below `|beta_n - 1|`, and `b_n(z)` loses the Appell-sum dynamic range.
pub fn quotient_bits(ctx: &ParamContext, z: &Complex, n_to: usize, base_bits: u32) -> Result<u32> {
    let r = dominant_denominator(ctx)?;
    let log2e = std::f64::consts::LOG2_E;
    let z_abs = abs(&Complex::with_val(ctx.bits(), z)).to_f64();
    let z_im = z.imag().to_f64().abs();
    let a_min = pole_chain(ctx, 1)?[0].modulus.to_f64();
    let decay = (n_to as f64 + 1.0) * r.log2().max(0.0);
    let spread = 2.0 * std::f64::consts::PI * z_im * log2e;
    let appell = a_min * (z_abs + 1.0) * log2e;
    let need = 2.0 * (decay + spread + 32.0) + appell + 32.0;
    Ok(base_bits.max(need.ceil() as u32))
}

/// One successive quotient. `value` is `None` when `|beta_n - 1|` fell below
/// `2^{-bits/2}` and the division was not performed.
#[derive(Debug, Clone, PartialEq)]
pub struct QuotientEntry {
    pub n: usize,
    pub value: Option<Complex>,
    pub near_singular: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuotientSeries {
    pub entries: Vec<QuotientEntry>,
    /// Precision of the underlying exact values.
    pub bits: u32,
}

impl QuotientSeries {
    /// First `n` from which no later entry is flagged.
    pub fn first_unflagged_tail(&self) -> Option<usize> {
        let last_flag = self.entries.iter().rposition(|e| e.near_singular);
        match last_flag {
            None => self.entries.first().map(|e| e.n),
            Some(i) => self.entries.get(i + 1).map(|e| e.n),
        }
    }

    pub fn last(&self) -> Option<&QuotientEntry> {
        self.entries.last()
    }
}

/// `q_n = (beta_{n+1} - 1) / (beta_n - 1)` for `n` in `n_from..=n_to`.
///
/// Any `lambda != 0, 1` is accepted: off the positive axis the quotients
/// converge, on it they stay bounded and the near-zeros of `beta_n - 1` show
/// up as flagged entries.
pub fn quotient_sequence(
    ctx: &ParamContext,
    z: &Complex,
    n_from: usize,
    n_to: usize,
    prec: &PrecisionConfig,
) -> Result<QuotientSeries> {
    check_degree(n_from)?;
    if n_to < n_from {
        return Err(Error::InvalidArgument(format!("empty degree range {n_from}..{n_to}")));
    }
    prec.validate()?;
    let bits = quotient_bits(ctx, z, n_to, prec.working_bits)?;
    let values = beta_sequence(
        ctx,
        z,
        n_from,
        n_to + 1,
        &PrecisionConfig {
            working_bits: bits,
            ..*prec
        },
    )?;
    let bits = values.first().map(|v| v.beta.prec().0).unwrap_or(bits);
    let threshold = -(bits as f64) / 2.0;
    let minus_one: Vec<Complex> = values.iter().map(|v| Complex::with_val(bits, &v.beta - 1u32)).collect();
    let entries = (0..=n_to - n_from)
        .map(|i| {
            let n = n_from + i;
            let den = &minus_one[i];
            if log2_abs(den) < threshold {
                QuotientEntry {
                    n,
                    value: None,
                    near_singular: true,
                }
            } else {
                QuotientEntry {
                    n,
                    value: Some(Complex::with_val(bits, &minus_one[i + 1] / den)),
                    near_singular: false,
                }
            }
        })
        .collect();
    Ok(QuotientSeries { entries, bits })
}

/// Trajectory of `beta_n` towards its limit `1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZerothLimitReport {
    pub values: Vec<NormalizedValue>,
    pub limit: Complex,
    /// Envelope rate of `|beta_n - 1|` fitted over the second half of the
    /// trajectory.
    pub fitted_rate: f64,
    /// `1 / min |1 +- Lambda|`.
    pub predicted_rate: f64,
}

/// Window used for envelope fits of oscillating sequences.
pub const ENVELOPE_WINDOW: usize = 6;

pub fn zeroth_limit_report(
    ctx: &ParamContext,
    z: &Complex,
    n_max: usize,
    prec: &PrecisionConfig,
) -> Result<ZerothLimitReport> {
    match ctx.class() {
        LambdaClass::One => return Err(Error::UnitLambda),
        LambdaClass::RealNegative => {
            return Err(Error::WrongClass {
                class: ctx.class(),
                reason: "beta_n oscillates for negative lambda; use the oscillation analysis",
            })
        }
        _ => {}
    }
    if n_max < 2 + 2 * ENVELOPE_WINDOW {
        return Err(Error::InvalidArgument(format!(
            "n_max must be at least {}",
            2 + 2 * ENVELOPE_WINDOW
        )));
    }
    let bits = quotient_bits(ctx, z, n_max, prec.working_bits)?;
    let values = beta_sequence(
        ctx,
        z,
        2,
        n_max,
        &PrecisionConfig {
            working_bits: bits,
            ..*prec
        },
    )?;
    let half = values.len() / 2;
    let tail = &values[half..];
    let ns: Vec<usize> = tail.iter().map(|v| v.n).collect();
    let logs: Vec<f64> = tail
        .iter()
        .map(|v| log2_abs(&Complex::with_val(bits, &v.beta - 1u32)))
        .collect();
    let fitted_rate = envelope_rate(&ns, &logs, ENVELOPE_WINDOW).unwrap_or(f64::NAN);
    let predicted_rate = 1.0 / dominant_denominator(ctx)?;
    Ok(ZerothLimitReport {
        values,
        limit: Complex::with_val(ctx.bits(), 1),
        fitted_rate,
        predicted_rate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{truncation_set, TruncationKind};
    use crate::precision::{cx, to_c64};
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn ctx(re: f64, im: f64) -> ParamContext {
        ParamContext::from_f64(re, im, 128).unwrap()
    }

    fn p() -> PrecisionConfig {
        PrecisionConfig::default()
    }

    #[test]
    fn unit_lambda_rejected() {
        let c = ctx(1.0, 0.0);
        assert_eq!(beta(&c, &cx(128, 0.0, 0.0), 3, &p()), Err(Error::UnitLambda));
        assert_eq!(beta_fourier_term(&c, 1, &cx(128, 0.0, 0.0), 2), Err(Error::UnitLambda));
    }

    #[test]
    fn lambda_e_is_plain_rescaling() {
        let c = ParamContext::with_bits(Complex::with_val(128, Float::with_val(128, 1).exp()), 128).unwrap();
        let z = cx(128, 0.4, 0.1);
        let s = ab_poly_scaled(&c, &z, 9, &p()).unwrap();
        for n in 2..=9usize {
            let b = beta(&c, &z, n, &p()).unwrap();
            let sign = if n % 2 == 1 { 1 } else { -1 };
            let ez = Complex::with_val(128, z.exp_ref());
            let expected = Complex::with_val(128, &s.values[n] * &ez) * sign;
            let d = abs(&Complex::with_val(128, &b.beta - &expected)).to_f64();
            assert!(d < 1e-30 * abs(&expected).to_f64());
        }
    }

    #[test]
    fn lambda_two_beta_near_one() {
        let c = ctx(2.0, 0.0);
        let f = truncation_set(&c, TruncationKind::Zm, 0).unwrap();
        let b = beta(&c, &cx(128, 0.0, 0.0), 40, &PrecisionConfig::with_bits(320).unwrap()).unwrap();
        let cert = beta_certificate(&c, &f, &cx(128, 0.0, 0.0), 40).unwrap();
        let dev = abs(&Complex::with_val(128, &b.beta - 1u32));
        assert!(dev <= cert.bound);
        assert!((cert.partial_sum.real().to_f64() - 1.0).abs() < 1e-30);
    }

    #[test]
    fn fourier_term_examples() {
        let c = ctx(0.0, 1.0);
        let x0 = cx(128, 0.0, 0.0);
        let t = beta_fourier_term(&c, 1, &x0, 2).unwrap();
        assert!((to_c64(&t) - Complex64::new(1.0 / 9.0, 0.0)).norm() < 1e-30);
        let t = beta_fourier_term(&c, -1, &x0, 2).unwrap();
        assert!((to_c64(&t) - Complex64::new(1.0 / 25.0, 0.0)).norm() < 1e-30);
        for n in [2usize, 7, 30] {
            let t = beta_fourier_term(&ctx(-2.0, 0.3), 0, &cx(128, 0.3, -0.2), n).unwrap();
            assert_eq!(t, 1);
        }
    }

    #[test]
    fn minus_two_oscillating_limit() {
        // beta_n - 1 - omega^n tends to 0 with omega = (log 2 + pi i)/(log 2 - pi i).
        let c = ctx(-2.0, 0.0);
        let ln2 = std::f64::consts::LN_2;
        let pi = std::f64::consts::PI;
        let omega = Complex64::new(ln2, pi) / Complex64::new(ln2, -pi);
        // The residual is led by the k = -1 and k = 2 terms, both of modulus
        // |1 + Lambda|^{-n}.
        let cap = Complex64::new(0.0, 2.0 * pi) / Complex64::new(ln2, pi);
        let eta = 1.0 / (1.0 + cap).norm();
        let ll = c.log_lambda();
        let num = Complex::with_val(128, (Float::with_val(128, ll.real()), crate::precision::pi(128)));
        let den = Complex::with_val(128, (Float::with_val(128, ll.real()), -crate::precision::pi(128)));
        let omega_hp = Complex::with_val(128, &num / &den);
        let vals = beta_sequence(&c, &cx(128, 0.0, 0.0), 10, 60, &p()).unwrap();
        for v in &vals {
            let wn = Complex::with_val(128, rug::ops::Pow::pow(&omega_hp, v.n as u32));
            let r = abs(&(Complex::with_val(128, &v.beta - 1u32) - &wn)).to_f64();
            assert!(r <= 2.01 * eta.powi(v.n as i32), "n={}", v.n);
        }
        let last = vals.last().unwrap();
        assert!((to_c64(&last.beta) - 1.0 - omega.powi(60)).norm() < 1e-12);
    }

    #[test]
    fn quotient_limit_lambda_i() {
        let c = ctx(0.0, 1.0);
        let lim = to_c64(&quotient_limit(&c).unwrap());
        assert!((lim - Complex64::new(-1.0 / 3.0, 0.0)).norm() < 1e-15);
        let q = quotient_sequence(&c, &cx(128, 0.1, 0.0), 10, 60, &p()).unwrap();
        let last = to_c64(q.last().unwrap().value.as_ref().unwrap());
        assert!((last - lim).norm() < 1e-3);
        assert!(q.entries.iter().all(|e| !e.near_singular));
    }

    #[test]
    fn quotient_limit_lambda_minus_two() {
        let c = ctx(-2.0, 0.0);
        let ln2 = std::f64::consts::LN_2;
        let pi = std::f64::consts::PI;
        let cap = Complex64::new(0.0, 2.0 * pi) / Complex64::new(ln2, pi);
        let expected = 1.0 / (1.0 - cap);
        let lim = to_c64(&quotient_limit(&c).unwrap());
        assert!((lim - expected).norm() < 1e-14);
        let q = quotient_sequence(&c, &cx(128, 0.0, 0.0), 10, 60, &p()).unwrap();
        let last = to_c64(q.last().unwrap().value.as_ref().unwrap());
        assert!((last - expected).norm() < 1e-3);
    }

    #[test]
    fn quotient_rate_matches_envelope() {
        // lambda = e^{i pi / 3}
        let c = ctx(0.5, 3f64.sqrt() / 2.0);
        let rate = quotient_rate(&c).unwrap();
        let lim = to_c64(&quotient_limit(&c).unwrap());
        let q = quotient_sequence(&c, &cx(128, 0.1, 0.0), 10, 80, &p()).unwrap();
        let ns: Vec<usize> = q.entries.iter().map(|e| e.n).collect();
        let logs: Vec<f64> = q
            .entries
            .iter()
            .map(|e| (to_c64(e.value.as_ref().unwrap()) - lim).norm().log2())
            .collect();
        let fitted = envelope_rate(&ns, &logs, ENVELOPE_WINDOW).unwrap();
        assert!((fitted / rate - 1.0).abs() < 0.05, "{fitted} vs {rate}");
    }

    #[test]
    fn positive_lambda_has_no_limit() {
        assert!(matches!(quotient_limit(&ctx(2.0, 0.0)), Err(Error::WrongClass { .. })));
    }

    #[test]
    fn zeroth_limit_rates() {
        let r = zeroth_limit_report(&ctx(2.0, 0.0), &cx(128, 0.0, 0.0), 80, &p()).unwrap();
        assert!((r.predicted_rate - 0.1097).abs() < 1e-4);
        assert!(
            (r.fitted_rate / r.predicted_rate - 1.0).abs() < 0.1,
            "{}",
            r.fitted_rate
        );
        assert_eq!(r.limit, 1);

        let r = zeroth_limit_report(&ctx(0.0, 1.0), &cx(128, 0.0, 0.0), 80, &p()).unwrap();
        assert!((r.predicted_rate - 1.0 / 3.0).abs() < 1e-12);
        assert!((r.fitted_rate / r.predicted_rate - 1.0).abs() < 0.05);

        assert!(matches!(
            zeroth_limit_report(&ctx(-2.0, 0.0), &cx(128, 0.0, 0.0), 80, &p()),
            Err(Error::WrongClass { .. })
        ));
    }

    #[test]
    fn flagged_entries_bound_the_tail() {
        let mk = |flags: &[bool]| QuotientSeries {
            entries: flags
                .iter()
                .enumerate()
                .map(|(i, &f)| QuotientEntry {
                    n: 10 + i,
                    value: None,
                    near_singular: f,
                })
                .collect(),
            bits: 128,
        };
        assert_eq!(mk(&[false, false]).first_unflagged_tail(), Some(10));
        assert_eq!(mk(&[false, true, false]).first_unflagged_tail(), Some(12));
        assert_eq!(mk(&[false, true]).first_unflagged_tail(), None);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn two_partial_sum_paths_agree(re in -3.0f64..3.0, im in 0.2f64..3.0,
                                       x in 0.0f64..1.0, m in 0u32..4, n in 2usize..30) {
            let c = ParamContext::from_f64(re, im, 128).unwrap();
            let f = truncation_set(&c, TruncationKind::Zm, m).unwrap();
            let z = cx(128, x, 0.0);
            let a = beta_partial_sum(&c, &f, &z, n).unwrap();
            let b = beta_certificate(&c, &f, &z, n).unwrap().partial_sum;
            let d = abs(&Complex::with_val(128, &a - &b)).to_f64();
            prop_assert!(d < 1e-25 * abs(&a).to_f64().max(1.0));
        }

        #[test]
        fn beta_within_transported_certificate(re in -3.0f64..3.0, im in -3.0f64..3.0,
                                               zr in -1.0f64..1.0, zi in -0.5f64..0.5,
                                               m in 0u32..3, n in 2usize..40) {
            prop_assume!(re.abs() + im.abs() > 0.05 && (re - 1.0).abs() + im.abs() > 0.05);
            let lo = ParamContext::from_f64(re, im, 128).unwrap();
            let kind = TruncationKind::default_for(lo.class());
            let z = cx(128, zr, zi);
            let f = truncation_set(&lo, kind, m).unwrap();
            let scaled = error_certificate(&lo, &f, &z, n).unwrap().bound;
            // the beta bound is |logλ|^n smaller than the scaled one
            let extra = (n as f64 * crate::precision::log2_abs(lo.log_lambda())).min(0.0).abs() as u32;
            let bits = crate::asym::verification_bits(&lo, &z, n, &scaled, 128).unwrap() + extra;
            let c = lo.at_precision(bits).unwrap();
            let f = truncation_set(&c, kind, m).unwrap();
            let cert = beta_certificate(&c, &f, &z, n).unwrap();
            let b = beta(&c, &z, n, &PrecisionConfig::with_bits(bits).unwrap()).unwrap();
            let d = abs(&Complex::with_val(bits, &b.beta - &cert.partial_sum));
            prop_assert!(d <= cert.bound);
        }
    }
}
