//! Real `lambda`: conjugate pole pairs, their cosine contributions, rational
//! pair angles, the exceptional sets where the leading cosine can vanish, and
//! empirical checks of the quotient sandwiches.

use std::ops::RangeInclusive;

use num_integer::Integer;
use num_rational::Ratio;
use rug::ops::Pow;
use rug::{Complex, Float};

use crate::asym::{rescaled_forms, LimitForm};
use crate::error::{Error, Result};
use crate::fit::envelope_constant;
use crate::normalized::{beta_sequence, quotient_sequence, QuotientSeries};
use crate::params::{pole, LambdaClass, ParamContext};
use crate::precision::{abs, log2_abs, log2_abs_float, pi, two_pi, PrecisionConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaSign {
    Positive,
    Negative,
}

/// Two conjugate poles of equal modulus.
///
/// For `lambda > 0` the pair is `{k, -k}` with `k >= 1`; for `lambda < 0` it
/// is `{-k, k+1}` with `k >= 0`. `rho` and `alpha` are the modulus and angle
/// (in turns) of `a_k`, resp. `a_{k+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolePair {
    pub sign: LambdaSign,
    pub k: i64,
    pub rho: Float,
    pub alpha: Float,
}

impl PolePair {
    /// Indices of the two member poles.
    pub fn indices(&self) -> (i64, i64) {
        match self.sign {
            LambdaSign::Positive => (self.k, -self.k),
            LambdaSign::Negative => (-self.k, self.k + 1),
        }
    }
}

fn lambda_sign(ctx: &ParamContext) -> Result<LambdaSign> {
    match ctx.class() {
        LambdaClass::RealPositiveNotOne | LambdaClass::One => Ok(LambdaSign::Positive),
        LambdaClass::RealNegative => Ok(LambdaSign::Negative),
        class => Err(Error::WrongClass {
            class,
            reason: "conjugate pole pairs need real lambda",
        }),
    }
}

pub fn pole_pair(ctx: &ParamContext, k: i64) -> Result<PolePair> {
    let sign = lambda_sign(ctx)?;
    let lead = match sign {
        LambdaSign::Positive if k >= 1 => k,
        LambdaSign::Negative if k >= 0 => k + 1,
        _ => {
            return Err(Error::InvalidArgument(format!(
                "pair index {k} out of range for {} lambda",
                ctx.class()
            )))
        }
    };
    let p = pole(ctx, lead)?;
    Ok(PolePair {
        sign,
        k,
        rho: p.modulus,
        alpha: p.angle,
    })
}

/// Contribution of a pair to `b_n(z)`, with the sign of the pole expansion
/// `b_n(z) = -sum e^{az}/a^n`:
///
/// * `lambda > 0`: `-2 lambda^{-z} rho^{-n} cos(2 pi (k z - n alpha))`
/// * `lambda < 0`: `-2 (-lambda)^{-z} rho^{-n} cos(pi ((2k+1) z - 2 n alpha))`
pub fn pair_term(ctx: &ParamContext, pair: &PolePair, z: &Complex, n: usize) -> Result<Complex> {
    let sign = lambda_sign(ctx)?;
    if sign != pair.sign {
        return Err(Error::InvalidArgument("pair does not match the sign of lambda".into()));
    }
    let bits = ctx.bits();
    let z = Complex::with_val(bits, z);
    // log of the positive base lambda resp. -lambda
    let log_base = Float::with_val(bits, ctx.log_lambda().real());
    let base_pow = Complex::with_val(bits, &z * &log_base);
    let base_pow = (-base_pow).exp();
    let rho_n = Float::with_val(bits, (&pair.rho).pow(n as u32));
    let na = Float::with_val(bits, &pair.alpha * n as u32);
    let arg = match sign {
        LambdaSign::Positive => {
            let kz = Complex::with_val(bits, &z * pair.k);
            Complex::with_val(bits, kz - &na) * two_pi(bits)
        }
        LambdaSign::Negative => {
            let kz = Complex::with_val(bits, &z * (2 * pair.k + 1));
            Complex::with_val(bits, kz - na * 2u32) * pi(bits)
        }
    };
    let cos = arg.cos();
    Ok(-(base_pow * cos) * 2u32 / rho_n)
}

/// Rational classification of an angle in turns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AngleKind {
    /// `alpha ~ a/d` with `gcd(a, d) = 1`, `0 <= a < d`.
    Rational { a: i64, d: i64 },
    /// No convergent with denominator up to the bound was within tolerance.
    IrrationalWithinBound,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AngleClass {
    pub kind: AngleKind,
    pub exceptional: Option<Lattice>,
}

/// Continued-fraction convergents of `alpha` up to `max_denominator`; the
/// first one within `tolerance` decides the class.
pub fn classify_angle(alpha: f64, max_denominator: i64, tolerance: f64) -> Result<AngleClass> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::InvalidArgument(format!("angle {alpha} is not in [0, 1)")));
    }
    if max_denominator < 1 || !(tolerance >= 0.0) {
        return Err(Error::InvalidArgument(
            "max denominator must be positive and tolerance nonnegative".into(),
        ));
    }
    let (mut h1, mut h2) = (1i64, 0i64);
    let (mut k1, mut k2) = (0i64, 1i64);
    let mut x = alpha;
    for _ in 0..64 {
        let a = x.floor();
        if a > i64::MAX as f64 / 4.0 {
            break;
        }
        let a = a as i64;
        let (Some(h), Some(k)) = (
            a.checked_mul(h1).and_then(|v| v.checked_add(h2)),
            a.checked_mul(k1).and_then(|v| v.checked_add(k2)),
        ) else {
            break;
        };
        if k > max_denominator {
            break;
        }
        if (alpha - h as f64 / k as f64).abs() <= tolerance {
            let a = h.rem_euclid(k);
            return Ok(AngleClass {
                kind: AngleKind::Rational { a, d: k },
                exceptional: Some(exceptional_set(a, k)?),
            });
        }
        (h2, h1) = (h1, h);
        (k2, k1) = (k1, k);
        let frac = x - a as f64;
        if frac <= f64::EPSILON {
            break;
        }
        x = 1.0 / frac;
    }
    Ok(AngleClass {
        kind: AngleKind::IrrationalWithinBound,
        exceptional: None,
    })
}

/// The affine lattice `offset + spacing * Z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lattice {
    pub offset: Ratio<i64>,
    pub spacing: Ratio<i64>,
}

impl Lattice {
    pub fn contains(&self, x: Ratio<i64>) -> bool {
        ((x - self.offset) / self.spacing).is_integer()
    }

    /// Lattice points in `[0, 1)`, increasing.
    pub fn points_in_unit(&self) -> Vec<Ratio<i64>> {
        let mut p = self.offset - (self.offset / self.spacing).floor() * self.spacing;
        let one = Ratio::from_integer(1);
        let mut out = Vec::new();
        while p < one {
            out.push(p);
            p += self.spacing;
        }
        out
    }

    /// Distance from `x` to the nearest lattice point.
    pub fn distance(&self, x: f64) -> f64 {
        let off = *self.offset.numer() as f64 / *self.offset.denom() as f64;
        let sp = *self.spacing.numer() as f64 / *self.spacing.denom() as f64;
        let t = (x - off) / sp;
        (t - t.round()).abs() * sp
    }
}

/// Where `cos 2 pi (x - n a/d)` vanishes for some `n`, by `gcd(4a, d)`:
/// `1: 1/(4d) + 1/(2d) Z`, `2: 1/(2d) + 1/d Z`, `4: 1/d Z`.
pub fn exceptional_set(a: i64, d: i64) -> Result<Lattice> {
    if d < 1 {
        return Err(Error::InvalidArgument(format!("denominator {d} must be positive")));
    }
    if a.gcd(&d) != 1 {
        return Err(Error::NotReduced { a, d });
    }
    Ok(exceptional_lattices(d)[trichotomy_index((4 * a).gcd(&d))])
}

fn trichotomy_index(g: i64) -> usize {
    match g {
        1 => 0,
        2 => 1,
        _ => 2,
    }
}

/// The three candidate lattices for denominator `d`, in the order
/// `gcd(4a, d) = 1, 2, 4`.
pub fn exceptional_lattices(d: i64) -> [Lattice; 3] {
    let r = |n: i64, m: i64| Ratio::new(n, m);
    [
        Lattice {
            offset: r(1, 4 * d),
            spacing: r(1, 2 * d),
        },
        Lattice {
            offset: r(1, 2 * d),
            spacing: r(1, d),
        },
        Lattice {
            offset: r(0, 1),
            spacing: r(1, d),
        },
    ]
}

/// True when the three lattices for `d` are pairwise disjoint and together
/// cover `(1/(4d)) Z`, checked on `[0, 1)`.
pub fn lattices_partition(d: i64) -> bool {
    let mut seen = vec![0u8; 4 * d as usize];
    for lat in exceptional_lattices(d) {
        for p in lat.points_in_unit() {
            let idx = p * (4 * d);
            if !idx.is_integer() {
                return false;
            }
            seen[idx.to_integer() as usize] += 1;
        }
    }
    seen.iter().all(|&c| c == 1)
}

pub fn dist_to_exceptional(x: f64, lat: &Lattice) -> f64 {
    lat.distance(x)
}

/// `lambda = -e^{pi cot(pi k / d)}`, for which
/// `omega = (log|lambda| + pi i)/(log|lambda| - pi i) = e^{2 pi i k / d}`.
pub fn periodic_lambda(k: i64, d: i64, bits: u32) -> Result<Complex> {
    if d < 1 || k.rem_euclid(d) == 0 {
        return Err(Error::DomainError(format!("cot(pi {k}/{d}) is undefined")));
    }
    let t = Float::with_val(bits, pi(bits) * k) / d;
    let cot = t.cot();
    let v = Float::with_val(bits, pi(bits) * &cot).exp();
    Ok(Complex::with_val(bits, (-v, 0)))
}

/// Positive `lambda` whose pair angle `arg(1 - Lambda)` equals `a/d` turns:
/// `lambda = exp(-2 pi cot(2 pi a / d))`. Requires `a/d` in `(0, 1/4)` or
/// `(3/4, 1)`, the range of that angle for `lambda > 0`.
pub fn lambda_with_pair_angle(a: i64, d: i64, bits: u32) -> Result<Complex> {
    if d < 1 {
        return Err(Error::DomainError(format!("denominator {d} must be positive")));
    }
    let r = Ratio::new(a.rem_euclid(d), d);
    let q = Ratio::new(1, 4);
    if !(r > Ratio::from_integer(0) && r < q) && !(r > Ratio::new(3, 4)) {
        return Err(Error::DomainError(format!("no positive lambda has pair angle {a}/{d}")));
    }
    let t = two_pi(bits) * Float::with_val(bits, *r.numer()) / *r.denom();
    let v = -(t.cot() * two_pi(bits));
    Ok(Complex::with_val(bits, (v.exp(), 0)))
}

/// The unit number whose powers drive the leading oscillation:
/// `(1 - Lambda)/|1 - Lambda|` for `lambda > 0`, `1/(1 - Lambda)` for
/// `lambda < 0`.
pub fn omega(ctx: &ParamContext) -> Result<Complex> {
    let sign = lambda_sign(ctx)?;
    let cap = ctx.cap_lambda().ok_or(Error::UnitLambda)?;
    let bits = ctx.bits();
    let one_minus = Complex::with_val(bits, 1u32 - cap);
    Ok(match sign {
        LambdaSign::Positive => {
            let m = abs(&one_minus);
            one_minus / m
        }
        LambdaSign::Negative => one_minus.recip(),
    })
}

/// Angle of [`omega`] in turns, in `[0, 1)`.
pub fn omega_angle(ctx: &ParamContext) -> Result<f64> {
    let w = omega(ctx)?;
    let bits = ctx.bits();
    let mut t = Float::with_val(bits, w.arg_ref()) / two_pi(bits);
    if t.is_sign_negative() {
        t += 1u32;
    }
    let t = t.to_f64();
    Ok(if t >= 1.0 { 0.0 } else { t })
}

/// `rho = |1 - Lambda|`, `mu_q = |1 - 2 Lambda|`, `eta = rho / mu_q` for
/// `lambda > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuotientBoundInputs {
    pub rho: f64,
    pub mu_q: f64,
    pub eta: f64,
}

impl QuotientBoundInputs {
    pub fn new(ctx: &ParamContext) -> Result<Self> {
        if ctx.class() != LambdaClass::RealPositiveNotOne {
            return Err(Error::WrongClass {
                class: ctx.class(),
                reason: "the real sandwich needs lambda in (0, inf) minus {1}",
            });
        }
        let cap = ctx.cap_lambda().ok_or(Error::UnitLambda)?;
        let bits = ctx.bits();
        let rho = abs(&Complex::with_val(bits, 1u32 - cap)).to_f64();
        let two = Complex::with_val(bits, cap * 2u32);
        let mu_q = abs(&Complex::with_val(bits, 1u32 - &two)).to_f64();
        Ok(QuotientBoundInputs {
            rho,
            mu_q,
            eta: rho / mu_q,
        })
    }
}

/// One row of a sandwich check.
#[derive(Debug, Clone, PartialEq)]
pub struct SandwichRow {
    pub n: usize,
    pub modulus: f64,
    pub lower: f64,
    pub upper: f64,
    pub inside: bool,
    /// Distance to the nearer bound; negative outside.
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SandwichReport {
    pub inputs: QuotientBoundInputs,
    pub c_fitted: f64,
    pub fit_range: RangeInclusive<usize>,
    pub rows: Vec<SandwichRow>,
    /// Degrees whose quotient was flagged near-singular and skipped.
    pub skipped: Vec<usize>,
    pub all_inside: bool,
}

/// Leading-order quotient `cos 2 pi (z - (n+1) alpha) / (rho cos 2 pi (z - n alpha))`.
fn leading_quotient(z: &Complex, alpha: &Float, rho: f64, n: usize, bits: u32) -> f64 {
    let tp = two_pi(bits);
    let c = |m: usize| {
        let na = Float::with_val(bits, alpha * m as u32);
        let arg = Complex::with_val(bits, z - &na) * &tp;
        abs(&arg.cos())
    };
    Float::with_val(bits, c(n + 1) / c(n)).to_f64() / rho
}

fn quotient_moduli(series: &QuotientSeries) -> (Vec<(usize, f64)>, Vec<usize>) {
    let mut ok = Vec::new();
    let mut skipped = Vec::new();
    for e in &series.entries {
        match &e.value {
            Some(v) => ok.push((e.n, abs(v).to_f64())),
            None => skipped.push(e.n),
        }
    }
    (ok, skipped)
}

fn check_ranges(fit: &RangeInclusive<usize>, check: &RangeInclusive<usize>) -> Result<()> {
    if fit.is_empty() || check.is_empty() || *fit.start() < 2 || *check.start() < 2 {
        return Err(Error::InvalidArgument(
            "fit and check ranges must be nonempty and start at 2 or later".into(),
        ));
    }
    Ok(())
}

/// `rho^{-1} |tanh 2 pi y| - c eta^n <= |q_n| <= rho^{-1} |coth 2 pi y| + c eta^n`
/// for `lambda > 0` and `y = Im z != 0`. `c` is the largest
/// `| |q_n| - |q_lead,n| | / eta^n` over `fit`; the check runs over `check`.
pub fn quotient_bounds_offreal(
    ctx: &ParamContext,
    z: &Complex,
    fit: RangeInclusive<usize>,
    check: RangeInclusive<usize>,
    prec: &PrecisionConfig,
) -> Result<SandwichReport> {
    let inputs = QuotientBoundInputs::new(ctx)?;
    check_ranges(&fit, &check)?;
    let y = z.imag().to_f64();
    if y == 0.0 {
        return Err(Error::InvalidArgument("Im z must be nonzero".into()));
    }
    let lo = *fit.start().min(check.start());
    let hi = *fit.end().max(check.end());
    let series = quotient_sequence(ctx, z, lo, hi, prec)?;
    let bits = series.bits;
    let alpha = pole_pair(ctx, 1)?.alpha;
    let alpha = omega_alpha(ctx, &alpha, bits)?;
    let (moduli, skipped) = quotient_moduli(&series);
    let ty = (2.0 * std::f64::consts::PI * y).tanh().abs();
    let lower0 = ty / inputs.rho;
    let upper0 = 1.0 / (ty * inputs.rho);
    let zc = Complex::with_val(bits, z);

    let fit_ns: Vec<usize> = moduli.iter().filter(|(n, _)| fit.contains(n)).map(|p| p.0).collect();
    let fit_logs: Vec<f64> = moduli
        .iter()
        .filter(|(n, _)| fit.contains(n))
        .map(|&(n, q)| (q - leading_quotient(&zc, &alpha, inputs.rho, n, bits)).abs().log2())
        .collect();
    let c = envelope_constant(&fit_ns, &fit_logs, inputs.eta).unwrap_or(0.0);

    let rows: Vec<SandwichRow> = moduli
        .iter()
        .filter(|(n, _)| check.contains(n))
        .map(|&(n, q)| {
            let slack = c * inputs.eta.powi(n as i32);
            sandwich_row(n, q, lower0 - slack, upper0 + slack)
        })
        .collect();
    let all_inside = rows.iter().all(|r| r.inside);
    Ok(SandwichReport {
        inputs,
        c_fitted: c,
        fit_range: fit,
        rows,
        skipped,
        all_inside,
    })
}

fn sandwich_row(n: usize, q: f64, lower: f64, upper: f64) -> SandwichRow {
    SandwichRow {
        n,
        modulus: q,
        lower,
        upper,
        inside: lower <= q && q <= upper,
        margin: (q - lower).min(upper - q),
    }
}

/// The pair angle in the `(1 - Lambda)` convention: `beta_n - 1` is led by
/// `2 rho^{-n} cos 2 pi (z - n alpha)` with `1 - Lambda = rho e^{2 pi i alpha}`.
fn omega_alpha(ctx: &ParamContext, _pole_alpha: &Float, bits: u32) -> Result<Float> {
    Ok(Float::with_val(bits, omega_angle(ctx)?))
}

/// Result of the rational-angle sandwich check.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalSandwichReport {
    pub a: i64,
    pub d: i64,
    pub lattice: Lattice,
    /// `dist(Re z, E(alpha))`.
    pub delta_actual: f64,
    pub delta: f64,
    /// `cos 2 pi (x - n alpha)` repeats with period `d` in `n`.
    pub periodic: bool,
    pub sandwich: SandwichReport,
}

/// `rho^{-1} (4 delta / cosh 2 pi y - c eta^n) <= |q_n| <= rho^{-1} (cosh 2 pi y / (4 delta) + c eta^n)`
/// for `lambda > 0` with a rational pair angle and `dist(Re z, E) >= delta`.
#[allow(clippy::too_many_arguments)]
pub fn quotient_bounds_rational(
    ctx: &ParamContext,
    z: &Complex,
    delta: f64,
    fit: RangeInclusive<usize>,
    check: RangeInclusive<usize>,
    max_denominator: i64,
    tolerance: f64,
    prec: &PrecisionConfig,
) -> Result<RationalSandwichReport> {
    let inputs = QuotientBoundInputs::new(ctx)?;
    check_ranges(&fit, &check)?;
    if !(delta > 0.0) {
        return Err(Error::InvalidArgument("delta must be positive".into()));
    }
    let alpha = omega_angle(ctx)?;
    let class = classify_angle(alpha, max_denominator, tolerance)?;
    let (AngleKind::Rational { a, d }, Some(lattice)) = (class.kind, class.exceptional) else {
        return Err(Error::NotRationalAngle { alpha });
    };
    let x = z.real().to_f64();
    let y = z.imag().to_f64();
    let delta_actual = lattice.distance(x);
    if delta_actual < delta {
        return Err(Error::TooCloseToExceptional {
            actual: delta_actual,
            requested: delta,
        });
    }

    let periodic = verify_period(x, a, d, alpha);

    let lo = *fit.start().min(check.start());
    let hi = *fit.end().max(check.end());
    let series = quotient_sequence(ctx, z, lo, hi, prec)?;
    let bits = series.bits;
    let (moduli, skipped) = quotient_moduli(&series);
    let zc = Complex::with_val(bits, z);
    let alpha_f = Float::with_val(bits, alpha);
    let ch = (2.0 * std::f64::consts::PI * y).cosh();
    let lower0 = 4.0 * delta / ch;
    let upper0 = ch / (4.0 * delta);

    let fit_ns: Vec<usize> = moduli.iter().filter(|(n, _)| fit.contains(n)).map(|p| p.0).collect();
    let fit_logs: Vec<f64> = moduli
        .iter()
        .filter(|(n, _)| fit.contains(n))
        .map(|&(n, q)| {
            let lead = leading_quotient(&zc, &alpha_f, inputs.rho, n, bits);
            (inputs.rho * (q - lead).abs()).log2()
        })
        .collect();
    let c = envelope_constant(&fit_ns, &fit_logs, inputs.eta).unwrap_or(0.0);
    let rows: Vec<SandwichRow> = moduli
        .iter()
        .filter(|(n, _)| check.contains(n))
        .map(|&(n, q)| {
            let slack = c * inputs.eta.powi(n as i32);
            sandwich_row(n, q, (lower0 - slack) / inputs.rho, (upper0 + slack) / inputs.rho)
        })
        .collect();
    let all_inside = rows.iter().all(|r| r.inside);
    Ok(RationalSandwichReport {
        a,
        d,
        lattice,
        delta_actual,
        delta,
        periodic,
        sandwich: SandwichReport {
            inputs,
            c_fitted: c,
            fit_range: fit,
            rows,
            skipped,
            all_inside,
        },
    })
}

/// Checks `n a/d` mod 1 repeats with period `d` exactly, and that the cosine
/// built from the floating angle follows it over two periods.
fn verify_period(x: f64, a: i64, d: i64, alpha: f64) -> bool {
    let frac = |n: i64| {
        let r = Ratio::new(n * a, d);
        r - r.floor()
    };
    let exact = (0..2 * d).all(|n| frac(n + d) == frac(n));
    let tp = 2.0 * std::f64::consts::PI;
    let numeric = (0..2 * d).all(|n| {
        let c0 = (tp * (x - n as f64 * alpha)).cos();
        let c1 = (tp * (x - (n + d) as f64 * alpha)).cos();
        (c0 - c1).abs() < 1e-9
    });
    exact && numeric
}

/// `|beta_n - 1 - omega^n e^{2 pi i z}|` for `lambda < 0`, which decays like
/// `eta^n` with `eta = 1/|1 + Lambda|`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualSeries {
    pub ns: Vec<usize>,
    pub residuals: Vec<Float>,
    pub eta: f64,
}

impl ResidualSeries {
    /// Smallest `C` with `r_n <= C eta^n` over `fit`, and the degrees in
    /// `check` where the envelope fails.
    pub fn envelope_check(&self, fit: RangeInclusive<usize>, check: RangeInclusive<usize>) -> (f64, Vec<usize>) {
        let (ns, logs): (Vec<usize>, Vec<f64>) = self
            .ns
            .iter()
            .zip(&self.residuals)
            .filter(|(n, _)| fit.contains(*n))
            .map(|(n, r)| (*n, log2_abs_float(r)))
            .unzip();
        let c = envelope_constant(&ns, &logs, self.eta).unwrap_or(0.0);
        let lc = c.log2();
        let le = self.eta.log2();
        let violations = self
            .ns
            .iter()
            .zip(&self.residuals)
            .filter(|(n, _)| check.contains(*n))
            .filter(|(n, r)| log2_abs_float(r) > lc + **n as f64 * le)
            .map(|(n, _)| *n)
            .collect();
        (c, violations)
    }
}

pub fn negative_residuals(
    ctx: &ParamContext,
    z: &Complex,
    n_from: usize,
    n_to: usize,
    prec: &PrecisionConfig,
) -> Result<ResidualSeries> {
    if lambda_sign(ctx)? != LambdaSign::Negative {
        return Err(Error::WrongClass {
            class: ctx.class(),
            reason: "the oscillating residual is defined for lambda < 0",
        });
    }
    let cap = ctx.cap_lambda().ok_or(Error::UnitLambda)?;
    let eta = 1.0 / abs(&Complex::with_val(ctx.bits(), 1u32 + cap)).to_f64();
    let log2e = std::f64::consts::LOG2_E;
    let z_abs = abs(&Complex::with_val(ctx.bits(), z)).to_f64();
    let need = n_to as f64 * -eta.log2() + 4.0 * std::f64::consts::PI * z_abs * log2e + 96.0;
    let bits = prec.working_bits.max(need.ceil() as u32);
    let hi = ctx.at_precision(bits)?;
    let values = beta_sequence(
        &hi,
        z,
        n_from,
        n_to,
        &PrecisionConfig {
            working_bits: bits,
            ..*prec
        },
    )?;
    let w = omega(&hi)?;
    let zc = Complex::with_val(bits, z);
    let phase = Complex::with_val(bits, crate::precision::two_pi_i(bits) * &zc).exp();
    let mut ns = Vec::with_capacity(values.len());
    let mut residuals = Vec::with_capacity(values.len());
    for v in values {
        let wn = Complex::with_val(bits, (&w).pow(v.n as u32));
        let lead = Complex::with_val(bits, &wn * &phase) + 1u32;
        residuals.push(abs(&Complex::with_val(bits, &v.beta - &lead)));
        ns.push(v.n);
    }
    Ok(ResidualSeries { ns, residuals, eta })
}

/// `lambda = -1` forms: `(-1)^{n-1} pi^{2n} / (2 (2n)!) B_{2n}(z; -1) -> cos pi z`
/// and the odd-degree analogue towards `sin pi z`. The deviation decays by
/// `1/3` per degree.
pub fn minus_one_forms(z: &Complex, from: usize, to: usize, prec: &PrecisionConfig) -> Result<Vec<LimitForm>> {
    rescaled_forms(-1, z, from, to, prec)
}

/// Log-magnitude of `b - 1` helper for callers that tabulate residuals.
pub fn log2_distance_to_one(v: &Complex) -> f64 {
    log2_abs(&Complex::with_val(v.prec().0, v - 1u32))
}
