//! The parameter `lambda`, its principal logarithm, the pole set
//! `a_k = 2 pi i k - log(lambda)` of the generating function, the ordering of
//! the poles by modulus, and the admissible truncation sets.

use std::fmt;

use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::precision::{abs, bits_of, pi, two_pi, MIN_BITS};

/// Position of `lambda` in the plane, decided by exact sign tests on its parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LambdaClass {
    ImPositive,
    ImNegative,
    RealPositiveNotOne,
    RealNegative,
    One,
}

impl LambdaClass {
    pub fn is_real(self) -> bool {
        matches!(
            self,
            LambdaClass::RealPositiveNotOne | LambdaClass::RealNegative | LambdaClass::One
        )
    }

    pub fn is_positive_real(self) -> bool {
        matches!(self, LambdaClass::RealPositiveNotOne | LambdaClass::One)
    }
}

impl fmt::Display for LambdaClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            LambdaClass::ImPositive => "im-positive",
            LambdaClass::ImNegative => "im-negative",
            LambdaClass::RealPositiveNotOne => "real-positive",
            LambdaClass::RealNegative => "real-negative",
            LambdaClass::One => "one",
        };
        f.write_str(s)
    }
}

/// `lambda` together with the derived quantities every other module needs.
///
/// * `log_lambda`: principal logarithm, imaginary part in `(-pi, pi]`.
/// * `xi = log(lambda) / (2 pi i)`, with `-1/2 < Re xi <= 1/2`.
/// * `cap_lambda = 2 pi i / log(lambda)`, absent for `lambda = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamContext {
    lambda: Complex,
    log_lambda: Complex,
    xi: Complex,
    cap_lambda: Option<Complex>,
    class: LambdaClass,
    bits: u32,
}

impl ParamContext {
    /// Builds the context at the precision carried by `lambda`.
    pub fn new(lambda: Complex) -> Result<Self> {
        let bits = bits_of(&lambda).max(MIN_BITS);
        Self::with_bits(lambda, bits)
    }

    pub fn from_f64(re: f64, im: f64, bits: u32) -> Result<Self> {
        if !re.is_finite() || !im.is_finite() {
            return Err(Error::InvalidArgument("lambda must be finite".into()));
        }
        Self::with_bits(Complex::with_val(bits, (re, im)), bits)
    }

    pub fn with_bits(lambda: Complex, bits: u32) -> Result<Self> {
        if bits < MIN_BITS {
            return Err(Error::InvalidPrecision(bits));
        }
        let (re, im) = (lambda.real(), lambda.imag());
        if !re.is_finite() || !im.is_finite() {
            return Err(Error::InvalidArgument("lambda must be finite".into()));
        }
        let class = if im.is_sign_positive() && !im.is_zero() {
            LambdaClass::ImPositive
        } else if im.is_sign_negative() && !im.is_zero() {
            LambdaClass::ImNegative
        } else if re.is_zero() {
            return Err(Error::ZeroLambda);
        } else if re.is_sign_negative() {
            LambdaClass::RealNegative
        } else if *re == 1 {
            LambdaClass::One
        } else {
            LambdaClass::RealPositiveNotOne
        };

        // Extend to the working precision without rounding the input; a
        // negative zero imaginary part would put log(lambda) on the wrong side
        // of the cut, so real inputs are rebuilt with +0.
        let re_bits = bits.max(re.prec());
        let im_bits = if class.is_real() { bits } else { bits.max(im.prec()) };
        let im_val = if class.is_real() {
            Float::new(im_bits)
        } else {
            Float::with_val(im_bits, im)
        };
        let lambda = Complex::with_val((re_bits, im_bits), (Float::with_val(re_bits, re), im_val));

        let log_lambda = match class {
            LambdaClass::One => Complex::new(bits),
            LambdaClass::RealPositiveNotOne => Complex::with_val(bits, (lambda.real().clone().ln(), 0)),
            LambdaClass::RealNegative => {
                let m = Float::with_val(bits, -lambda.real());
                Complex::with_val(bits, (m.ln(), pi(bits)))
            }
            _ => Complex::with_val(bits, lambda.ln_ref()),
        };

        let tp = two_pi(bits);
        let xi = Complex::with_val(
            bits,
            (
                Float::with_val(bits, log_lambda.imag() / &tp),
                -Float::with_val(bits, log_lambda.real() / &tp),
            ),
        );
        let cap_lambda = if class == LambdaClass::One {
            None
        } else {
            let num = Complex::with_val(bits, (0, &tp));
            Some(Complex::with_val(bits, num / &log_lambda))
        };

        Ok(ParamContext {
            lambda,
            log_lambda,
            xi,
            cap_lambda,
            class,
            bits,
        })
    }

    /// Same `lambda`, re-derived at another precision.
    pub fn at_precision(&self, bits: u32) -> Result<Self> {
        if bits == self.bits {
            return Ok(self.clone());
        }
        Self::with_bits(self.lambda.clone(), bits)
    }

    pub fn lambda(&self) -> &Complex {
        &self.lambda
    }

    pub fn log_lambda(&self) -> &Complex {
        &self.log_lambda
    }

    pub fn xi(&self) -> &Complex {
        &self.xi
    }

    pub fn cap_lambda(&self) -> Option<&Complex> {
        self.cap_lambda.as_ref()
    }

    pub fn class(&self) -> LambdaClass {
        self.class
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Sign `epsilon` used by the successive-quotient limit: the sign of
    /// `Im lambda` off the real axis, `+1` on the negative axis, undefined on
    /// the positive axis.
    pub fn epsilon(&self) -> Option<i32> {
        match self.class {
            LambdaClass::ImPositive | LambdaClass::RealNegative => Some(1),
            LambdaClass::ImNegative => Some(-1),
            _ => None,
        }
    }

    /// The context for `-lambda`.
    pub fn negated(&self) -> Result<Self> {
        Self::with_bits(Complex::with_val(self.bits, -&self.lambda), self.bits)
    }

    /// `lambda^w = exp(w log lambda)` on the principal branch.
    pub fn lambda_pow(&self, w: &Complex) -> Complex {
        Complex::with_val(self.bits, w * &self.log_lambda).exp()
    }

    /// Index set `Z`: every integer, or every nonzero integer when `lambda = 1`.
    pub fn index_allowed(&self, k: i64) -> bool {
        !(self.class == LambdaClass::One && k == 0)
    }
}

/// A pole `a_k = 2 pi i k - log(lambda)` in rectangular and polar form.
/// `angle` is measured in turns, `value = modulus * exp(2 pi i angle)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pole {
    pub k: i64,
    pub value: Complex,
    pub modulus: Float,
    pub angle: Float,
}

/// The pole `a_k`.
pub fn pole(ctx: &ParamContext, k: i64) -> Result<Pole> {
    if !ctx.index_allowed(k) {
        return Err(Error::ExcludedPole { k });
    }
    let bits = ctx.bits();
    let re = Float::with_val(bits, -ctx.log_lambda().real());
    // For negative lambda Im log = pi exactly, so the imaginary part is an odd
    // multiple of the same rounded pi and conjugate pairs stay exact.
    let im = if ctx.class() == LambdaClass::RealNegative {
        pi(bits) * Float::with_val(bits, 2 * k - 1)
    } else {
        let t = two_pi(bits) * Float::with_val(bits, k);
        t - ctx.log_lambda().imag()
    };
    let value = Complex::with_val(bits, (re, im));
    let modulus = abs(&value);
    let mut angle = Float::with_val(bits, value.arg_ref()) / two_pi(bits);
    if angle.is_sign_negative() {
        angle += 1u32;
    }
    if angle >= 1u32 {
        angle -= 1u32;
    }
    Ok(Pole {
        k,
        value,
        modulus,
        angle,
    })
}

/// Indices of the first `count` poles in order of nondecreasing modulus.
///
/// Off the real axis the chain is strict (`0, 1, -1, 2, -2, ...` when
/// `Im lambda > 0`, mirrored when `Im lambda < 0`). On the positive axis the
/// pairs `{k, -k}` tie and are listed as `(k, -k)`; on the negative axis the
/// pairs `{-k, k+1}` tie and are listed as `(-k, k+1)`.
pub fn chain_indices(class: LambdaClass, count: usize) -> Vec<i64> {
    let mut out = Vec::with_capacity(count);
    if class != LambdaClass::One {
        out.push(0);
    }
    let mut k = 1i64;
    while out.len() < count {
        let (first, second) = match class {
            LambdaClass::ImNegative => (-k, k),
            _ => (k, -k),
        };
        out.push(first);
        if out.len() < count {
            out.push(second);
        }
        k += 1;
    }
    out.truncate(count);
    out
}

pub fn pole_chain(ctx: &ParamContext, count: usize) -> Result<Vec<Pole>> {
    if count == 0 {
        return Err(Error::InvalidArgument("pole chain count must be >= 1".into()));
    }
    chain_indices(ctx.class(), count)
        .into_iter()
        .map(|k| pole(ctx, k))
        .collect()
}

/// Groups of equal-modulus indices along the chain: singletons off the real
/// axis, conjugate pairs on it (plus the lone `a_0` for positive `lambda`).
pub fn chain_groups(class: LambdaClass, groups: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::with_capacity(groups);
    match class {
        LambdaClass::ImPositive | LambdaClass::ImNegative => {
            let idx = chain_indices(class, groups);
            out.extend(idx.into_iter().map(|k| vec![k]));
        }
        LambdaClass::RealPositiveNotOne | LambdaClass::One => {
            if class == LambdaClass::RealPositiveNotOne {
                out.push(vec![0]);
            }
            let mut k = 1;
            while out.len() < groups {
                out.push(vec![k, -k]);
                k += 1;
            }
        }
        LambdaClass::RealNegative => {
            for k in 0..groups as i64 {
                out.push(vec![-k, k + 1]);
            }
        }
    }
    out.truncate(groups);
    out
}

/// Shape of an admissible truncation set: `Z_m = {|k| <= m}`, optionally
/// extended by `m+1` (`ZmPlus`) or `-(m+1)` (`ZmMinus`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TruncationKind {
    Zm,
    ZmPlus,
    ZmMinus,
}

impl TruncationKind {
    pub fn admissible(self, class: LambdaClass) -> bool {
        use LambdaClass::*;
        use TruncationKind::*;
        matches!(
            (class, self),
            (ImPositive, Zm)
                | (ImPositive, ZmPlus)
                | (ImNegative, Zm)
                | (ImNegative, ZmMinus)
                | (RealPositiveNotOne, Zm)
                | (One, Zm)
                | (RealNegative, ZmPlus)
        )
    }

    /// The plain choice for a class: `ZmPlus` on the negative axis, `Zm`
    /// everywhere else.
    pub fn default_for(class: LambdaClass) -> Self {
        if class == LambdaClass::RealNegative {
            TruncationKind::ZmPlus
        } else {
            TruncationKind::Zm
        }
    }
}

impl fmt::Display for TruncationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TruncationKind::Zm => "Zm",
            TruncationKind::ZmPlus => "Zm+",
            TruncationKind::ZmMinus => "Zm-",
        })
    }
}

impl std::str::FromStr for TruncationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Zm" | "zm" | "plain" => Ok(TruncationKind::Zm),
            "Zm+" | "zm+" | "plus" => Ok(TruncationKind::ZmPlus),
            "Zm-" | "zm-" | "minus" => Ok(TruncationKind::ZmMinus),
            _ => Err(Error::InvalidArgument(format!(
                "unknown truncation kind '{s}' (expected Zm, Zm+ or Zm-)"
            ))),
        }
    }
}

/// A finite pole subset `F` whose largest member is strictly smaller in
/// modulus than the smallest excluded pole `mu`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncationSet {
    pub kind: TruncationKind,
    pub m: u32,
    /// Member indices in chain order.
    pub indices: Vec<i64>,
    pub members: Vec<Pole>,
    pub mu: Float,
    pub max_member_modulus: Float,
}

impl TruncationSet {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, k: i64) -> bool {
        self.indices.contains(&k)
    }

    /// Largest `|k|` among the members.
    pub fn max_abs_index(&self) -> i64 {
        self.indices.iter().map(|k| k.abs()).max().unwrap_or(0)
    }
}

pub fn truncation_set(ctx: &ParamContext, kind: TruncationKind, m: u32) -> Result<TruncationSet> {
    let class = ctx.class();
    if !kind.admissible(class) {
        return Err(Error::InadmissibleKind { kind, class });
    }
    if class == LambdaClass::One && m == 0 {
        return Err(Error::EmptySet);
    }
    let m_i = i64::from(m);
    let mut set: Vec<i64> = (-m_i..=m_i).filter(|&k| ctx.index_allowed(k)).collect();
    match kind {
        TruncationKind::Zm => {}
        TruncationKind::ZmPlus => set.push(m_i + 1),
        TruncationKind::ZmMinus => set.push(-(m_i + 1)),
    }
    // Every admissible set is a prefix of the chain; report it in chain order.
    let indices: Vec<i64> = chain_indices(class, set.len() + 2)
        .into_iter()
        .filter(|k| set.contains(k))
        .collect();
    debug_assert_eq!(indices.len(), set.len());

    let members = indices.iter().map(|&k| pole(ctx, k)).collect::<Result<Vec<_>>>()?;
    let max_member_modulus = members
        .iter()
        .map(|p| p.modulus.clone())
        .max_by(|a, b| a.partial_cmp(b).unwrap())
        .expect("admissible sets are nonempty");

    let mut mu: Option<Float> = None;
    for k in [m_i + 1, -(m_i + 1), m_i + 2, -(m_i + 2)] {
        if set.contains(&k) {
            continue;
        }
        let p = pole(ctx, k)?;
        mu = Some(match mu {
            Some(cur) if cur <= p.modulus => cur,
            _ => p.modulus,
        });
    }
    let mu = mu.expect("excluded candidates exist");
    debug_assert!(max_member_modulus < mu);

    Ok(TruncationSet {
        kind,
        m,
        indices,
        members,
        mu,
        max_member_modulus,
    })
}
