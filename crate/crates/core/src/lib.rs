//! Apostol-Bernoulli and Apostol-Euler polynomials in arbitrary precision.
//!
//! Values are handled in factorial-scaled form `b_n(z; lambda) = B_n(z; lambda) / n!`.
//! The crate computes them exactly by recurrence, approximates them by
//! truncated sums over the poles `a_k = 2 pi i k - log lambda` of the
//! generating function with a rigorous error bound, and studies the
//! normalized sequences, successive quotients and oscillations that follow
//! from the pole ordering.
//!
//! ```
//! use apostol_core::{ab_poly_scaled, cx, ParamContext, PrecisionConfig};
//!
//! let ctx = ParamContext::from_f64(1.0, 0.0, 128).unwrap();
//! let series = ab_poly_scaled(&ctx, &cx(128, 0.5, 0.0), 2, &PrecisionConfig::default()).unwrap();
//! let b2 = series.values[2].real().to_f64();
//! assert!((b2 + 1.0 / 24.0).abs() < 1e-30);
//! ```

pub mod asym;
pub mod error;
pub mod euler;
pub mod exact;
pub mod fit;
pub mod normalized;
pub mod oscillation;
pub mod params;
pub mod precision;
pub mod quadrature;

pub use asym::{
    dilcher_form, dilcher_series, error_certificate, error_table, error_table_for, hurwitz_zeta_upper, partial_sum,
    tail_constant, verification_bits, ApproxCertificate, ErrorRow, LimitForm,
};
pub use error::{Error, Result};
pub use euler::{
    ae_certificate, ae_fourier_partial, ae_poly_scaled, duplication_check, epsilon_n, epsilon_quotients,
    epsilon_sequence, euler_pole, DuplicationResidual, EpsilonValue, EulerContext, PoleSetTag,
};
pub use exact::{
    ab_numbers_scaled, ab_poly_direct, ab_poly_lambda_zero, ab_poly_scaled, fourier_coefficient_closed_form,
    fourier_coefficient_quadrature, ScaledSeries, ScaledValue,
};
pub use normalized::{
    beta, beta_certificate, beta_partial_sum, beta_sequence, quotient_limit, quotient_rate, quotient_sequence,
    zeroth_limit_report, NormalizedValue, QuotientEntry, QuotientSeries, ZerothLimitReport,
};
pub use oscillation::{
    classify_angle, dist_to_exceptional, exceptional_lattices, exceptional_set, lambda_with_pair_angle,
    lattices_partition, minus_one_forms, negative_residuals, omega, omega_angle, pair_term, periodic_lambda, pole_pair,
    quotient_bounds_offreal, quotient_bounds_rational, AngleClass, AngleKind, Lattice, PolePair, QuotientBoundInputs,
    RationalSandwichReport, ResidualSeries, SandwichReport, SandwichRow,
};
pub use params::{pole, pole_chain, truncation_set, LambdaClass, ParamContext, Pole, TruncationKind, TruncationSet};
pub use precision::{cx, to_c64, Conditioning, PrecisionConfig};
pub use rug::{Complex, Float};
