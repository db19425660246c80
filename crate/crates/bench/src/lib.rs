//! Fixed inputs shared by the benchmarks.

use apostol_core::{cx, Complex, ParamContext, PrecisionConfig, TruncationKind, TruncationSet};

/// Parameters covering the main classes: unit, real positive, real negative
/// and off the real axis.
pub const LAMBDAS: [(&str, f64, f64); 4] = [
    ("one", 1.0, 0.0),
    ("three", 3.0, 0.0),
    ("minus_two", -2.0, 0.0),
    ("i", 0.0, 1.0),
];

pub struct Fixture {
    pub name: &'static str,
    pub ctx: ParamContext,
    pub z: Complex,
    pub prec: PrecisionConfig,
}

pub fn fixtures(bits: u32) -> Vec<Fixture> {
    LAMBDAS
        .iter()
        .map(|&(name, re, im)| Fixture {
            name,
            ctx: ParamContext::from_f64(re, im, bits).expect("valid lambda"),
            z: cx(bits, 0.3, 0.2),
            prec: PrecisionConfig::with_bits(bits).expect("valid precision"),
        })
        .collect()
}

/// The default truncation of size `m` for the fixture's class.
pub fn default_set(f: &Fixture, m: u32) -> TruncationSet {
    let kind = TruncationKind::default_for(f.ctx.class());
    apostol_core::truncation_set(&f.ctx, kind, m).expect("admissible set")
}
