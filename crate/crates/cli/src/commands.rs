//! One table builder per subcommand. Rows are ordered by degree, then by grid
//! index.

use apostol_core::normalized::beta_fourier_term;
use apostol_core::oscillation::exceptional_set;
use apostol_core::precision::abs;
use apostol_core::{
    ab_poly_scaled, ae_certificate, ae_poly_scaled, beta_sequence, classify_angle, duplication_check, epsilon_sequence,
    error_certificate, error_table, fourier_coefficient_closed_form, fourier_coefficient_quadrature, omega,
    omega_angle, quotient_limit, quotient_rate, quotient_sequence, truncation_set, AngleKind, Complex, Conditioning,
    Error, EulerContext, Float, LambdaClass, ParamContext, PoleSetTag, PrecisionConfig, Result, TruncationKind,
};

use rug::ops::Pow;

use crate::parse::{DegreeRange, IndexRange};
use crate::table::{Cell, Table};

/// Everything a subcommand needs, resolved at the working precision.
pub struct Run {
    pub ctx: ParamContext,
    pub lambda_text: String,
    pub zs: Vec<Complex>,
    pub n: DegreeRange,
    pub prec: PrecisionConfig,
}

impl Run {
    fn bits(&self) -> u32 {
        self.prec.working_bits
    }

    fn table(&self, command: &'static str, columns: &[&'static str]) -> Table {
        Table::new(command, self.lambda_text.clone(), self.bits(), columns)
    }

    fn kind(&self, kind: Option<TruncationKind>) -> TruncationKind {
        kind.unwrap_or_else(|| TruncationKind::default_for(self.ctx.class()))
    }

    /// Per-`z` results laid out as rows ordered by `(n, grid index)`.
    fn by_degree<T>(
        &self,
        per_z: &[Vec<(usize, T)>],
        mut row: impl FnMut(usize, &Complex, &T) -> Vec<Cell>,
        t: &mut Table,
    ) {
        for n in self.n.from..=self.n.to {
            for (z, rows) in self.zs.iter().zip(per_z) {
                if let Some((_, v)) = rows.iter().find(|(m, _)| *m == n) {
                    t.push(row(n, z, v));
                }
            }
        }
    }
}

fn conditioning_text(c: &Conditioning) -> String {
    match c {
        Conditioning::WellConditioned => "well".into(),
        Conditioning::IllConditioned { raised_bits, .. } => format!("ill:raised_to_{raised_bits}"),
    }
}

pub fn eval(run: &Run) -> Result<Table> {
    let mut t = run.table("eval", &["n", "z", "value", "conditioning", "precision_bits"]);
    let per_z: Vec<Vec<(usize, (Complex, String, u32))>> = run
        .zs
        .iter()
        .map(|z| {
            let s = ab_poly_scaled(&run.ctx, z, run.n.to, &run.prec)?;
            let cond = conditioning_text(&s.conditioning);
            Ok((run.n.from..=run.n.to)
                .map(|n| (n, (s.values[n].clone(), cond.clone(), s.bits)))
                .collect())
        })
        .collect::<Result<_>>()?;
    run.by_degree(
        &per_z,
        |n, z, (v, cond, bits)| {
            vec![
                n.into(),
                z.clone().into(),
                v.clone().into(),
                Cell::Text(cond.clone()),
                (*bits).into(),
            ]
        },
        &mut t,
    );
    Ok(t)
}

fn set_meta(t: &mut Table, set: &apostol_core::TruncationSet) {
    t.meta("kind", Cell::Text(set.kind.to_string()));
    t.meta("m", set.m);
    t.meta(
        "members",
        Cell::Text(set.indices.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(" ")),
    );
    t.meta("mu", set.mu.clone());
}

pub fn approx(run: &Run, kind: Option<TruncationKind>, m: u32) -> Result<Table> {
    check_from(run, 2)?;
    let set = truncation_set(&run.ctx, run.kind(kind), m)?;
    let mut t = run.table(
        "approx",
        &[
            "n",
            "z",
            "partial_sum",
            "certified_bound",
            "tail_constant",
            "head_correction",
            "precision_bits",
        ],
    );
    set_meta(&mut t, &set);
    let per_z: Vec<Vec<_>> = run
        .zs
        .iter()
        .map(|z| {
            (run.n.from..=run.n.to)
                .map(|n| Ok((n, error_certificate(&run.ctx, &set, z, n)?)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let bits = run.bits();
    run.by_degree(
        &per_z,
        |n, z, c| {
            vec![
                n.into(),
                z.clone().into(),
                c.partial_sum.clone().into(),
                c.bound.clone().into(),
                c.tail_constant.clone().into(),
                c.head_correction.clone().into(),
                bits.into(),
            ]
        },
        &mut t,
    );
    Ok(t)
}

pub fn error_table_cmd(run: &Run, kind: Option<TruncationKind>, m: u32) -> Result<Table> {
    check_from(run, 2)?;
    let set = truncation_set(&run.ctx, run.kind(kind), m)?;
    let mut t = run.table(
        "error-table",
        &[
            "n",
            "z",
            "exact_scaled",
            "partial_sum",
            "true_error",
            "certified_bound",
            "bound_slack",
            "holds",
            "precision_bits",
        ],
    );
    set_meta(&mut t, &set);
    let per_z: Vec<Vec<_>> = run
        .zs
        .iter()
        .map(|z| {
            let rows = error_table(&run.ctx, &set, z, run.n.from, run.n.to, &run.prec)?;
            Ok(rows.into_iter().map(|r| (r.n, r)).collect())
        })
        .collect::<Result<_>>()?;
    run.by_degree(
        &per_z,
        |n, z, r| {
            vec![
                n.into(),
                z.clone().into(),
                r.exact.clone().into(),
                r.partial_sum.clone().into(),
                r.true_error.clone().into(),
                r.bound.clone().into(),
                r.slack.into(),
                r.holds.into(),
                r.bits.into(),
            ]
        },
        &mut t,
    );
    Ok(t)
}

pub fn quotients(run: &Run) -> Result<Table> {
    check_from(run, 2)?;
    let limit = match quotient_limit(&run.ctx) {
        Ok(l) => Some(l),
        Err(Error::WrongClass { .. }) => None,
        Err(e) => return Err(e),
    };
    let mut t = run.table(
        "quotients",
        &[
            "n",
            "z",
            "quotient",
            "near_singular",
            "distance_to_limit",
            "precision_bits",
        ],
    );
    t.meta("limit", limit.clone());
    t.meta("rate", quotient_rate(&run.ctx).ok());
    let per_z: Vec<Vec<_>> = run
        .zs
        .iter()
        .map(|z| {
            let s = quotient_sequence(&run.ctx, z, run.n.from, run.n.to, &run.prec)?;
            let bits = s.bits;
            Ok(s.entries.into_iter().map(|e| (e.n, (e, bits))).collect())
        })
        .collect::<Result<_>>()?;
    run.by_degree(
        &per_z,
        |n, z, (e, bits)| {
            let dist = match (&e.value, &limit) {
                (Some(v), Some(l)) => Cell::Real(abs(&Complex::with_val(*bits, v - l))),
                _ => Cell::Null,
            };
            vec![
                n.into(),
                z.clone().into(),
                e.value.clone().into(),
                e.near_singular.into(),
                dist,
                (*bits).into(),
            ]
        },
        &mut t,
    );
    Ok(t)
}

/// Indices of the leading pole group in the `beta` normalization and the
/// modulus ratio of the next group.
fn leading_group(ctx: &ParamContext) -> Result<(Vec<i64>, Vec<i64>)> {
    match ctx.class() {
        LambdaClass::RealNegative => Ok((vec![0, 1], vec![-1, 2])),
        LambdaClass::RealPositiveNotOne => Ok((vec![0, 1, -1], vec![2, -2])),
        LambdaClass::One => Err(Error::UnitLambda),
        class => Err(Error::WrongClass {
            class,
            reason: "oscillation tables need real lambda",
        }),
    }
}

pub fn oscillate(run: &Run) -> Result<Table> {
    check_from(run, 2)?;
    let (lead, next) = leading_group(&run.ctx)?;
    let cap = run.ctx.cap_lambda().ok_or(Error::UnitLambda)?;
    let bits0 = run.bits();
    let next_mod = abs(&Complex::with_val(
        bits0,
        1u32 - Complex::with_val(bits0, cap * next[0]),
    ));
    let eta = Float::with_val(bits0, next_mod.recip_ref());
    let eta_f = eta.to_f64();

    // the residual sits eta^n below 1, and e^{2 pi |k| |Im z|} spreads the terms
    let z_im = run.zs.iter().map(|z| z.imag().to_f64().abs()).fold(0.0, f64::max);
    let need = run.n.to as f64 * -eta_f.log2() + 4.0 * std::f64::consts::PI * z_im * std::f64::consts::LOG2_E + 96.0;
    let bits = bits0.max(need.ceil() as u32);
    let hi = run.ctx.at_precision(bits)?;
    let hi_prec = PrecisionConfig {
        working_bits: bits,
        ..run.prec
    };

    let mut t = run.table(
        "oscillate",
        &["n", "z", "beta", "leading", "residual", "envelope", "precision_bits"],
    );
    let alpha = omega_angle(&run.ctx)?;
    t.meta("omega", omega(&run.ctx)?);
    t.meta("alpha", alpha);
    t.meta("eta", eta.clone());
    t.meta("leading_indices", Cell::Text(join(&lead)));
    t.meta("next_indices", Cell::Text(join(&next)));
    let class = classify_angle(alpha, 1000, 1e-12)?;
    match class.kind {
        AngleKind::Rational { a, d } => {
            t.meta("angle_class", Cell::Text(format!("rational {a}/{d}")));
            let lat = exceptional_set(a, d)?;
            t.meta(
                "exceptional_set",
                Cell::Text(format!("{} + {} Z", lat.offset, lat.spacing)),
            );
        }
        AngleKind::IrrationalWithinBound => {
            t.meta("angle_class", Cell::Text("irrational within denominator 1000".into()));
        }
    }

    let per_z: Vec<Vec<_>> = run
        .zs
        .iter()
        .map(|z| {
            let values = beta_sequence(&hi, z, run.n.from, run.n.to, &hi_prec)?;
            values
                .into_iter()
                .map(|v| {
                    let b = v.beta.prec().0;
                    let mut leading = Complex::new(b);
                    for &k in &lead {
                        leading += beta_fourier_term(&hi, k, &v.z, v.n)?;
                    }
                    let residual = abs(&Complex::with_val(b, &v.beta - &leading));
                    let envelope = Float::with_val(b, (&eta).pow(v.n as u32));
                    Ok((v.n, (v.beta, leading, residual, envelope, b)))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    run.by_degree(
        &per_z,
        |n, z, (beta, leading, residual, envelope, b)| {
            vec![
                n.into(),
                z.clone().into(),
                beta.clone().into(),
                leading.clone().into(),
                residual.clone().into(),
                envelope.clone().into(),
                (*b).into(),
            ]
        },
        &mut t,
    );
    Ok(t)
}

fn join(v: &[i64]) -> String {
    v.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn fourier_check(run: &Run, k: IndexRange) -> Result<Table> {
    check_from(run, 1)?;
    let mut t = run.table(
        "fourier-check",
        &[
            "n",
            "k",
            "quadrature",
            "closed_form",
            "relative_error",
            "precision_bits",
        ],
    );
    t.meta("quadrature_tolerance", run.prec.quadrature_tolerance);
    let bits = run.bits();
    for n in run.n.from..=run.n.to {
        for k in k.from..=k.to {
            let q = fourier_coefficient_quadrature(&run.ctx, n, k, &run.prec)?;
            let closed = fourier_coefficient_closed_form(&run.ctx, n as u32, k)?;
            let qc = Complex::with_val(53, (q.re, q.im));
            let diff = abs(&Complex::with_val(bits, &qc - &closed));
            let scale = abs(&closed);
            let rel = if scale.is_zero() {
                Cell::Null
            } else {
                Cell::Double(Float::with_val(bits, &diff / &scale).to_f64())
            };
            t.push(vec![
                n.into(),
                (k as i64).into(),
                qc.into(),
                closed.into(),
                rel,
                bits.into(),
            ]);
        }
    }
    Ok(t)
}

pub fn euler(run: &Run, kind: Option<TruncationKind>, m: u32) -> Result<Table> {
    let ectx = EulerContext::new(run.ctx.clone())?;
    let kind = kind.unwrap_or_else(|| TruncationKind::default_for(ectx.mirror.class()));
    let mut t = run.table(
        "euler",
        &[
            "n",
            "z",
            "scaled",
            "partial_sum",
            "certified_bound",
            "epsilon",
            "precision_bits",
        ],
    );
    t.meta("eps_sign", i64::from(ectx.eps_sign));
    t.meta(
        "pole_set",
        Cell::Text(match ectx.pole_set {
            PoleSetTag::Standard => "standard".into(),
            PoleSetTag::EulerAtMinusOne => "euler-at-minus-one".into(),
        }),
    );
    t.meta("quotient_limit", ectx.quotient_limit().ok());
    let with_eps = ectx.pole_set == PoleSetTag::Standard;
    let bits = run.bits();
    let per_z: Vec<Vec<_>> = run
        .zs
        .iter()
        .map(|z| {
            let values = ae_poly_scaled(&ectx, z, run.n.to, &run.prec)?;
            let eps_from = run.n.from.max(1);
            let eps = if with_eps && eps_from <= run.n.to {
                epsilon_sequence(&ectx, z, eps_from, run.n.to, &run.prec)?
            } else {
                Vec::new()
            };
            (run.n.from..=run.n.to)
                .map(|n| {
                    let (ps, bound) = if n >= 1 {
                        let c = ae_certificate(&ectx, kind, m, z, n)?;
                        (Some(c.partial_sum), Some(c.bound))
                    } else {
                        (None, None)
                    };
                    let e = eps.iter().find(|e| e.n == n).map(|e| e.epsilon.clone());
                    Ok((n, (values[n].clone(), ps, bound, e)))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    run.by_degree(
        &per_z,
        |n, z, (v, ps, bound, e)| {
            vec![
                n.into(),
                z.clone().into(),
                v.clone().into(),
                ps.clone().into(),
                bound.clone().into(),
                e.clone().into(),
                bits.into(),
            ]
        },
        &mut t,
    );
    Ok(t)
}

pub fn duplication(run: &Run) -> Result<Table> {
    let mut t = run.table(
        "duplication",
        &["n", "z", "lhs", "rhs", "absolute", "relative", "precision_bits"],
    );
    let bits = run.bits();
    let per_z: Vec<Vec<_>> = run
        .zs
        .iter()
        .map(|z| {
            let rows = duplication_check(&run.ctx, z, run.n.to, &run.prec)?;
            Ok(rows.into_iter().map(|r| (r.n, r)).collect())
        })
        .collect::<Result<_>>()?;
    run.by_degree(
        &per_z,
        |n, z, r| {
            vec![
                n.into(),
                z.clone().into(),
                r.lhs.clone().into(),
                r.rhs.clone().into(),
                r.absolute.clone().into(),
                r.relative.clone().into(),
                bits.into(),
            ]
        },
        &mut t,
    );
    Ok(t)
}

fn check_from(run: &Run, min: usize) -> Result<()> {
    if run.n.from < min {
        return Err(Error::InvalidArgument(format!(
            "degrees must start at {min} or later for this command, got {}",
            run.n.from
        )));
    }
    Ok(())
}
