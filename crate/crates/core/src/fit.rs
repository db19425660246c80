//! Rate and envelope estimates for geometrically decaying sequences.

/// Least-squares slope of `ys` against `xs`. `None` with fewer than two
/// finite points.
pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| x.is_finite() && y.is_finite())
        .map(|(x, y)| (*x, *y))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let num: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let den: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if den == 0.0 {
        return None;
    }
    Some(num / den)
}

/// Geometric rate of the upper envelope of `|v_n|` given as `log2 |v_n|`.
///
/// The sequence is cut into consecutive windows of `window` terms; the slope
/// is fitted through the per-window maxima, so isolated near-zeros of an
/// oscillating factor do not drag the estimate down. Returns `2^slope`.
pub fn envelope_rate(ns: &[usize], log2_values: &[f64], window: usize) -> Option<f64> {
    let window = window.max(1);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (chunk_n, chunk_v) in ns.chunks(window).zip(log2_values.chunks(window)) {
        if chunk_n.len() < window {
            break;
        }
        let best = chunk_n
            .iter()
            .zip(chunk_v)
            .filter(|(_, v)| v.is_finite())
            .max_by(|a, b| a.1.total_cmp(b.1));
        if let Some((n, v)) = best {
            xs.push(*n as f64);
            ys.push(*v);
        }
    }
    least_squares_slope(&xs, &ys).map(f64::exp2)
}

/// Smallest `c` with `value_n <= c * rate^n` on the given points, from
/// `log2` values. Empty input yields `None`.
pub fn envelope_constant(ns: &[usize], log2_values: &[f64], rate: f64) -> Option<f64> {
    let lr = rate.log2();
    ns.iter()
        .zip(log2_values)
        .filter(|(_, v)| v.is_finite())
        .map(|(n, v)| v - *n as f64 * lr)
        .max_by(f64::total_cmp)
        .map(f64::exp2)
}
