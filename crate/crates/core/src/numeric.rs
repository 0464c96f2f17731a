//! Small numerical helpers shared across modules.

/// Pairwise (cascade) summation. The summation order depends only on the
/// length of the input, so results are bit-stable for a given sequence.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const LEAF: usize = 8;
    if values.len() <= LEAF {
        return values.iter().fold(0.0, |acc, v| acc + v);
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// `ln(exp(x) + exp(y))` without overflow. Either argument may be `-inf`.
pub fn log_add_exp(x: f64, y: f64) -> f64 {
    let (hi, lo) = if x >= y { (x, y) } else { (y, x) };
    if hi == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// Signed `ln|exp(x) - exp(y)|`, returned as `(sign, log_magnitude)`.
pub fn log_sub_exp(x: f64, y: f64) -> (f64, f64) {
    if x == y {
        return (0.0, f64::NEG_INFINITY);
    }
    let (hi, lo, sign) = if x > y { (x, y, 1.0) } else { (y, x, -1.0) };
    (sign, hi + (-(-(hi - lo)).exp_m1()).ln())
}

/// Inclusive logarithmic grid with `points` nodes.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            let step = (b - a) / (points - 1) as f64;
            (0..points)
                .map(|i| match i { 0 => lo, i if i == points - 1 => hi, i => (a + step * i as f64).exp() })
                .collect()
        }
    }
}

/// Inclusive linear grid with `points` nodes.
pub fn linear_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (points - 1) as f64;
            (0..points)
                .map(|i| if i == points - 1 { hi } else { lo + step * i as f64 })
                .collect()
        }
    }
}
