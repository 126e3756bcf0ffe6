//! Composite quadrature on uniform grids.

use crate::Error;

/// Composite trapezoid rule for samples spaced by `h`.
pub fn trapezoid(values: &[f64], h: f64) -> f64 {
    match values.len() {
        0 | 1 => 0.0,
        n => {
            let inner: f64 = values[1..n - 1].iter().sum();
            h * (inner + 0.5 * (values[0] + values[n - 1]))
        }
    }
}

/// Composite Simpson rule; needs an odd number of samples (even panel count).
pub fn simpson(values: &[f64], h: f64) -> Result<f64, Error> {
    let n = values.len();
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::InvalidParam {
            name: "n_quad",
            value: n as f64,
            reason: "Simpson's rule needs an odd number of nodes, at least 3",
        });
    }
    let mut acc = values[0] + values[n - 1];
    for (i, v) in values.iter().enumerate().take(n - 1).skip(1) {
        acc += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    Ok(acc * h / 3.0)
}
