use crate::error::{Error, Result};

fn central(f: &dyn Fn(f64) -> f64, x: f64, order: u8, h: f64) -> f64 {
    match order {
        1 => (f(x + h) - f(x - h)) / (2.0 * h),
        _ => (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h),
    }
}

/// Central difference of order 1 or 2, Richardson-extrapolated from steps
/// `h` and `h/2` so the truncation error is `O(h⁴)`.
pub fn finite_diff(f: impl Fn(f64) -> f64, x: f64, order: u8, h: f64) -> Result<f64> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::InvalidStep(h));
    }
    if order != 1 && order != 2 {
        return Err(Error::Unsupported(format!(
            "finite difference of order {order}; only 1 and 2 are available"
        )));
    }
    let coarse = central(&f, x, order, h);
    let fine = central(&f, x, order, 0.5 * h);
    Ok((4.0 * fine - coarse) / 3.0)
}
