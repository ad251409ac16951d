//! Bracketing root finders.

use crate::error::{Error, Result};

/// Bisection on `[lo, hi]`. Stops once the bracket is narrower than `xtol` or
/// cannot be split any further in floating point, so `xtol = 0` runs to full
/// machine precision.
pub fn bisect<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, xtol: f64) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || fa.is_nan() || fb.is_nan() {
        return Err(Error::NoSignChange { what: "bisection target", lo, hi });
    }
    for _ in 0..2100 {
        let mid = 0.5 * (a + b);
        if (b - a).abs() <= xtol || mid == a || mid == b {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// Newton iteration safeguarded by a bisection bracket. `fdf` returns the
/// function value and derivative.
pub fn safeguarded_newton<F>(fdf: F, lo: f64, hi: f64, xtol: f64, max_iter: usize) -> Result<f64>
where
    F: Fn(f64) -> (f64, f64),
{
    let (flo, _) = fdf(lo);
    let (fhi, _) = fdf(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::NoSignChange { what: "newton target", lo, hi });
    }
    // orient so that f(xl) < 0
    let (mut xl, mut xh) = if flo < 0.0 { (lo, hi) } else { (hi, lo) };
    let mut x = 0.5 * (lo + hi);
    let mut dx_old = (hi - lo).abs();
    let mut dx = dx_old;
    let (mut fx, mut dfx) = fdf(x);

    for _ in 0..max_iter {
        let newton_leaves = ((x - xh) * dfx - fx) * ((x - xl) * dfx - fx) > 0.0;
        let slow = (2.0 * fx).abs() > (dx_old * dfx).abs();
        if newton_leaves || slow || dfx == 0.0 || !dfx.is_finite() {
            dx_old = dx;
            dx = 0.5 * (xh - xl);
            x = xl + dx;
            if x == xl {
                return Ok(x);
            }
        } else {
            dx_old = dx;
            dx = fx / dfx;
            let prev = x;
            x -= dx;
            if prev == x {
                return Ok(x);
            }
        }
        if dx.abs() <= xtol {
            return Ok(x);
        }
        let (f_new, df_new) = fdf(x);
        fx = f_new;
        dfx = df_new;
        if fx == 0.0 {
            return Ok(x);
        }
        if fx < 0.0 {
            xl = x;
        } else {
            xh = x;
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisection_to_machine_precision() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 0.0).unwrap();
        assert!((r - 2f64.sqrt()).abs() <= 2.0 * f64::EPSILON);
    }

    #[test]
    fn bisection_requires_bracket() {
        assert!(bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-12).is_err());
    }

    #[test]
    fn newton_matches_bisection() {
        let f = |x: f64| (x.cos() - x, -x.sin() - 1.0);
        let r = safeguarded_newton(f, 0.0, 1.0, 1e-15, 100).unwrap();
        assert!((r.cos() - r).abs() < 1e-14);
    }

    #[test]
    fn newton_survives_flat_derivative() {
        // derivative vanishes at the root; the bracket keeps it honest
        let f = |x: f64| (x.powi(3), 3.0 * x * x);
        let r = safeguarded_newton(f, -1.0, 2.0, 1e-14, 500).unwrap();
        assert!(r.abs() < 1e-4);
    }
}
