//! Principal branch of the Lambert W function.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `-1/e`, the branch point of `W0`.
pub fn branch_point<T: Scalar>() -> T {
    -(-T::one()).exp()
}

/// Principal-branch Lambert W: the `w >= -1` solving `w exp(w) = x`.
///
/// Halley iteration started from `ln(1 + x)`, or from the branch-point
/// series in `sqrt(2 (e x + 1))` close to `-1/e`. Returns an error for
/// `x < -1/e` and for non-finite input.
pub fn lambert_w0<T: Scalar>(x: T) -> Result<T> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("lambert_w0 of non-finite {x}")));
    }
    let bp = branch_point::<T>();
    if x < bp {
        return Err(Error::Domain(format!(
            "lambert_w0 undefined for {x} < -1/e"
        )));
    }
    if x == bp {
        return Ok(-T::one());
    }
    if x == T::zero() {
        return Ok(T::zero());
    }

    let mut w = if x < T::lit(-0.25) {
        let p = (T::lit(2.0) * (T::E() * x + T::one()))
            .max(T::zero())
            .sqrt();
        -T::one() + p - p * p / T::lit(3.0) + T::lit(11.0 / 72.0) * p * p * p
    } else {
        x.ln_1p()
    };

    let scale = T::one().max(x.abs());
    let stop = T::epsilon() * T::lit(4.0) * scale;
    for _ in 0..100 {
        let ew = w.exp();
        let f = w * ew - x;
        if f.abs() <= stop {
            break;
        }
        let wp1 = w + T::one();
        if wp1 == T::zero() {
            break;
        }
        let fp = ew * wp1;
        let step = f / (fp - (w + T::lit(2.0)) * f / (T::lit(2.0) * wp1));
        let next = (w - step).max(-T::one());
        if next == w {
            break;
        }
        w = next;
    }

    let residual = (w * w.exp() - x).abs();
    if residual > T::SOLVER_TOL * scale {
        return Err(Error::Convergence {
            what: "lambert_w0",
            residual: residual.to_f64_lossy(),
        });
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    /// Bisection on `w e^w - x`, independent of the Halley path.
    fn bisect(x: f64) -> f64 {
        let (mut lo, mut hi) = (-1.0_f64, 1.0_f64.max(x.max(1.0).ln() + 1.0));
        for _ in 0..400 {
            let mid = 0.5 * (lo + hi);
            if mid == lo || mid == hi {
                break;
            }
            if mid * mid.exp() > x {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn exact_points() {
        assert_eq!(lambert_w0(0.0_f64).unwrap(), 0.0);
        assert!((lambert_w0(E).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(lambert_w0(branch_point::<f64>()).unwrap(), -1.0);
    }

    #[test]
    fn agrees_with_bisection() {
        let w = lambert_w0(26.82_f64).unwrap();
        assert!((w - bisect(26.82)).abs() < 1e-12);
        assert!((w - 2.41).abs() < 5e-3);
        for x in [-0.3678, -0.2, -1e-3, 1e-8, 0.5, 3.0, 1e3, 1e6] {
            let w = lambert_w0(x).unwrap();
            assert!((w - bisect(x)).abs() < 1e-10, "x = {x}");
        }
    }

    #[test]
    fn near_branch_point() {
        let x = branch_point::<f64>() + 1e-9;
        let w = lambert_w0(x).unwrap();
        assert!((w * w.exp() - x).abs() <= 1e-12);
        assert!((w - bisect(x)).abs() < 1e-10);
        assert!(w > -1.0 && w < -0.999);
    }

    #[test]
    fn outside_domain() {
        assert!(matches!(lambert_w0(-0.5_f64), Err(Error::Domain(_))));
        assert!(lambert_w0(f64::NAN).is_err());
        assert!(lambert_w0(f64::INFINITY).is_err());
    }

    #[test]
    fn single_precision() {
        let w = lambert_w0(26.82_f32).unwrap();
        assert!((w - 2.409_661_6).abs() < 1e-5);
    }
}
