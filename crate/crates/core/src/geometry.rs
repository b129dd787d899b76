//! Uniform square planar arrays and the rank-one line-of-sight channels of
//! the AP -> IRS and IRS -> user links.
//!
//! Elements of a `sqrt(X) x sqrt(X)` array are addressed by planar indices
//! `(x, y)` with `0 <= x, y < sqrt(X)` and stored at linear position
//! `sqrt(X) * x + y` (zero based).

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ComplexVector};
use crate::scalar::Scalar;

/// Azimuth/elevation pair in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Angles<T> {
    pub azimuth: T,
    pub elevation: T,
}

impl<T: Scalar> Angles<T> {
    pub fn new(azimuth: T, elevation: T) -> Self {
        Self { azimuth, elevation }
    }

    /// Phase progression per unit step along the `x` and `y` array axes,
    /// before the `2 pi d / lambda` factor.
    pub fn direction_cosines(&self) -> (T, T) {
        (
            self.azimuth.sin() * self.elevation.sin(),
            self.elevation.cos(),
        )
    }

    /// True when both angles lie in `[0, 2 pi)`. Values outside are legal
    /// but usually a units mistake.
    pub fn in_principal_range(&self) -> bool {
        let tau = T::TAU();
        [self.azimuth, self.elevation]
            .iter()
            .all(|&a| a >= T::zero() && a < tau)
    }
}

/// Array sizes, path gains, geometry and receiver noise of the link.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig<T> {
    /// AP antenna count `M`.
    pub ap_antennas: usize,
    /// IRS element count `N`.
    pub irs_elements: usize,
    /// Complex path gain of the AP -> IRS link.
    pub alpha: Complex<T>,
    /// Complex path gain of the IRS -> user link.
    pub beta: Complex<T>,
    /// Angle of arrival at the IRS.
    pub aoa_irs: Angles<T>,
    /// Angle of departure at the AP.
    pub aod_ap: Angles<T>,
    /// Angle of departure at the IRS towards the user.
    pub aod_irs: Angles<T>,
    /// Element spacing over wavelength, `d / lambda`.
    pub spacing_ratio: T,
    /// Receiver noise power `sigma_u^2` in watts.
    pub noise_power: T,
}

impl<T: Scalar> Default for SystemConfig<T> {
    fn default() -> Self {
        let pi = T::PI();
        Self {
            ap_antennas: 16,
            irs_elements: 64,
            alpha: Complex::new(T::lit(0.1), T::zero()),
            beta: Complex::new(T::lit(0.5), T::zero()),
            aoa_irs: Angles::new(pi / T::lit(4.0), pi / T::lit(3.0)),
            aod_ap: Angles::new(pi / T::lit(6.0), pi / T::lit(4.0)),
            aod_irs: Angles::new(pi / T::lit(3.0), pi / T::lit(5.0)),
            spacing_ratio: T::lit(0.5),
            noise_power: T::lit(0.1),
        }
    }
}

impl<T: Scalar> SystemConfig<T> {
    pub fn validate(&self) -> Result<()> {
        square_side(self.ap_antennas, "ap_antennas")?;
        square_side(self.irs_elements, "irs_elements")?;
        if !(self.spacing_ratio > T::zero()) || !self.spacing_ratio.is_finite() {
            return Err(Error::param("spacing_ratio", "must be finite and > 0"));
        }
        if !(self.noise_power > T::zero()) || !self.noise_power.is_finite() {
            return Err(Error::param("noise_power", "must be finite and > 0"));
        }
        let finite = |z: Complex<T>| z.re.is_finite() && z.im.is_finite();
        if !finite(self.alpha) || !finite(self.beta) {
            return Err(Error::param("alpha/beta", "path gains must be finite"));
        }
        for a in [self.aoa_irs, self.aod_ap, self.aod_irs] {
            if !a.azimuth.is_finite() || !a.elevation.is_finite() {
                return Err(Error::param("angles", "must be finite"));
            }
        }
        Ok(())
    }

    /// `|alpha beta|^2`, the only way the path gains enter any metric.
    pub fn cascade_gain(&self) -> T {
        (self.alpha * self.beta).norm_sqr()
    }

    pub fn with_sizes(&self, ap_antennas: usize, irs_elements: usize) -> Self {
        Self {
            ap_antennas,
            irs_elements,
            ..self.clone()
        }
    }
}

/// Integer side length of a square array, or an error for non-squares.
pub fn square_side(len: usize, what: &'static str) -> Result<usize> {
    let guess = (len as f64).sqrt().round() as usize;
    if len == 0 || guess * guess != len {
        return Err(Error::InvalidDimension { what, value: len });
    }
    Ok(guess)
}

/// Planar indices `(x, y)` of zero-based linear position `idx`.
pub fn planar_index(idx: usize, side: usize) -> (usize, usize) {
    (idx / side, idx % side)
}

/// Steering vector of a `sqrt(len) x sqrt(len)` planar array.
///
/// Element `(x, y)` is `exp(j 2 pi (d/lambda) (x sin(az) sin(el) + y cos(el)))`.
pub fn array_response<T: Scalar>(
    len: usize,
    angles: Angles<T>,
    spacing_ratio: T,
) -> Result<ComplexVector<T>> {
    let side = square_side(len, "array length")?;
    if !(spacing_ratio > T::zero()) {
        return Err(Error::param("spacing_ratio", "must be > 0"));
    }
    let (u, v) = angles.direction_cosines();
    let k = T::TAU() * spacing_ratio;
    Ok(ComplexVector::from_vec(
        (0..len)
            .map(|idx| {
                let (x, y) = planar_index(idx, side);
                let phase = k * (T::from_usize_lossy(x) * u + T::from_usize_lossy(y) * v);
                Complex::from_polar(T::one(), phase)
            })
            .collect(),
    ))
}

/// Cascaded line-of-sight channels.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkChannels<T> {
    /// AP -> IRS channel, `N x M`.
    pub h1: ComplexMatrix<T>,
    /// IRS -> user channel as a row vector of length `N` (already conjugated).
    pub h2h: ComplexVector<T>,
}

pub fn build_channels<T: Scalar>(cfg: &SystemConfig<T>) -> Result<LinkChannels<T>> {
    cfg.validate()?;
    let a_irs_in = array_response(cfg.irs_elements, cfg.aoa_irs, cfg.spacing_ratio)?;
    let a_ap = array_response(cfg.ap_antennas, cfg.aod_ap, cfg.spacing_ratio)?;
    let a_irs_out = array_response(cfg.irs_elements, cfg.aod_irs, cfg.spacing_ratio)?;
    Ok(LinkChannels {
        h1: ComplexMatrix::outer(cfg.alpha, &a_irs_in, &a_ap),
        h2h: a_irs_out.conj().scale(cfg.beta),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn single_element_array_is_one() {
        let a = array_response(1, Angles::new(1.3, -0.4), 0.5).unwrap();
        assert_eq!(a.as_slice(), &[c(1.0, 0.0)]);
    }

    #[test]
    fn broadside_array_has_no_phase_progression() {
        let a = array_response(4, Angles::new(0.0, PI / 2.0), 0.5).unwrap();
        for z in a.iter() {
            assert!((z - c(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn endfire_array_alternates_along_x() {
        let a = array_response(4, Angles::new(PI / 2.0, PI / 2.0), 0.5).unwrap();
        // element (x, y) = exp(j pi x); scalar evaluation of the exponent
        for idx in 0..4 {
            let (x, y) = planar_index(idx, 2);
            let phase = 2.0
                * PI
                * 0.5
                * (x as f64 * (PI / 2.0).sin() * (PI / 2.0).sin() + y as f64 * (PI / 2.0).cos());
            let expect = Complex::from_polar(1.0, phase);
            assert!((a[idx] - expect).norm() < 1e-15);
            assert!((a[idx] - Complex::from_polar(1.0, PI * x as f64)).norm() < 1e-15);
        }
    }

    #[test]
    fn non_square_sizes_are_rejected() {
        for bad in [0usize, 2, 3, 5, 8, 63] {
            assert!(matches!(
                array_response(bad, Angles::new(0.1, 0.2), 0.5),
                Err(Error::InvalidDimension { .. })
            ));
        }
        let cfg = SystemConfig::<f64> {
            irs_elements: 50,
            ..Default::default()
        };
        assert!(matches!(
            build_channels(&cfg),
            Err(Error::InvalidDimension {
                what: "irs_elements",
                value: 50
            })
        ));
    }

    #[test]
    fn scalar_channels() {
        let cfg = SystemConfig::<f64> {
            ap_antennas: 1,
            irs_elements: 1,
            alpha: c(0.3, -0.2),
            beta: c(0.1, 0.7),
            ..Default::default()
        };
        let ch = build_channels(&cfg).unwrap();
        assert_eq!(ch.h1.get(0, 0), cfg.alpha);
        assert_eq!(ch.h2h[0], cfg.beta);
    }

    #[test]
    fn channel_norms_at_small_sizes() {
        let cfg = SystemConfig::<f64> {
            ap_antennas: 4,
            irs_elements: 4,
            ..Default::default()
        };
        let ch = build_channels(&cfg).unwrap();
        // |alpha| sqrt(N M) and |beta| sqrt(N) by direct summation
        let fro: f64 = (0..4)
            .flat_map(|r| (0..4).map(move |c| (r, c)))
            .map(|(r, c)| ch.h1.get(r, c).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!((fro - 0.4).abs() < 1e-14);
        assert!((ch.h1.frobenius_norm() - 0.4).abs() < 1e-14);
        assert!((ch.h2h.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn invalid_config_fields() {
        let base = SystemConfig::<f64>::default();
        assert!(base.validate().is_ok());
        let bad = SystemConfig {
            spacing_ratio: 0.0,
            ..base.clone()
        };
        assert!(bad.validate().is_err());
        let bad = SystemConfig {
            noise_power: -1.0,
            ..base
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn principal_range_flag() {
        assert!(Angles::new(0.0, 6.0).in_principal_range());
        assert!(!Angles::new(-0.1, 1.0).in_principal_range());
        assert!(!Angles::new(1.0, 7.0).in_principal_range());
    }
}
