//! Transmit and reflect beamforming, designed as if the hardware were ideal.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::geometry::{build_channels, planar_index, square_side, LinkChannels, SystemConfig};
use crate::linalg::ComplexVector;
use crate::scalar::Scalar;

/// Unit-norm MRT vector and designed IRS phase profile.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamformingSolution<T> {
    pub w: ComplexVector<T>,
    pub theta: Vec<T>,
}

impl<T: Scalar> BeamformingSolution<T> {
    /// Coherent IRS phases followed by MRT on the resulting effective channel.
    pub fn design(cfg: &SystemConfig<T>) -> Result<Self> {
        let theta = optimal_irs_phases(cfg)?;
        let w = mrt_beamformer(cfg, &theta)?;
        Ok(Self { w, theta })
    }
}

/// Phase profile that aligns every reflected path at the user:
/// `theta_n = -2 pi (d/lambda) (x p + y q)` where `p` and `q` are the
/// differences of the IRS arrival and departure direction cosines.
pub fn optimal_irs_phases<T: Scalar>(cfg: &SystemConfig<T>) -> Result<Vec<T>> {
    let side = square_side(cfg.irs_elements, "irs_elements")?;
    let (u_in, v_in) = cfg.aoa_irs.direction_cosines();
    let (u_out, v_out) = cfg.aod_irs.direction_cosines();
    let p = u_in - u_out;
    let q = v_in - v_out;
    let k = T::TAU() * cfg.spacing_ratio;
    Ok((0..cfg.irs_elements)
        .map(|idx| {
            let (x, y) = planar_index(idx, side);
            -k * (T::from_usize_lossy(x) * p + T::from_usize_lossy(y) * q)
        })
        .collect())
}

/// `diag(exp(j theta))` as its diagonal.
pub fn reflection_diagonal<T: Scalar>(theta: &[T]) -> ComplexVector<T> {
    ComplexVector::from_vec(
        theta
            .iter()
            .map(|&t| Complex::new(t.cos(), t.sin()))
            .collect(),
    )
}

/// Effective row channel `h2^H diag(exp(j theta)) H1` of length `M`.
pub fn effective_channel<T: Scalar>(ch: &LinkChannels<T>, theta: &[T]) -> Result<ComplexVector<T>> {
    ch.h2h
        .hadamard(&reflection_diagonal(theta))?
        .row_times(&ch.h1)
}

/// Maximum ratio transmission on the effective channel.
///
/// The global phase is fixed so that the first entry is real and
/// nonnegative.
pub fn mrt_beamformer<T: Scalar>(cfg: &SystemConfig<T>, theta: &[T]) -> Result<ComplexVector<T>> {
    if theta.len() != cfg.irs_elements {
        return Err(Error::DimensionMismatch {
            what: "theta",
            got: theta.len(),
            expected: cfg.irs_elements,
        });
    }
    let ch = build_channels(cfg)?;
    let g = effective_channel(&ch, theta)?;
    let norm = g.norm();
    if !(norm > T::zero()) {
        return Err(Error::DegenerateChannel);
    }
    let w = g.conj();
    let first = w[0];
    let rot = if first.norm() > T::zero() {
        first.conj() / first.norm()
    } else {
        Complex::new(T::one(), T::zero())
    };
    let mut entries: Vec<Complex<T>> = w
        .scale(rot / Complex::new(norm, T::zero()))
        .into_iter()
        .collect();
    entries[0] = Complex::new(first.norm() / norm, T::zero());
    Ok(ComplexVector::from_vec(entries))
}

/// `|h2^H diag(exp(j theta)) a_in|`, the reflect-beamforming objective for
/// a given phase profile (maximum `N`).
pub fn coherent_gain<T: Scalar>(cfg: &SystemConfig<T>, theta: &[T]) -> Result<T> {
    use crate::geometry::array_response;
    let a_in = array_response(cfg.irs_elements, cfg.aoa_irs, cfg.spacing_ratio)?;
    let a_out = array_response(cfg.irs_elements, cfg.aod_irs, cfg.spacing_ratio)?;
    Ok(a_out
        .conj()
        .hadamard(&reflection_diagonal(theta))?
        .dot(&a_in)?
        .norm())
}
