//! Transmitter RF impairments (EEVM model) and IRS phase noise.
//!
//! Every RF chain at the AP applies the same attenuation `eta` and an
//! independent random rotation `psi(m) ~ U[-delta_psi, delta_psi]`, and adds
//! distortion noise of power `sigma2`. Each IRS element realizes its designed
//! phase up to an independent error `theta_hat(n) ~ U[-delta_theta_hat,
//! delta_theta_hat]`.
//!
//! The distortion noise itself is never sampled: it only enters the SNR
//! through its covariance `sigma2 * I`.

use num_complex::Complex;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ComplexVector};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImpairmentConfig<T> {
    /// RF attenuation, `0 < eta <= 1`.
    pub eta: T,
    /// Bound of the per-chain phase rotation, radians in `[0, pi)`.
    pub delta_psi: T,
    /// Distortion noise power per RF chain, watts.
    pub sigma2: T,
    /// Bound of the IRS phase error, radians in `[0, pi)`.
    pub delta_theta_hat: T,
}

impl<T: Scalar> Default for ImpairmentConfig<T> {
    fn default() -> Self {
        Self {
            eta: T::lit(0.9),
            delta_psi: T::PI() / T::lit(18.0),
            sigma2: T::lit(0.1),
            delta_theta_hat: T::PI() / T::lit(8.0),
        }
    }
}

impl<T: Scalar> ImpairmentConfig<T> {
    /// Perfect hardware: no attenuation, rotation, distortion or phase noise.
    pub fn ideal() -> Self {
        Self {
            eta: T::one(),
            delta_psi: T::zero(),
            sigma2: T::zero(),
            delta_theta_hat: T::zero(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let pi = T::PI();
        if !(self.eta > T::zero() && self.eta <= T::one()) {
            return Err(Error::param("eta", format!("{} not in (0, 1]", self.eta)));
        }
        if !(self.delta_psi >= T::zero() && self.delta_psi < pi) {
            return Err(Error::param(
                "delta_psi",
                format!("{} not in [0, pi)", self.delta_psi),
            ));
        }
        if !(self.sigma2 >= T::zero()) || !self.sigma2.is_finite() {
            return Err(Error::param(
                "sigma2",
                format!("{} must be >= 0", self.sigma2),
            ));
        }
        if !(self.delta_theta_hat >= T::zero() && self.delta_theta_hat < pi) {
            return Err(Error::param(
                "delta_theta_hat",
                format!("{} not in [0, pi)", self.delta_theta_hat),
            ));
        }
        Ok(())
    }
}

/// `sin(x) / x`, continuously extended with `sinc(0) = 1`.
pub fn sinc<T: Scalar>(x: T) -> T {
    // below this |x| the Taylor polynomial is exact to rounding
    if x.abs() < T::lit(1e-4) {
        let x2 = x * x;
        T::one() - x2 / T::lit(6.0) + x2 * x2 / T::lit(120.0)
    } else {
        x.sin() / x
    }
}

/// One Monte Carlo draw of all phase perturbations.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseRealization<T> {
    /// Per-chain rotations `psi(m)`, length `M`.
    pub psi: Vec<T>,
    /// Per-element IRS phase errors, length `N`.
    pub theta_hat: Vec<T>,
}

impl<T: Scalar> PhaseRealization<T> {
    pub fn zeros(ap_antennas: usize, irs_elements: usize) -> Self {
        Self {
            psi: vec![T::zero(); ap_antennas],
            theta_hat: vec![T::zero(); irs_elements],
        }
    }

    /// `sum_m exp(j psi(m))`.
    pub fn psi_sum(&self) -> Complex<T> {
        phasor_sum(&self.psi)
    }

    /// `sum_n exp(j theta_hat(n))`.
    pub fn theta_hat_sum(&self) -> Complex<T> {
        phasor_sum(&self.theta_hat)
    }
}

pub fn phasor_sum<T: Scalar>(phases: &[T]) -> Complex<T> {
    phases.iter().fold(Complex::zero(), |acc, &p| {
        acc + Complex::new(p.cos(), p.sin())
    })
}

/// Random stream for one Monte Carlo trial.
///
/// ChaCha is counter based: trial `t` reads stream `t` of the key derived
/// from `seed`, so any trial can be regenerated independently of the others
/// and of the order in which trials run.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Draws a realization from stream 0 of `seed`.
pub fn sample_phases<T: Scalar>(
    imp: &ImpairmentConfig<T>,
    ap_antennas: usize,
    irs_elements: usize,
    seed: u64,
) -> PhaseRealization<T> {
    sample_phases_with(imp, ap_antennas, irs_elements, &mut trial_rng(seed, 0))
}

/// Draws `psi` first, then `theta_hat`, from `rng`.
pub fn sample_phases_with<T: Scalar, R: Rng>(
    imp: &ImpairmentConfig<T>,
    ap_antennas: usize,
    irs_elements: usize,
    rng: &mut R,
) -> PhaseRealization<T> {
    let mut draw = |bound: T, n: usize| -> Vec<T> {
        (0..n)
            .map(|_| {
                let u: f64 = rng.gen();
                bound * T::lit(2.0 * u - 1.0)
            })
            .collect()
    };
    let psi = draw(imp.delta_psi, ap_antennas);
    let theta_hat = draw(imp.delta_theta_hat, irs_elements);
    PhaseRealization { psi, theta_hat }
}

/// `chi = diag(eta exp(j psi(1)), ..., eta exp(j psi(M)))`.
pub fn rf_distortion_matrix<T: Scalar>(
    imp: &ImpairmentConfig<T>,
    real: &PhaseRealization<T>,
) -> ComplexMatrix<T> {
    ComplexMatrix::from_diagonal(&rf_distortion_diagonal(imp, real))
}

pub(crate) fn rf_distortion_diagonal<T: Scalar>(
    imp: &ImpairmentConfig<T>,
    real: &PhaseRealization<T>,
) -> ComplexVector<T> {
    ComplexVector::from_vec(
        real.psi
            .iter()
            .map(|&p| Complex::from_polar(imp.eta, p))
            .collect(),
    )
}
