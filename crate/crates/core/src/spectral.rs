//! Spectral efficiency: per-realization SNR (full matrix form and the
//! reduced two-phase-sum form), the large-array closed forms, and a
//! Monte Carlo estimator of the ergodic value.
//!
//! With the coherent IRS design and MRT, the effective channels collapse to
//! `h2^H Theta H1 = alpha beta N a_M^H` and
//! `h2^H Theta~ H1 = alpha beta S_theta a_M^H` with
//! `S_theta = sum_n exp(j theta_hat(n))`. The SNR then depends on the
//! realization only through `S_theta` and `S_psi = sum_m exp(j psi(m))`:
//!
//! ```text
//! SNR = P eta^2 |ab|^2 |S_psi|^2 |S_theta|^2 / M
//!       ------------------------------------------
//!         M |ab|^2 |S_theta|^2 sigma2 + sigma_u^2
//! ```
//!
//! This holds exactly at every finite `(M, N)`; [`snr_exact`] keeps the
//! full matrix evaluation around as an independent check of it.

use rayon::prelude::*;

use crate::beamforming::{effective_channel, BeamformingSolution};
use crate::error::{Error, Result};
use crate::geometry::{build_channels, SystemConfig};
use crate::impairments::{
    rf_distortion_diagonal, sample_phases_with, sinc, trial_rng, ImpairmentConfig, PhaseRealization,
};
use crate::scalar::Scalar;
use crate::stats::mean_and_std_error;

/// SNR and the matching spectral efficiency in bits/s/Hz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeSample<T> {
    pub snr: T,
    pub se: T,
}

impl<T: Scalar> SeSample<T> {
    pub fn from_snr(snr: T) -> Self {
        Self {
            snr,
            se: se_of_snr(snr),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloResult<T> {
    pub mean_se: T,
    pub std_error: T,
    pub trials: usize,
    pub seed: u64,
}

fn check_power<T: Scalar>(power: T) -> Result<()> {
    if power > T::zero() && power.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositivePower(power.to_f64_lossy()))
    }
}

fn check_lengths<T: Scalar>(cfg: &SystemConfig<T>, real: &PhaseRealization<T>) -> Result<()> {
    if real.psi.len() != cfg.ap_antennas {
        return Err(Error::DimensionMismatch {
            what: "psi",
            got: real.psi.len(),
            expected: cfg.ap_antennas,
        });
    }
    if real.theta_hat.len() != cfg.irs_elements {
        return Err(Error::DimensionMismatch {
            what: "theta_hat",
            got: real.theta_hat.len(),
            expected: cfg.irs_elements,
        });
    }
    Ok(())
}

/// Received SNR by full complex matrix algebra.
///
/// Builds `Theta~ = diag(exp(j(theta + theta_hat)))` and `chi`, and
/// evaluates `P |h2^H Theta~ H1 chi w|^2 / (sigma2 ||h2^H Theta~ H1||^2 + sigma_u^2)`.
pub fn snr_exact<T: Scalar>(
    cfg: &SystemConfig<T>,
    imp: &ImpairmentConfig<T>,
    real: &PhaseRealization<T>,
    sol: &BeamformingSolution<T>,
    power: T,
) -> Result<T> {
    check_power(power)?;
    check_lengths(cfg, real)?;
    let ch = build_channels(cfg)?;
    let realized: Vec<T> = sol
        .theta
        .iter()
        .zip(&real.theta_hat)
        .map(|(&t, &e)| t + e)
        .collect();
    let g = effective_channel(&ch, &realized)?;
    let chi = rf_distortion_diagonal(imp, real);
    let signal = g.hadamard(&chi)?.dot(&sol.w)?.norm_sqr();
    let distortion = g.norm_sqr() * imp.sigma2;
    Ok(power * signal / (distortion + cfg.noise_power))
}

/// Received SNR from the two phase sums alone (see the module docs).
pub fn snr_reduced<T: Scalar>(
    cfg: &SystemConfig<T>,
    imp: &ImpairmentConfig<T>,
    real: &PhaseRealization<T>,
    power: T,
) -> Result<T> {
    check_power(power)?;
    check_lengths(cfg, real)?;
    Ok(snr_from_sums(
        cfg,
        imp,
        real.psi_sum().norm_sqr(),
        real.theta_hat_sum().norm_sqr(),
        power,
    ))
}

#[inline]
fn snr_from_sums<T: Scalar>(
    cfg: &SystemConfig<T>,
    imp: &ImpairmentConfig<T>,
    psi_sum_sq: T,
    theta_sum_sq: T,
    power: T,
) -> T {
    let m = T::from_usize_lossy(cfg.ap_antennas);
    let gain = cfg.cascade_gain();
    let num = power * imp.eta * imp.eta * gain * psi_sum_sq * theta_sum_sq / m;
    let den = m * gain * theta_sum_sq * imp.sigma2 + cfg.noise_power;
    num / den
}

/// `log2(1 + snr)`.
pub fn se_of_snr<T: Scalar>(snr: T) -> T {
    snr.ln_1p() / T::LN_2()
}

/// Large-array limit of the spectral efficiency under impairments.
pub fn se_asymptotic<T: Scalar>(
    cfg: &SystemConfig<T>,
    imp: &ImpairmentConfig<T>,
    power: T,
) -> Result<T> {
    check_power(power)?;
    let m = T::from_usize_lossy(cfg.ap_antennas);
    let n = T::from_usize_lossy(cfg.irs_elements);
    let array_gain = m * n * n * cfg.cascade_gain();
    let s_psi = sinc(imp.delta_psi);
    let s_theta = sinc(imp.delta_theta_hat);
    let num = power * array_gain * imp.eta * imp.eta * s_psi * s_psi * s_theta * s_theta;
    let den = array_gain * s_theta * s_theta * imp.sigma2 + cfg.noise_power;
    Ok(se_of_snr(num / den))
}

/// Spectral efficiency with ideal hardware, `log2(1 + P M N^2 |ab|^2 / sigma_u^2)`.
pub fn se_ideal<T: Scalar>(cfg: &SystemConfig<T>, power: T) -> Result<T> {
    check_power(power)?;
    let m = T::from_usize_lossy(cfg.ap_antennas);
    let n = T::from_usize_lossy(cfg.irs_elements);
    Ok(se_of_snr(
        power / cfg.noise_power * m * n * n * cfg.cascade_gain(),
    ))
}

/// High-SNR approximation `log2 P + 2 log2 eta + 2 log2 sinc(delta_psi) - log2 sigma2`.
///
/// Independent of the IRS phase noise and of the array sizes.
pub fn se_high_snr<T: Scalar>(imp: &ImpairmentConfig<T>, power: T) -> Result<T> {
    check_power(power)?;
    if !(imp.sigma2 > T::zero()) {
        return Err(Error::Domain(
            "high-SNR spectral efficiency needs sigma2 > 0".into(),
        ));
    }
    let s = sinc(imp.delta_psi);
    if !(imp.eta > T::zero() && s > T::zero()) {
        return Err(Error::Domain(
            "high-SNR spectral efficiency needs eta > 0 and sinc(delta_psi) > 0".into(),
        ));
    }
    let two = T::lit(2.0);
    Ok(power.log2() + two * imp.eta.log2() + two * s.log2() - imp.sigma2.log2())
}

/// Ceiling on the spectral efficiency for any array sizes,
/// `log2(1 + eta^2 (P / sigma2) sinc^2(delta_psi))`.
pub fn se_upper_bound<T: Scalar>(imp: &ImpairmentConfig<T>, power: T) -> Result<T> {
    check_power(power)?;
    if !(imp.sigma2 > T::zero()) {
        return Err(Error::Domain(
            "spectral efficiency is unbounded without distortion noise (sigma2 = 0)".into(),
        ));
    }
    let s = sinc(imp.delta_psi);
    Ok(se_of_snr(imp.eta * imp.eta * power / imp.sigma2 * s * s))
}

/// Ergodic spectral efficiency as the mean over `trials` phase draws.
///
/// Trial `t` draws from stream `t` of `seed`; per-trial values are
/// collected in trial order and reduced with a fixed summation tree, so the
/// result is bit-identical for any rayon pool size.
pub fn monte_carlo_se<T: Scalar>(
    cfg: &SystemConfig<T>,
    imp: &ImpairmentConfig<T>,
    power: T,
    trials: usize,
    seed: u64,
) -> Result<MonteCarloResult<T>> {
    check_power(power)?;
    cfg.validate()?;
    imp.validate()?;
    if trials == 0 {
        return Err(Error::param("trials", "must be >= 1"));
    }
    let (m, n) = (cfg.ap_antennas, cfg.irs_elements);
    let samples: Vec<T> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let real = sample_phases_with(imp, m, n, &mut trial_rng(seed, t));
            let snr = snr_from_sums(
                cfg,
                imp,
                real.psi_sum().norm_sqr(),
                real.theta_hat_sum().norm_sqr(),
                power,
            );
            se_of_snr(snr)
        })
        .collect();
    let (mean_se, std_error) = mean_and_std_error(&samples);
    Ok(MonteCarloResult {
        mean_se,
        std_error,
        trials,
        seed,
    })
}
