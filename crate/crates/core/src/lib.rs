//! Spectral and energy efficiency of an IRS-assisted MISO downlink whose
//! access point suffers EEVM transmitter impairments and whose reflecting
//! surface suffers random phase errors.
//!
//! The link is line-of-sight on both hops with uniform square planar arrays
//! at the AP (`M` antennas) and the IRS (`N` elements). Beamforming is
//! designed for ideal hardware (coherent IRS phases plus MRT); impairments
//! only enter when the resulting SNR is evaluated.
//!
//! All numerics are generic over [`Scalar`] (`f32` or `f64`); the aliases at
//! the crate root fix the scalar to `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod beamforming;
pub mod energy;
pub mod error;
pub mod geometry;
pub mod impairments;
pub mod lambert;
pub mod linalg;
pub mod scalar;
pub mod spectral;
pub mod stats;

pub use beamforming::{mrt_beamformer, optimal_irs_phases};
pub use energy::{
    c_ap, c_ideal, energy_efficiency, optimal_power, optimal_power_ideal, total_power, ClosedForm,
};
pub use error::{Error, Result};
pub use geometry::{array_response, build_channels, Angles};
pub use impairments::{rf_distortion_matrix, sample_phases, sinc};
pub use lambert::lambert_w0;
pub use scalar::Scalar;
pub use spectral::{
    monte_carlo_se, se_asymptotic, se_high_snr, se_ideal, se_of_snr, se_upper_bound, snr_exact,
    snr_reduced,
};

pub type Complex = num_complex::Complex<f64>;
pub type ComplexVector = linalg::ComplexVector<f64>;
pub type ComplexMatrix = linalg::ComplexMatrix<f64>;
pub type SystemConfig = geometry::SystemConfig<f64>;
pub type LinkChannels = geometry::LinkChannels<f64>;
pub type ImpairmentConfig = impairments::ImpairmentConfig<f64>;
pub type PhaseRealization = impairments::PhaseRealization<f64>;
pub type BeamformingSolution = beamforming::BeamformingSolution<f64>;
pub type SeSample = spectral::SeSample<f64>;
pub type MonteCarloResult = spectral::MonteCarloResult<f64>;
pub type PowerConfig = energy::PowerConfig<f64>;
pub type OptimalPowerResult = energy::OptimalPowerResult<f64>;

/// Single-precision aliases.
pub mod f32 {
    pub type SystemConfig = crate::geometry::SystemConfig<f32>;
    pub type ImpairmentConfig = crate::impairments::ImpairmentConfig<f32>;
    pub type PhaseRealization = crate::impairments::PhaseRealization<f32>;
    pub type BeamformingSolution = crate::beamforming::BeamformingSolution<f32>;
    pub type MonteCarloResult = crate::spectral::MonteCarloResult<f32>;
    pub type PowerConfig = crate::energy::PowerConfig<f32>;
    pub type OptimalPowerResult = crate::energy::OptimalPowerResult<f32>;
}
