//! Power consumption, energy efficiency and the EE-optimal transmit power.
//!
//! With the high-SNR spectral efficiency `(ln P + C) / ln 2`, the energy
//! efficiency `B R / (mu P + P_C)` is stationary where
//!
//! ```text
//! g(P) = mu P (ln P + C - 1) = P_C.
//! ```
//!
//! Substituting `u = ln P + C - 1` gives `u e^u = e^(C-1) P_C / mu`, so
//! `u = W0(e^(C-1) P_C / mu)` and `P* = P_C / (mu u)`. Since
//! `g'(P) = mu (ln P + C) > 0` wherever the rate is positive, the root is
//! unique.
//!
//! A commonly quoted closed form writes the optimum as `mu W0(.) / P_C`.
//! That expression does not satisfy the stationarity condition (at the
//! default parameters it is off by more than an order of magnitude). Both
//! forms are evaluated and checked against `g(P) = P_C`; only one that
//! satisfies it is ever returned.

use crate::error::{Error, Result};
use crate::geometry::SystemConfig;
use crate::impairments::{sinc, ImpairmentConfig};
use crate::lambert::lambert_w0;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerConfig<T> {
    /// Amplifier inefficiency `mu = 1 / efficiency`, at least 1.
    pub mu: T,
    /// Static circuit power `P_C`, watts.
    pub p_static: T,
    /// Bandwidth `B`, hertz.
    pub bandwidth: T,
}

impl<T: Scalar> Default for PowerConfig<T> {
    fn default() -> Self {
        Self {
            mu: T::lit(1.1),
            p_static: T::lit(10.0),
            bandwidth: T::one(),
        }
    }
}

impl<T: Scalar> PowerConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.mu >= T::one()) || !self.mu.is_finite() {
            return Err(Error::param("mu", format!("{} must be >= 1", self.mu)));
        }
        if !(self.p_static > T::zero()) || !self.p_static.is_finite() {
            return Err(Error::param(
                "p_static",
                format!("{} must be > 0", self.p_static),
            ));
        }
        if !(self.bandwidth > T::zero()) || !self.bandwidth.is_finite() {
            return Err(Error::param(
                "bandwidth",
                format!("{} must be > 0", self.bandwidth),
            ));
        }
        Ok(())
    }
}

/// `mu P + P_C`.
pub fn total_power<T: Scalar>(power: T, pc: &PowerConfig<T>) -> T {
    pc.mu * power + pc.p_static
}

/// `B R / (mu P + P_C)` in bits per joule, for any spectral efficiency `R`.
pub fn energy_efficiency<T: Scalar>(se: T, power: T, pc: &PowerConfig<T>) -> T {
    pc.bandwidth * se / total_power(power, pc)
}

/// Energy efficiency with the high-SNR spectral efficiency `(ln P + C) / ln 2`.
pub fn energy_efficiency_log<T: Scalar>(constant: T, power: T, pc: &PowerConfig<T>) -> T {
    energy_efficiency((power.ln() + constant) / T::LN_2(), power, pc)
}

/// `C_AP = 2 ln eta + 2 ln sinc(delta_psi) - ln sigma2`, in nats.
pub fn c_ap<T: Scalar>(imp: &ImpairmentConfig<T>) -> Result<T> {
    let s = sinc(imp.delta_psi);
    if !(imp.eta > T::zero() && imp.sigma2 > T::zero() && s > T::zero()) {
        return Err(Error::Domain(format!(
            "C_AP needs eta > 0, sigma2 > 0 and sinc(delta_psi) > 0 (eta = {}, sigma2 = {}, sinc = {})",
            imp.eta, imp.sigma2, s
        )));
    }
    let two = T::lit(2.0);
    Ok(two * imp.eta.ln() + two * s.ln() - imp.sigma2.ln())
}

/// Ideal-hardware counterpart of [`c_ap`]: `ln(M N^2 |ab|^2) - ln sigma_u^2`.
pub fn c_ideal<T: Scalar>(cfg: &SystemConfig<T>) -> Result<T> {
    cfg.validate()?;
    let m = T::from_usize_lossy(cfg.ap_antennas);
    let n = T::from_usize_lossy(cfg.irs_elements);
    let gain = m * n * n * cfg.cascade_gain();
    if !(gain > T::zero()) {
        return Err(Error::Domain(
            "ideal array gain M N^2 |ab|^2 is zero".into(),
        ));
    }
    Ok(gain.ln() - cfg.noise_power.ln())
}

/// `g(P) = mu P (ln P + C - 1)`.
pub fn stationarity_lhs<T: Scalar>(constant: T, pc: &PowerConfig<T>, power: T) -> T {
    pc.mu * power * (power.ln() + constant - T::one())
}

/// `|g(P) - P_C| / P_C`.
pub fn stationarity_residual<T: Scalar>(constant: T, pc: &PowerConfig<T>, power: T) -> T {
    (stationarity_lhs(constant, pc, power) - pc.p_static).abs() / pc.p_static
}

/// The two closed forms in circulation for the optimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedForm {
    /// `P_C / (mu W0(e^(C-1) P_C / mu))`, obtained by solving `g(P) = P_C`.
    Stationarity,
    /// `mu W0(e^(C-1) P_C / mu) / P_C`.
    Inverted,
}

impl ClosedForm {
    pub fn label(self) -> &'static str {
        match self {
            ClosedForm::Stationarity => "p_c/(mu*W)",
            ClosedForm::Inverted => "mu*W/p_c",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormCandidate<T> {
    pub form: ClosedForm,
    pub power: T,
    pub residual: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalPowerResult<T> {
    /// EE-maximizing transmit power, watts.
    pub p_opt: T,
    /// Energy efficiency at `p_opt`, bits per joule.
    pub ee_opt: T,
    /// `|g(p_opt) - P_C| / P_C`.
    pub stationarity_residual: T,
    /// Rate constant `C` in nats (`C_AP` for impaired hardware).
    pub c_ap: T,
    /// Argument passed to `W0`.
    pub lambert_argument: T,
    pub selected: ClosedForm,
    pub candidates: [ClosedFormCandidate<T>; 2],
}

/// Accepted stationarity residual for a candidate closed form.
pub fn stationarity_tolerance<T: Scalar>() -> T {
    T::lit(1e-8).max(T::epsilon() * T::lit(100.0))
}

/// EE-optimal transmit power with impaired hardware.
pub fn optimal_power<T: Scalar>(
    imp: &ImpairmentConfig<T>,
    pc: &PowerConfig<T>,
) -> Result<OptimalPowerResult<T>> {
    imp.validate()?;
    optimal_power_for_constant(c_ap(imp)?, pc)
}

/// EE-optimal transmit power with ideal hardware (`C` from the array gain
/// and receiver noise). Pass the ideal-case static power in `pc`.
pub fn optimal_power_ideal<T: Scalar>(
    cfg: &SystemConfig<T>,
    pc: &PowerConfig<T>,
) -> Result<OptimalPowerResult<T>> {
    optimal_power_for_constant(c_ideal(cfg)?, pc)
}

/// Maximizer of `B (ln P + C) / (ln 2 (mu P + P_C))` over `P > 0`.
pub fn optimal_power_for_constant<T: Scalar>(
    constant: T,
    pc: &PowerConfig<T>,
) -> Result<OptimalPowerResult<T>> {
    pc.validate()?;
    if !constant.is_finite() {
        return Err(Error::Domain(format!(
            "rate constant C = {constant} is not finite"
        )));
    }
    let arg = (constant - T::one()).exp() * pc.p_static / pc.mu;
    if !arg.is_finite() {
        return Err(Error::Domain(format!(
            "Lambert W argument overflows for C = {constant}"
        )));
    }
    let w = lambert_w0(arg)?;
    let candidate = |form: ClosedForm| {
        let power = match form {
            ClosedForm::Stationarity => pc.p_static / (pc.mu * w),
            ClosedForm::Inverted => pc.mu * w / pc.p_static,
        };
        ClosedFormCandidate {
            form,
            power,
            residual: stationarity_residual(constant, pc, power),
        }
    };
    let candidates = [
        candidate(ClosedForm::Stationarity),
        candidate(ClosedForm::Inverted),
    ];
    let tol = stationarity_tolerance::<T>();
    let best = candidates
        .iter()
        .filter(|c| c.power > T::zero() && c.residual <= tol)
        .min_by(|a, b| {
            a.residual
                .partial_cmp(&b.residual)
                .expect("finite residuals")
        })
        .copied()
        .ok_or_else(|| Error::Convergence {
            what: "optimal_power stationarity",
            residual: candidates
                .iter()
                .map(|c| c.residual.to_f64_lossy())
                .fold(f64::INFINITY, f64::min),
        })?;

    let p = best.power;
    // g'(P) = mu (ln P + C) must be positive: unique root with positive rate
    let slope = pc.mu * (p.ln() + constant);
    if !(slope > T::zero()) {
        return Err(Error::Domain(format!(
            "stationary point P = {p} has nonpositive rate (ln P + C = {})",
            p.ln() + constant
        )));
    }
    Ok(OptimalPowerResult {
        p_opt: p,
        ee_opt: energy_efficiency_log(constant, p, pc),
        stationarity_residual: best.residual,
        c_ap: constant,
        lambert_argument: arg,
        selected: best.form,
        candidates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::se_high_snr;
    use std::f64::consts::{E, LN_10, PI};

    /// Bisection on the increasing function `g(P) - P_C`.
    fn bisect_power(c: f64, pc: &PowerConfig<f64>) -> f64 {
        let g = |p: f64| stationarity_lhs(c, pc, p) - pc.p_static;
        let mut lo = (1.0 - c).exp();
        let mut hi = lo.max(1.0);
        while g(hi) < 0.0 {
            hi *= 2.0;
        }
        for _ in 0..300 {
            let mid = 0.5 * (lo + hi);
            if mid == lo || mid == hi {
                break;
            }
            if g(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn power_model() {
        let pc = PowerConfig::<f64> {
            mu: 1.1,
            p_static: 10.0,
            bandwidth: 1.0,
        };
        assert_eq!(total_power(0.0, &pc), 10.0);
        assert!((total_power(1.0, &pc) - 11.1).abs() < 1e-12);
        assert!((total_power(3.0, &pc) - total_power(2.0, &pc) - 1.1).abs() < 1e-12);
        assert_eq!(energy_efficiency(0.0, 1.0, &pc), 0.0);
        let unit = PowerConfig {
            mu: 1.0,
            p_static: 1.0,
            bandwidth: 1.0,
        };
        assert_eq!(energy_efficiency(1.0, 1.0, &unit), 0.5);
        // high-SNR EE at P = 1 with default impairments, frozen from a 40-digit evaluation
        let imp = ImpairmentConfig::default();
        let ee: f64 = energy_efficiency(se_high_snr(&imp, 1.0).unwrap(), 1.0, &pc);
        assert!((ee - 0.270_563_784_083_768_4).abs() < 1e-12);
    }

    #[test]
    fn rate_constant_values() {
        let mut imp = ImpairmentConfig {
            eta: 1.0,
            delta_psi: 0.0,
            sigma2: 1.0,
            delta_theta_hat: 0.0,
        };
        assert_eq!(c_ap(&imp).unwrap(), 0.0);
        imp.sigma2 = 0.1;
        assert!((c_ap(&imp).unwrap() - LN_10).abs() < 1e-14);
        let def = ImpairmentConfig::<f64>::default();
        assert!((c_ap(&def).unwrap() - 2.081_699_817_502_162).abs() < 1e-13);
        imp.sigma2 = 0.0;
        assert!(matches!(c_ap(&imp), Err(Error::Domain(_))));
        let cfg = SystemConfig::<f64>::default();
        assert!((c_ideal(&cfg).unwrap() - 7.401_475_434_845_189).abs() < 1e-12);
    }

    #[test]
    fn fixed_point_by_inspection() {
        let pc = PowerConfig {
            mu: 1.0,
            p_static: E,
            bandwidth: 1.0,
        };
        let r = optimal_power_for_constant(1.0, &pc).unwrap();
        assert!((r.p_opt - E).abs() < 1e-12);
        assert_eq!(r.selected, ClosedForm::Stationarity);
    }

    #[test]
    fn default_optimum_matches_bisection() {
        let imp = ImpairmentConfig::<f64>::default();
        let pc = PowerConfig::default();
        let r = optimal_power(&imp, &pc).unwrap();
        let oracle = bisect_power(c_ap(&imp).unwrap(), &pc);
        assert!((r.p_opt - oracle).abs() / oracle < 1e-10);
        assert!((r.p_opt - 3.772_882_830_931_361).abs() < 1e-10);
        assert!(r.stationarity_residual <= 1e-8);
        assert_eq!(r.selected, ClosedForm::Stationarity);
        let inverted = r.candidates[1];
        assert_eq!(inverted.form, ClosedForm::Inverted);
        assert!(inverted.residual > 0.5);
        assert!((r.ee_opt - 0.347_623_025_955_176_9).abs() < 1e-12);
        // same value through the spectral-efficiency route
        let ee = energy_efficiency(se_high_snr(&imp, r.p_opt).unwrap(), r.p_opt, &pc);
        assert!((ee - r.ee_opt).abs() < 1e-14);
    }

    #[test]
    fn optimum_beats_log_grid() {
        let imp = ImpairmentConfig::<f64>::default();
        let pc = PowerConfig::default();
        let r = optimal_power(&imp, &pc).unwrap();
        let c = r.c_ap;
        for i in 0..=200 {
            let p = r.p_opt * 10f64.powf(-1.0 + 2.0 * i as f64 / 200.0);
            assert!(energy_efficiency_log(c, p, &pc) <= r.ee_opt + 1e-15);
        }
    }

    #[test]
    fn ideal_optimum() {
        let cfg = SystemConfig::<f64>::default();
        let pc = PowerConfig::default();
        let r = optimal_power_ideal(&cfg, &pc).unwrap();
        let oracle = bisect_power(c_ideal(&cfg).unwrap(), &pc);
        assert!((r.p_opt - oracle).abs() / oracle < 1e-10);
        assert!((r.p_opt - 1.355_682_484_783_14).abs() < 1e-10);
        for i in 0..=100 {
            let p = r.p_opt * 10f64.powf(-1.0 + 2.0 * i as f64 / 100.0);
            assert!(energy_efficiency_log(r.c_ap, p, &pc) <= r.ee_opt + 1e-15);
        }
    }

    #[test]
    fn worse_hardware_needs_more_power() {
        let pc = PowerConfig::<f64>::default();
        let base = ImpairmentConfig::<f64>::default();
        let good = optimal_power(&base, &pc).unwrap();
        let bad = optimal_power(
            &ImpairmentConfig {
                eta: 0.7,
                delta_psi: PI / 6.0,
                ..base
            },
            &pc,
        )
        .unwrap();
        assert!(bad.p_opt > good.p_opt);
        assert!(bad.ee_opt < good.ee_opt);
    }

    #[test]
    fn invalid_power_config() {
        let imp = ImpairmentConfig::<f64>::default();
        for pc in [
            PowerConfig {
                mu: 0.9,
                ..Default::default()
            },
            PowerConfig {
                p_static: 0.0,
                ..Default::default()
            },
            PowerConfig {
                bandwidth: -1.0,
                ..Default::default()
            },
        ] {
            assert!(matches!(
                optimal_power(&imp, &pc),
                Err(Error::InvalidParameter { .. })
            ));
        }
    }
}
