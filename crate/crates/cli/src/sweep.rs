//! Parameter sweeps producing tidy CSV rows.

use std::io::Write;

use irs_core::energy::energy_efficiency;
use irs_core::{
    monte_carlo_se, se_asymptotic, se_high_snr, se_ideal, se_upper_bound, PowerConfig, SystemConfig,
};
use rayon::prelude::*;

use crate::config::RunConfig;

pub const CSV_HEADER: [&str; 6] = [
    "sweep_value",
    "scenario",
    "metric",
    "value",
    "std_error",
    "trials",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    TransmitPowerDb,
    TransmitPowerLinear,
    IrsElements,
}

impl SweepVariable {
    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::TransmitPowerDb => "transmit_power_db",
            SweepVariable::TransmitPowerLinear => "transmit_power_linear",
            SweepVariable::IrsElements => "irs_elements",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Se,
    Ee,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::Se => "se",
            Metric::Ee => "ee",
        }
    }
}

/// Denominator of the SNR axis for dB sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SnrReference {
    /// `P / sigma_u^2` (receiver noise).
    Noise,
    /// `P / sigma2` (transmitter distortion).
    Distortion,
}

impl SnrReference {
    pub fn name(self) -> &'static str {
        match self {
            SnrReference::Noise => "noise",
            SnrReference::Distortion => "distortion",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Geometric,
}

impl Spacing {
    pub fn name(self) -> &'static str {
        match self {
            Spacing::Linear => "linear",
            Spacing::Geometric => "geometric",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FixedPower {
    Linear(f64),
    Db(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    NonidealMc,
    NonidealClosed,
    Ideal,
    HighSnr,
    UpperBound,
}

impl Scenario {
    pub const ALL: [Scenario; 5] = [
        Scenario::NonidealMc,
        Scenario::NonidealClosed,
        Scenario::Ideal,
        Scenario::HighSnr,
        Scenario::UpperBound,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::NonidealMc => "nonideal_mc",
            Scenario::NonidealClosed => "nonideal_closed",
            Scenario::Ideal => "ideal",
            Scenario::HighSnr => "high_snr",
            Scenario::UpperBound => "upper_bound",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.name() == name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub metric: Metric,
    /// Sweep values in the unit of `variable` (dB, watts or element count).
    pub values: Vec<f64>,
    pub scenarios: Vec<Scenario>,
    pub snr_reference: Option<SnrReference>,
    pub fixed_power: Option<FixedPower>,
    /// Spacing used to expand start/stop/steps; kept for the manifest.
    pub spacing: Spacing,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub sweep_value: f64,
    pub scenario: Scenario,
    pub metric: Metric,
    pub value: f64,
    pub std_error: Option<f64>,
    pub trials: Option<usize>,
}

fn db_to_power(db: f64, reference: SnrReference, cfg: &RunConfig) -> f64 {
    let denom = match reference {
        SnrReference::Noise => cfg.system.noise_power,
        SnrReference::Distortion => cfg.impairments.sigma2,
    };
    denom * 10f64.powf(db / 10.0)
}

/// System configuration and transmit power at one sweep point.
pub fn resolve_point(cfg: &RunConfig, spec: &SweepSpec, value: f64) -> (SystemConfig, f64) {
    let reference = spec.snr_reference.unwrap_or(SnrReference::Noise);
    let fixed = || match spec.fixed_power {
        Some(FixedPower::Linear(p)) => p,
        Some(FixedPower::Db(db)) => db_to_power(db, reference, cfg),
        None => 1.0,
    };
    match spec.variable {
        SweepVariable::TransmitPowerDb => (cfg.system.clone(), db_to_power(value, reference, cfg)),
        SweepVariable::TransmitPowerLinear => (cfg.system.clone(), value),
        SweepVariable::IrsElements => {
            let mut sys = cfg.system.clone();
            sys.irs_elements = value as usize;
            (sys, fixed())
        }
    }
}

/// Evaluates every scenario at every sweep point.
///
/// Monte Carlo points all reuse `seed`, so neighbouring points see the same
/// phase draws and curves stay smooth.
pub fn run_sweep(
    cfg: &RunConfig,
    spec: &SweepSpec,
    trials: usize,
    seed: u64,
) -> irs_core::Result<Vec<SweepRow>> {
    let per_point: Vec<irs_core::Result<Vec<SweepRow>>> = spec
        .values
        .par_iter()
        .map(|&v| {
            let (sys, power) = resolve_point(cfg, spec, v);
            spec.scenarios
                .iter()
                .map(|&sc| {
                    evaluate(cfg, spec.metric, &sys, power, sc, trials, seed).map(
                        |(value, se, n)| SweepRow {
                            sweep_value: v,
                            scenario: sc,
                            metric: spec.metric,
                            value,
                            std_error: se,
                            trials: n,
                        },
                    )
                })
                .collect()
        })
        .collect();
    let mut rows = Vec::with_capacity(spec.values.len() * spec.scenarios.len());
    for r in per_point {
        rows.extend(r?);
    }
    Ok(rows)
}

type Evaluated = (f64, Option<f64>, Option<usize>);

fn evaluate(
    cfg: &RunConfig,
    metric: Metric,
    sys: &SystemConfig,
    power: f64,
    scenario: Scenario,
    trials: usize,
    seed: u64,
) -> irs_core::Result<Evaluated> {
    let imp = &cfg.impairments;
    let (se, std_error, n) = match scenario {
        Scenario::NonidealMc => {
            let mc = monte_carlo_se(sys, imp, power, trials, seed)?;
            (mc.mean_se, Some(mc.std_error), Some(trials))
        }
        Scenario::NonidealClosed => (se_asymptotic(sys, imp, power)?, None, None),
        Scenario::Ideal => (se_ideal(sys, power)?, None, None),
        Scenario::HighSnr => (se_high_snr(imp, power)?, None, None),
        Scenario::UpperBound => (se_upper_bound(imp, power)?, None, None),
    };
    Ok(match metric {
        Metric::Se => (se, std_error, n),
        Metric::Ee => {
            let pc = scenario_power(cfg, scenario);
            let scale = energy_efficiency(1.0, power, &pc);
            (se * scale, std_error.map(|s| s * scale), n)
        }
    })
}

/// Power model for a scenario; ideal hardware uses its own static power.
pub fn scenario_power(cfg: &RunConfig, scenario: Scenario) -> PowerConfig {
    match scenario {
        Scenario::Ideal => PowerConfig {
            p_static: cfg.p_static_ideal,
            ..cfg.power
        },
        _ => cfg.power,
    }
}

fn format_sweep_value(variable: SweepVariable, v: f64) -> String {
    match variable {
        SweepVariable::IrsElements => format!("{}", v as usize),
        _ => format!("{v}"),
    }
}

pub fn write_csv<W: Write>(out: W, variable: SweepVariable, rows: &[SweepRow]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            format_sweep_value(variable, r.sweep_value),
            r.scenario.name().to_string(),
            r.metric.name().to_string(),
            format!("{}", r.value),
            r.std_error.map(|s| format!("{s}")).unwrap_or_default(),
            r.trials.map(|t| t.to_string()).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(variable: SweepVariable, values: Vec<f64>, scenarios: Vec<Scenario>) -> SweepSpec {
        SweepSpec {
            variable,
            metric: Metric::Se,
            values,
            scenarios,
            snr_reference: Some(SnrReference::Noise),
            fixed_power: Some(FixedPower::Linear(1.0)),
            spacing: Spacing::Linear,
        }
    }

    #[test]
    fn db_axis_follows_reference() {
        let cfg = RunConfig::default();
        let mut s = spec(
            SweepVariable::TransmitPowerDb,
            vec![10.0, 20.0],
            vec![Scenario::Ideal],
        );
        let (_, p) = resolve_point(&cfg, &s, 10.0);
        assert!((p - 1.0).abs() < 1e-12);
        s.snr_reference = Some(SnrReference::Distortion);
        let (_, p) = resolve_point(&cfg, &s, 20.0);
        assert!((p - 10.0).abs() < 1e-12);
    }

    #[test]
    fn element_sweep_changes_n_only() {
        let cfg = RunConfig::default();
        let s = spec(
            SweepVariable::IrsElements,
            vec![16.0, 256.0],
            vec![Scenario::Ideal],
        );
        let (sys, p) = resolve_point(&cfg, &s, 256.0);
        assert_eq!(sys.irs_elements, 256);
        assert_eq!(sys.ap_antennas, cfg.system.ap_antennas);
        assert_eq!(p, 1.0);
    }

    #[test]
    fn csv_layout() {
        let cfg = RunConfig::default();
        let s = spec(
            SweepVariable::TransmitPowerLinear,
            vec![1.0, 2.0],
            vec![Scenario::NonidealMc, Scenario::HighSnr],
        );
        let rows = run_sweep(&cfg, &s, 50, 3).unwrap();
        assert_eq!(rows.len(), 4);
        let mut buf = Vec::new();
        write_csv(&mut buf, s.variable, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(
            lines[0],
            "sweep_value,scenario,metric,value,std_error,trials"
        );
        assert!(lines[1].starts_with("1,nonideal_mc,se,"));
        assert!(lines[1].ends_with(",50"));
        assert!(lines[2].starts_with("1,high_snr,se,3.0032580033298"));
        assert!(lines[2].ends_with(",,"));
    }

    #[test]
    fn ee_uses_scenario_static_power() {
        let cfg = RunConfig {
            p_static_ideal: 5.0,
            ..Default::default()
        };
        let mut s = spec(
            SweepVariable::TransmitPowerLinear,
            vec![1.0, 2.0],
            vec![Scenario::Ideal, Scenario::HighSnr],
        );
        s.metric = Metric::Ee;
        let rows = run_sweep(&cfg, &s, 10, 0).unwrap();
        let se_ideal = se_ideal(&cfg.system, 1.0).unwrap();
        assert!((rows[0].value - se_ideal / (1.1 + 5.0)).abs() < 1e-12);
        let hs = se_high_snr(&cfg.impairments, 1.0).unwrap();
        assert!((rows[1].value - hs / (1.1 + 10.0)).abs() < 1e-12);
    }
}
