//! Run manifests: the fully resolved configuration plus run metadata, in a
//! form that loads back as a config file.

use toml::{Table, Value};

use crate::config::RunConfig;
use crate::sweep::{FixedPower, SweepSpec, SweepVariable};

#[derive(Debug, Clone)]
pub struct RunInfo {
    pub seed: u64,
    pub trials: usize,
    pub command: String,
}

fn float(x: f64) -> Value {
    Value::Float(x)
}

fn complex(z: irs_core::Complex) -> Value {
    Value::Array(vec![float(z.re), float(z.im)])
}

fn strings<'a>(items: impl IntoIterator<Item = &'a str>) -> Value {
    Value::Array(
        items
            .into_iter()
            .map(|s| Value::String(s.to_string()))
            .collect(),
    )
}

/// `[system]`, `[impairments]`, `[power]` and `[sweep]` with every value
/// spelled out; angles in radians.
pub fn config_table(cfg: &RunConfig) -> Table {
    let mut root = Table::new();

    let s = &cfg.system;
    let mut sys = Table::new();
    sys.insert("ap_antennas".into(), Value::Integer(s.ap_antennas as i64));
    sys.insert("irs_elements".into(), Value::Integer(s.irs_elements as i64));
    sys.insert("alpha".into(), complex(s.alpha));
    sys.insert("beta".into(), complex(s.beta));
    sys.insert("spacing_ratio".into(), float(s.spacing_ratio));
    sys.insert("noise_power".into(), float(s.noise_power));
    for (base, a) in [
        ("aoa_irs", s.aoa_irs),
        ("aod_ap", s.aod_ap),
        ("aod_irs", s.aod_irs),
    ] {
        sys.insert(format!("{base}_azimuth_rad"), float(a.azimuth));
        sys.insert(format!("{base}_elevation_rad"), float(a.elevation));
    }
    root.insert("system".into(), Value::Table(sys));

    let i = &cfg.impairments;
    let mut imp = Table::new();
    imp.insert("eta".into(), float(i.eta));
    imp.insert("delta_psi_rad".into(), float(i.delta_psi));
    imp.insert("sigma2".into(), float(i.sigma2));
    imp.insert("delta_theta_hat_rad".into(), float(i.delta_theta_hat));
    root.insert("impairments".into(), Value::Table(imp));

    let mut pw = Table::new();
    pw.insert("mu".into(), float(cfg.power.mu));
    pw.insert("p_static".into(), float(cfg.power.p_static));
    pw.insert("p_static_ideal".into(), float(cfg.p_static_ideal));
    pw.insert("bandwidth".into(), float(cfg.power.bandwidth));
    root.insert("power".into(), Value::Table(pw));

    if let Some(sweep) = &cfg.sweep {
        root.insert("sweep".into(), Value::Table(sweep_table(sweep)));
    }
    root
}

fn sweep_table(sw: &SweepSpec) -> Table {
    let mut t = Table::new();
    t.insert("variable".into(), Value::String(sw.variable.name().into()));
    t.insert("metric".into(), Value::String(sw.metric.name().into()));
    t.insert("spacing".into(), Value::String(sw.spacing.name().into()));
    let values = sw
        .values
        .iter()
        .map(|&v| match sw.variable {
            SweepVariable::IrsElements => Value::Integer(v as i64),
            _ => float(v),
        })
        .collect();
    t.insert("values".into(), Value::Array(values));
    t.insert(
        "scenarios".into(),
        strings(sw.scenarios.iter().map(|s| s.name())),
    );
    if let Some(r) = sw.snr_reference {
        t.insert("snr_reference".into(), Value::String(r.name().into()));
    }
    match sw.fixed_power {
        Some(FixedPower::Linear(p)) => {
            t.insert("power".into(), float(p));
        }
        Some(FixedPower::Db(db)) => {
            t.insert("power_db".into(), float(db));
        }
        None => {}
    }
    t
}

pub fn render(cfg: &RunConfig, info: &RunInfo) -> String {
    let mut meta = Table::new();
    meta.insert(
        "tool_version".into(),
        Value::String(env!("CARGO_PKG_VERSION").into()),
    );
    meta.insert(
        "timestamp".into(),
        Value::String(chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)),
    );
    meta.insert(
        "seed".into(),
        match i64::try_from(info.seed) {
            Ok(s) => Value::Integer(s),
            Err(_) => Value::String(info.seed.to_string()),
        },
    );
    meta.insert("trials".into(), Value::Integer(info.trials as i64));
    meta.insert("command".into(), Value::String(info.command.clone()));
    meta.insert(
        "defaults_not_in_source".into(),
        strings(cfg.defaulted.iter().copied()),
    );

    let mut root = Table::new();
    root.insert("manifest".into(), Value::Table(meta));
    root.extend(config_table(cfg));
    root.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_round_trips() {
        let src = "[system]\nalpha = [0.1, 0.03]\naoa_irs_azimuth_deg = 37.3\n[impairments]\ndelta_psi_deg = 7\n[sweep]\nvariable = \"transmit_power_db\"\nstart = -10\nstop = 40\nsteps = 7\nsnr_reference = \"noise\"\nscenarios = [\"ideal\", \"nonideal_mc\"]\n";
        let cfg = RunConfig::parse(src).unwrap();
        let text = render(
            &cfg,
            &RunInfo {
                seed: u64::MAX,
                trials: 123,
                command: "irs-sim sweep".into(),
            },
        );
        let back = RunConfig::parse(&text).unwrap();
        assert_eq!(back.system, cfg.system);
        assert_eq!(back.impairments, cfg.impairments);
        assert_eq!(back.power, cfg.power);
        assert_eq!(back.sweep, cfg.sweep);
        assert_eq!(back.defaulted, cfg.defaulted);
        let m = back.manifest.unwrap();
        assert_eq!(m.seed, Some(u64::MAX));
        assert_eq!(m.trials, Some(123));
    }
}
