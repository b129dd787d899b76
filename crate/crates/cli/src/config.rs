//! Run configuration files.
//!
//! Flat TOML with the sections `[system]`, `[impairments]`, `[power]` and
//! `[sweep]` (plus `[manifest]` when a run manifest is fed back in). Every
//! key is optional except where the sweep needs it; missing keys take the
//! reference parameter set. Angles must carry an explicit `_deg` or `_rad`
//! suffix, and unknown keys are rejected.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt;
use std::path::Path;

use irs_core::geometry::Angles;
use irs_core::{Complex, ImpairmentConfig, PowerConfig, SystemConfig};
use thiserror::Error;
use toml::{Table, Value};

use crate::sweep::{FixedPower, Metric, Scenario, SnrReference, Spacing, SweepSpec, SweepVariable};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("config parse error{}: {message}", line_suffix(*.line))]
    Syntax {
        line: Option<usize>,
        message: String,
    },
    #[error("config error{} at key `{key}`: {message}", line_suffix(*.line))]
    Key {
        line: Option<usize>,
        key: String,
        message: String,
    },
}

fn line_suffix(line: Option<usize>) -> String {
    line.map(|l| format!(" (line {l})")).unwrap_or_default()
}

/// Everything a command needs, with defaults resolved.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub system: SystemConfig,
    pub impairments: ImpairmentConfig,
    pub power: PowerConfig,
    /// Static power used for the ideal-hardware scenarios.
    pub p_static_ideal: f64,
    pub sweep: Option<SweepSpec>,
    /// Seed and trial count recorded in a manifest, if the input was one.
    pub manifest: Option<ManifestSettings>,
    /// Keys without a reference value that were filled from built-in defaults.
    pub defaulted: Vec<&'static str>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ManifestSettings {
    pub seed: Option<u64>,
    pub trials: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let power = PowerConfig::default();
        Self {
            system: SystemConfig::default(),
            impairments: ImpairmentConfig::default(),
            p_static_ideal: power.p_static,
            power,
            sweep: None,
            manifest: None,
            defaulted: OMITTED_DEFAULTS.to_vec(),
            warnings: Vec::new(),
        }
    }
}

/// Parameters the reference scenario leaves open; their built-in values are
/// flagged in every manifest that relies on them.
pub const OMITTED_DEFAULTS: [&str; 7] = [
    "system.spacing_ratio",
    "system.noise_power",
    "system.aoa_irs",
    "system.aod_ap",
    "system.aod_irs",
    "power.p_static",
    "power.bandwidth",
];

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let src = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&src)
    }

    pub fn parse(src: &str) -> Result<Self, ConfigError> {
        let table: Table = src
            .parse()
            .map_err(|e: toml::de::Error| ConfigError::Syntax {
                line: e.span().map(|s| line_of_offset(src, s.start)),
                message: e.message().to_string(),
            })?;
        let ctx = Ctx { src };
        for (name, value) in &table {
            if !matches!(
                name.as_str(),
                "system" | "impairments" | "power" | "sweep" | "manifest"
            ) {
                return Err(ctx.key_err(None, name, "unknown section"));
            }
            if !value.is_table() {
                return Err(ctx.key_err(None, name, "expected a [section]"));
            }
        }
        let mut cfg = RunConfig::default();
        let mut set_by_user = BTreeSet::new();

        let mut s = Section::new(&ctx, &table, "system");
        let sys = &mut cfg.system;
        if let Some(v) = s.usize("ap_antennas")? {
            sys.ap_antennas = v;
        }
        if let Some(v) = s.usize("irs_elements")? {
            sys.irs_elements = v;
        }
        if let Some(v) = s.complex("alpha")? {
            sys.alpha = v;
        }
        if let Some(v) = s.complex("beta")? {
            sys.beta = v;
        }
        if let Some(v) = s.f64("spacing_ratio")? {
            sys.spacing_ratio = v;
            set_by_user.insert("system.spacing_ratio");
        }
        if let Some(v) = s.f64("noise_power")? {
            sys.noise_power = v;
            set_by_user.insert("system.noise_power");
        }
        for (base, slot, flag) in [
            ("aoa_irs", &mut sys.aoa_irs, "system.aoa_irs"),
            ("aod_ap", &mut sys.aod_ap, "system.aod_ap"),
            ("aod_irs", &mut sys.aod_irs, "system.aod_irs"),
        ] {
            let az = s.angle(&format!("{base}_azimuth"))?;
            let el = s.angle(&format!("{base}_elevation"))?;
            if az.is_some() || el.is_some() {
                set_by_user.insert(flag);
            }
            *slot = Angles::new(az.unwrap_or(slot.azimuth), el.unwrap_or(slot.elevation));
            if !slot.in_principal_range() {
                cfg.warnings.push(format!(
                    "{base} angles ({:.4}, {:.4}) rad lie outside [0, 2pi)",
                    slot.azimuth, slot.elevation
                ));
            }
        }
        s.finish()?;
        sys.validate()
            .map_err(|e| ctx.key_err(Some("system"), "system", &e.to_string()))?;

        let mut s = Section::new(&ctx, &table, "impairments");
        let imp = &mut cfg.impairments;
        if let Some(v) = s.f64("eta")? {
            imp.eta = v;
        }
        if let Some(v) = s.angle("delta_psi")? {
            imp.delta_psi = v;
        }
        if let Some(v) = s.f64("sigma2")? {
            imp.sigma2 = v;
        }
        if let Some(v) = s.angle("delta_theta_hat")? {
            imp.delta_theta_hat = v;
        }
        s.finish()?;
        imp.validate()
            .map_err(|e| ctx.key_err(Some("impairments"), "impairments", &e.to_string()))?;

        let mut s = Section::new(&ctx, &table, "power");
        if let Some(v) = s.f64("mu")? {
            cfg.power.mu = v;
        }
        if let Some(v) = s.f64("p_static")? {
            cfg.power.p_static = v;
            set_by_user.insert("power.p_static");
        }
        cfg.p_static_ideal = s.f64("p_static_ideal")?.unwrap_or(cfg.power.p_static);
        if let Some(v) = s.f64("bandwidth")? {
            cfg.power.bandwidth = v;
            set_by_user.insert("power.bandwidth");
        }
        s.finish()?;
        cfg.power
            .validate()
            .map_err(|e| ctx.key_err(Some("power"), "power", &e.to_string()))?;
        if !(cfg.p_static_ideal > 0.0) {
            return Err(ctx.key_err(Some("power"), "power.p_static_ideal", "must be > 0"));
        }

        if table.contains_key("sweep") {
            let mut s = Section::new(&ctx, &table, "sweep");
            cfg.sweep = Some(parse_sweep(&mut s, &cfg)?);
            s.finish()?;
        }

        if table.contains_key("manifest") {
            let mut s = Section::new(&ctx, &table, "manifest");
            let seed = s.u64("seed")?;
            let trials = s.usize("trials")?;
            for k in ["tool_version", "timestamp", "command"] {
                s.skip(k);
            }
            if let Some(list) = s.string_list("defaults_not_in_source")? {
                // a reloaded manifest spells every key out; keep the original flags
                set_by_user.extend(
                    OMITTED_DEFAULTS
                        .iter()
                        .filter(|k| !list.iter().any(|l| l == *k)),
                );
                set_by_user.retain(|k| !list.iter().any(|l| l == k));
            }
            s.finish()?;
            cfg.manifest = Some(ManifestSettings { seed, trials });
        }

        cfg.defaulted = OMITTED_DEFAULTS
            .iter()
            .copied()
            .filter(|k| !set_by_user.contains(k))
            .collect();
        Ok(cfg)
    }
}

fn parse_sweep(s: &mut Section<'_>, cfg: &RunConfig) -> Result<SweepSpec, ConfigError> {
    let variable = match s.string("variable")?.as_deref() {
        Some("transmit_power_db") => SweepVariable::TransmitPowerDb,
        Some("transmit_power_linear") => SweepVariable::TransmitPowerLinear,
        Some("irs_elements") => SweepVariable::IrsElements,
        Some(other) => {
            return Err(s.err(
                "variable",
                &format!(
                    "unknown sweep variable `{other}` (transmit_power_db, transmit_power_linear, irs_elements)"
                ),
            ))
        }
        None => return Err(s.err("variable", "required")),
    };
    let metric = match s.string("metric")?.as_deref() {
        None | Some("se") => Metric::Se,
        Some("ee") => Metric::Ee,
        Some(other) => return Err(s.err("metric", &format!("unknown metric `{other}` (se, ee)"))),
    };
    let snr_reference = match s.string("snr_reference")?.as_deref() {
        None => None,
        Some("noise") => Some(SnrReference::Noise),
        Some("distortion") => Some(SnrReference::Distortion),
        Some(other) => {
            return Err(s.err(
                "snr_reference",
                &format!("unknown reference `{other}` (noise, distortion)"),
            ))
        }
    };
    let spacing = match s.string("spacing")?.as_deref() {
        None => match variable {
            SweepVariable::IrsElements => Spacing::Geometric,
            _ => Spacing::Linear,
        },
        Some("linear") => Spacing::Linear,
        Some("geometric") | Some("log") => Spacing::Geometric,
        Some(other) => {
            return Err(s.err(
                "spacing",
                &format!("unknown spacing `{other}` (linear, geometric)"),
            ))
        }
    };

    let scenarios = match s.string_list("scenarios")? {
        None => return Err(s.err("scenarios", "required")),
        Some(list) if list.is_empty() => return Err(s.err("scenarios", "must not be empty")),
        Some(list) => list
            .iter()
            .map(|name| {
                Scenario::from_name(name).ok_or_else(|| {
                    s.err(
                        "scenarios",
                        &format!(
                            "unknown scenario `{name}` (nonideal_mc, nonideal_closed, ideal, high_snr, upper_bound)"
                        ),
                    )
                })
            })
            .collect::<Result<Vec<_>, _>>()?,
    };

    let values = match s.f64_list("values")? {
        Some(v) => {
            if v.len() < 2 {
                return Err(s.err("values", "need at least 2 sweep values"));
            }
            for w in v.windows(2) {
                if !(w[0] < w[1]) {
                    return Err(s.err("values", "must be strictly increasing"));
                }
            }
            for k in ["start", "stop", "steps"] {
                if s.has(k) {
                    return Err(s.err(k, "give either `values` or start/stop/steps, not both"));
                }
            }
            v
        }
        None => {
            let start = s.f64("start")?.ok_or_else(|| s.err("start", "required"))?;
            let stop = s.f64("stop")?.ok_or_else(|| s.err("stop", "required"))?;
            let steps = s
                .usize("steps")?
                .ok_or_else(|| s.err("steps", "required"))?;
            if !(start < stop) {
                return Err(s.err("stop", "start must be < stop"));
            }
            if steps < 2 {
                return Err(s.err("steps", "must be >= 2"));
            }
            if spacing == Spacing::Geometric && !(start > 0.0) {
                return Err(s.err("start", "geometric spacing needs start > 0"));
            }
            grid(start, stop, steps, spacing)
        }
    };

    let values = if variable == SweepVariable::IrsElements {
        let mut out = Vec::with_capacity(values.len());
        for v in values {
            let n = v.round();
            let ok = n >= 1.0
                && (v - n).abs() < 1e-6 * n.max(1.0)
                && irs_core::geometry::square_side(n as usize, "irs_elements").is_ok();
            if !ok {
                return Err(s.err(
                    "values",
                    &format!("IRS element count {v} is not a perfect square"),
                ));
            }
            out.push(n);
        }
        out
    } else {
        values
    };
    if variable == SweepVariable::TransmitPowerLinear && values.iter().any(|&v| !(v > 0.0)) {
        return Err(s.err("start", "transmit power must be > 0"));
    }

    let fixed_power = match (s.f64("power")?, s.f64("power_db")?) {
        (Some(_), Some(_)) => return Err(s.err("power_db", "give either `power` or `power_db`")),
        (Some(p), None) => Some(FixedPower::Linear(p)),
        (None, Some(db)) => Some(FixedPower::Db(db)),
        (None, None) => None,
    };
    match variable {
        SweepVariable::TransmitPowerDb => {
            if snr_reference.is_none() {
                return Err(s.err(
                    "snr_reference",
                    "required for dB power sweeps: `noise` (P / sigma_u^2) or `distortion` (P / sigma2)",
                ));
            }
            if fixed_power.is_some() {
                return Err(s.err("power", "not used when sweeping the transmit power"));
            }
        }
        SweepVariable::TransmitPowerLinear => {
            if fixed_power.is_some() {
                return Err(s.err("power", "not used when sweeping the transmit power"));
            }
        }
        SweepVariable::IrsElements => match fixed_power {
            None => return Err(s.err("power", "element sweeps need `power` or `power_db`")),
            Some(FixedPower::Db(_)) if snr_reference.is_none() => {
                return Err(s.err("snr_reference", "required with `power_db`"))
            }
            Some(FixedPower::Linear(p)) if !(p > 0.0) => return Err(s.err("power", "must be > 0")),
            _ => {}
        },
    }
    if snr_reference == Some(SnrReference::Distortion) && !(cfg.impairments.sigma2 > 0.0) {
        return Err(s.err(
            "snr_reference",
            "`distortion` reference needs impairments.sigma2 > 0",
        ));
    }

    Ok(SweepSpec {
        variable,
        metric,
        values,
        scenarios,
        snr_reference,
        fixed_power,
        spacing,
    })
}

fn grid(start: f64, stop: f64, steps: usize, spacing: Spacing) -> Vec<f64> {
    let last = (steps - 1) as f64;
    (0..steps)
        .map(|i| {
            let t = i as f64 / last;
            match spacing {
                Spacing::Linear => start + (stop - start) * t,
                Spacing::Geometric => start * (stop / start).powf(t),
            }
        })
        .map(|v| if v.is_finite() { v } else { stop })
        .collect()
}

struct Ctx<'a> {
    src: &'a str,
}

impl Ctx<'_> {
    fn key_err(&self, section: Option<&str>, key: &str, message: &str) -> ConfigError {
        let (line, full) = match section {
            Some(sec) if sec != key => (locate_key(self.src, sec, key), format!("{sec}.{key}")),
            Some(sec) => (locate_section(self.src, sec), key.to_string()),
            None => (locate_section(self.src, key), key.to_string()),
        };
        ConfigError::Key {
            line,
            key: full,
            message: message.to_string(),
        }
    }
}

struct Section<'a> {
    ctx: &'a Ctx<'a>,
    name: &'static str,
    table: Option<&'a Table>,
    used: BTreeSet<String>,
}

impl<'a> Section<'a> {
    fn new(ctx: &'a Ctx<'a>, root: &'a Table, name: &'static str) -> Self {
        Self {
            ctx,
            name,
            table: root.get(name).and_then(Value::as_table),
            used: BTreeSet::new(),
        }
    }

    fn err(&self, key: &str, message: &str) -> ConfigError {
        self.ctx.key_err(Some(self.name), key, message)
    }

    fn has(&self, key: &str) -> bool {
        self.table.is_some_and(|t| t.contains_key(key))
    }

    fn skip(&mut self, key: &str) {
        self.used.insert(key.to_string());
    }

    fn get(&mut self, key: &str) -> Option<&'a Value> {
        self.used.insert(key.to_string());
        self.table.and_then(|t| t.get(key))
    }

    fn f64(&mut self, key: &str) -> Result<Option<f64>, ConfigError> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => as_f64(v)
                .filter(|x| x.is_finite())
                .map(Some)
                .ok_or_else(|| self.err(key, &format!("expected a finite number, got {v}"))),
        }
    }

    fn usize(&mut self, key: &str) -> Result<Option<usize>, ConfigError> {
        match self.get(key) {
            None => Ok(None),
            Some(Value::Integer(i)) if *i >= 0 => Ok(Some(*i as usize)),
            Some(v) => Err(self.err(key, &format!("expected a nonnegative integer, got {v}"))),
        }
    }

    fn u64(&mut self, key: &str) -> Result<Option<u64>, ConfigError> {
        match self.get(key) {
            None => Ok(None),
            Some(Value::Integer(i)) => Ok(Some(*i as u64)),
            Some(Value::String(s)) => s
                .parse()
                .map(Some)
                .map_err(|_| self.err(key, &format!("expected an unsigned integer, got {s}"))),
            Some(v) => Err(self.err(key, &format!("expected an integer, got {v}"))),
        }
    }

    fn string(&mut self, key: &str) -> Result<Option<String>, ConfigError> {
        match self.get(key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s.clone())),
            Some(v) => Err(self.err(key, &format!("expected a string, got {v}"))),
        }
    }

    fn string_list(&mut self, key: &str) -> Result<Option<Vec<String>>, ConfigError> {
        match self.get(key) {
            None => Ok(None),
            Some(Value::Array(items)) => items
                .iter()
                .map(|v| match v {
                    Value::String(s) => Ok(s.clone()),
                    other => Err(self.err(key, &format!("expected strings, got {other}"))),
                })
                .collect::<Result<Vec<_>, _>>()
                .map(Some),
            Some(Value::String(s)) => Ok(Some(vec![s.clone()])),
            Some(v) => Err(self.err(key, &format!("expected a list of strings, got {v}"))),
        }
    }

    fn f64_list(&mut self, key: &str) -> Result<Option<Vec<f64>>, ConfigError> {
        match self.get(key) {
            None => Ok(None),
            Some(Value::Array(items)) => items
                .iter()
                .map(|v| {
                    as_f64(v).ok_or_else(|| self.err(key, &format!("expected numbers, got {v}")))
                })
                .collect::<Result<Vec<_>, _>>()
                .map(Some),
            Some(v) => Err(self.err(key, &format!("expected a list of numbers, got {v}"))),
        }
    }

    /// A real number or a `[re, im]` pair.
    fn complex(&mut self, key: &str) -> Result<Option<Complex>, ConfigError> {
        match self.get(key) {
            None => Ok(None),
            Some(Value::Array(items)) if items.len() == 2 => {
                match (as_f64(&items[0]), as_f64(&items[1])) {
                    (Some(re), Some(im)) => Ok(Some(Complex::new(re, im))),
                    _ => Err(self.err(key, "expected [re, im] numbers")),
                }
            }
            Some(v) => as_f64(v)
                .map(|re| Some(Complex::new(re, 0.0)))
                .ok_or_else(|| self.err(key, &format!("expected a number or [re, im], got {v}"))),
        }
    }

    /// Reads `<base>_deg` or `<base>_rad` and returns radians.
    fn angle(&mut self, base: &str) -> Result<Option<f64>, ConfigError> {
        if self.has(base) {
            self.skip(base);
            return Err(self.err(
                base,
                &format!("angle keys need a unit suffix: `{base}_deg` or `{base}_rad`"),
            ));
        }
        let deg_key = format!("{base}_deg");
        let rad_key = format!("{base}_rad");
        let deg = self.f64(&deg_key)?;
        let rad = self.f64(&rad_key)?;
        match (deg, rad) {
            (Some(_), Some(_)) => {
                Err(self.err(&rad_key, &format!("both `{deg_key}` and `{rad_key}` given")))
            }
            (Some(d), None) => Ok(Some(d * PI / 180.0)),
            (None, r) => Ok(r),
        }
    }

    fn finish(self) -> Result<(), ConfigError> {
        if let Some(t) = self.table {
            if let Some(k) = t.keys().find(|k| !self.used.contains(*k)) {
                return Err(self.err(k, "unknown key"));
            }
        }
        Ok(())
    }
}

fn as_f64(v: &Value) -> Option<f64> {
    match v {
        Value::Float(f) => Some(*f),
        Value::Integer(i) => Some(*i as f64),
        _ => None,
    }
}

fn line_of_offset(src: &str, offset: usize) -> usize {
    src[..offset.min(src.len())].matches('\n').count() + 1
}

fn locate_section(src: &str, section: &str) -> Option<usize> {
    let header = format!("[{section}]");
    src.lines().position(|l| l.trim() == header).map(|i| i + 1)
}

fn locate_key(src: &str, section: &str, key: &str) -> Option<usize> {
    let mut in_section = false;
    for (i, line) in src.lines().enumerate() {
        let t = line.trim();
        if t.starts_with('[') {
            in_section = t == format!("[{section}]");
            continue;
        }
        if in_section {
            if let Some((k, _)) = t.split_once('=') {
                if k.trim().trim_matches('"') == key {
                    return Some(i + 1);
                }
            }
        }
    }
    locate_section(src, section)
}

impl fmt::Display for RunConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::manifest::config_table(self).to_string())
    }
}
