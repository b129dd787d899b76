//! Optimal transmit power report.

use std::fmt::Write as _;
use std::io::Write;

use irs_core::energy::stationarity_tolerance;
use irs_core::{optimal_power, optimal_power_ideal, OptimalPowerResult, PowerConfig};

use crate::config::RunConfig;

pub fn compute(cfg: &RunConfig, ideal: bool) -> irs_core::Result<OptimalPowerResult> {
    if ideal {
        let pc = PowerConfig {
            p_static: cfg.p_static_ideal,
            ..cfg.power
        };
        optimal_power_ideal(&cfg.system, &pc)
    } else {
        optimal_power(&cfg.impairments, &cfg.power)
    }
}

pub fn render_text(r: &OptimalPowerResult, ideal: bool) -> String {
    let tol: f64 = stationarity_tolerance();
    let mut s = String::new();
    let _ = writeln!(s, "hardware: {}", if ideal { "ideal" } else { "impaired" });
    let _ = writeln!(s, "rate constant C (nats): {}", r.c_ap);
    let _ = writeln!(s, "lambert argument: {}", r.lambert_argument);
    let _ = writeln!(s, "optimal power P* (W): {}", r.p_opt);
    let _ = writeln!(s, "energy efficiency at P* (bit/J): {}", r.ee_opt);
    let _ = writeln!(s, "stationarity residual: {:e}", r.stationarity_residual);
    for c in &r.candidates {
        let verdict = if c.form == r.selected {
            "selected"
        } else if c.residual <= tol {
            "admissible"
        } else {
            "rejected"
        };
        let _ = writeln!(
            s,
            "candidate {}: P = {}, residual = {:e} ({verdict})",
            c.form.label(),
            c.power,
            c.residual
        );
    }
    s
}

pub fn write_csv<W: Write>(out: W, r: &OptimalPowerResult, ideal: bool) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["quantity", "value"])?;
    let hardware = if ideal { "ideal" } else { "impaired" };
    w.write_record(["hardware", hardware])?;
    let rows = [
        ("rate_constant", r.c_ap),
        ("lambert_argument", r.lambert_argument),
        ("p_opt", r.p_opt),
        ("ee_opt", r.ee_opt),
        ("stationarity_residual", r.stationarity_residual),
    ];
    for (k, v) in rows {
        w.write_record([k.to_string(), format!("{v}")])?;
    }
    for c in &r.candidates {
        w.write_record([
            format!("candidate[{}].power", c.form.label()),
            format!("{}", c.power),
        ])?;
        w.write_record([
            format!("candidate[{}].residual", c.form.label()),
            format!("{}", c.residual),
        ])?;
    }
    w.write_record(["selected", r.selected.label()])?;
    w.flush()?;
    Ok(())
}
