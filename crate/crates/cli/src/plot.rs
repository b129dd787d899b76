//! Gnuplot script for a sweep CSV.

use crate::sweep::{Metric, SnrReference, SweepSpec, SweepVariable};

fn axis_label(spec: &SweepSpec) -> &'static str {
    match (spec.variable, spec.snr_reference) {
        (SweepVariable::TransmitPowerDb, Some(SnrReference::Distortion)) => "P / sigma^2 (dB)",
        (SweepVariable::TransmitPowerDb, _) => "P / sigma_u^2 (dB)",
        (SweepVariable::TransmitPowerLinear, _) => "transmit power P (W)",
        (SweepVariable::IrsElements, _) => "IRS elements N",
    }
}

pub fn gnuplot_script(spec: &SweepSpec, csv_file: &str) -> String {
    let ylabel = match spec.metric {
        Metric::Se => "spectral efficiency (bit/s/Hz)",
        Metric::Ee => "energy efficiency (bit/J)",
    };
    let mut s = String::new();
    s.push_str("set datafile separator ','\n");
    s.push_str("set key bottom right\n");
    s.push_str("set grid\n");
    s.push_str(&format!("set xlabel '{}'\n", axis_label(spec)));
    s.push_str(&format!("set ylabel '{ylabel}'\n"));
    if spec.variable == SweepVariable::IrsElements {
        s.push_str("set logscale x 2\n");
    }
    let series: Vec<String> = spec
        .scenarios
        .iter()
        .map(|sc| {
            format!(
                "'{csv_file}' every ::1 using 1:(strcol(2) eq '{0}' ? $4 : 1/0) with linespoints title '{0}'",
                sc.name()
            )
        })
        .collect();
    s.push_str("plot ");
    s.push_str(&series.join(", \\\n     "));
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::RunConfig;

    #[test]
    fn one_series_per_scenario() {
        let cfg = RunConfig::parse(
            "[sweep]\nvariable = \"irs_elements\"\nvalues = [16, 64]\npower = 1\nscenarios = [\"ideal\", \"high_snr\"]\n",
        )
        .unwrap();
        let gp = gnuplot_script(cfg.sweep.as_ref().unwrap(), "out.csv");
        assert_eq!(gp.matches("linespoints").count(), 2);
        assert!(gp.contains("logscale x"));
        assert!(gp.contains("'out.csv'"));
    }
}
