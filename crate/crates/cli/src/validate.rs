//! Built-in self checks.
//!
//! Five suites: identities between the exact and reduced SNR paths, the
//! transmitter-distortion bound, monotonicity of the closed forms, the
//! Lambert W inverse, and Monte Carlo convergence. The report contains no
//! timings, so a fixed seed and intensity give byte-identical output.

use std::f64::consts::{E, PI};
use std::fmt::Write as _;

use irs_core::beamforming::BeamformingSolution;
use irs_core::geometry::Angles;
use irs_core::impairments::{phasor_sum, sample_phases, sample_phases_with, trial_rng};
use irs_core::lambert::branch_point;
use irs_core::{
    lambert_w0, monte_carlo_se, se_asymptotic, se_high_snr, se_ideal, se_of_snr, se_upper_bound,
    sinc, snr_exact, snr_reduced, Complex, ImpairmentConfig, PhaseRealization, SystemConfig,
};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Intensity {
    Quick,
    Standard,
    Thorough,
}

impl Intensity {
    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "quick" => Some(Intensity::Quick),
            "standard" => Some(Intensity::Standard),
            "thorough" => Some(Intensity::Thorough),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Intensity::Quick => "quick",
            Intensity::Standard => "standard",
            Intensity::Thorough => "thorough",
        }
    }

    fn scale(self, quick: usize, standard: usize, thorough: usize) -> usize {
        match self {
            Intensity::Quick => quick,
            Intensity::Standard => standard,
            Intensity::Thorough => thorough,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub seed: u64,
    pub intensity: Intensity,
    /// Perturbs the harness's own sinc; the identity suite must catch it.
    pub mutate_sinc: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub passed: bool,
    pub checks: usize,
    pub details: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub suites: Vec<SuiteReport>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.passed)
    }

    pub fn render(&self, opts: &Options) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "validation seed={} intensity={}",
            opts.seed,
            opts.intensity.name()
        );
        for s in &self.suites {
            let tag = if s.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "[{tag}] {} ({} checks)", s.name, s.checks);
            for d in &s.details {
                let _ = writeln!(out, "    {d}");
            }
        }
        let passed = self.suites.iter().filter(|s| s.passed).count();
        let _ = writeln!(out, "{} of {} suites passed", passed, self.suites.len());
        out
    }
}

struct Suite {
    name: &'static str,
    checks: usize,
    failures: usize,
    details: Vec<String>,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            checks: 0,
            failures: 0,
            details: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.failures <= 5 {
                self.details.push(format!("failed: {}", what()));
            }
        }
    }

    fn note(&mut self, line: String) {
        self.details.push(line);
    }

    fn finish(mut self) -> SuiteReport {
        if self.failures > 5 {
            self.details
                .push(format!("... {} failures in total", self.failures));
        }
        SuiteReport {
            name: self.name,
            passed: self.failures == 0 && self.checks > 0,
            checks: self.checks,
            details: self.details,
        }
    }
}

pub fn run(opts: &Options) -> Report {
    Report {
        suites: vec![
            identity(opts),
            bound(opts),
            monotonicity(opts),
            lambert(opts),
            convergence(opts),
        ],
    }
}

fn harness_sinc(x: f64, opts: &Options) -> f64 {
    if opts.mutate_sinc {
        sinc(x) * (1.0 + 1e-3)
    } else {
        sinc(x)
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn random_angles(rng: &mut ChaCha8Rng) -> Angles<f64> {
    Angles::new(rng.gen_range(0.0..2.0 * PI), rng.gen_range(0.0..PI))
}

fn random_system(rng: &mut ChaCha8Rng) -> SystemConfig {
    const SIZES: [usize; 5] = [1, 4, 16, 64, 256];
    SystemConfig {
        ap_antennas: SIZES[rng.gen_range(0..4)],
        irs_elements: SIZES[rng.gen_range(0..5)],
        alpha: Complex::from_polar(rng.gen_range(0.01..1.0), rng.gen_range(-PI..PI)),
        beta: Complex::from_polar(rng.gen_range(0.01..1.0), rng.gen_range(-PI..PI)),
        aoa_irs: random_angles(rng),
        aod_ap: random_angles(rng),
        aod_irs: random_angles(rng),
        spacing_ratio: rng.gen_range(0.1..1.0),
        noise_power: rng.gen_range(1e-3..1.0),
    }
}

fn random_impairments(rng: &mut ChaCha8Rng) -> ImpairmentConfig {
    ImpairmentConfig {
        eta: rng.gen_range(0.3..=1.0),
        delta_psi: rng.gen_range(0.0..PI),
        sigma2: rng.gen_range(1e-3..1.0),
        delta_theta_hat: rng.gen_range(0.0..PI),
    }
}

/// Composite Simpson rule.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, intervals: usize) -> f64 {
    let n = intervals + intervals % 2;
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + h * i as f64);
    }
    acc * h / 3.0
}

fn identity(opts: &Options) -> SuiteReport {
    let mut suite = Suite::new("identity");
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let cases = opts.intensity.scale(100, 1000, 5000);

    let mut worst = 0.0f64;
    for case in 0..cases {
        let cfg = random_system(&mut rng);
        let imp = random_impairments(&mut rng);
        let power = 10f64.powf(rng.gen_range(-3.0..3.0));
        let draw: u64 = rng.gen();
        let result = BeamformingSolution::design(&cfg).and_then(|sol| {
            let real = sample_phases(&imp, cfg.ap_antennas, cfg.irs_elements, draw);
            Ok((
                snr_exact(&cfg, &imp, &real, &sol, power)?,
                snr_reduced(&cfg, &imp, &real, power)?,
            ))
        });
        match result {
            Ok((a, b)) => {
                let e = rel(a, b);
                worst = worst.max(e);
                suite.check(e <= 1e-9, || {
                    format!("case {case}: exact {a} vs reduced {b}")
                });
            }
            Err(e) => suite.check(false, || format!("case {case}: {e}")),
        }
    }
    suite.note(format!(
        "exact vs reduced SNR: {cases} cases, max relative error {worst:.2e}"
    ));

    // ideal hardware collapses to the array-gain SNR
    let ideal = ImpairmentConfig::ideal();
    let mut worst = 0.0f64;
    for _ in 0..cases / 10 {
        let cfg = random_system(&mut rng);
        let power = 10f64.powf(rng.gen_range(-3.0..3.0));
        let sol = BeamformingSolution::design(&cfg).expect("valid system");
        let real = PhaseRealization::zeros(cfg.ap_antennas, cfg.irs_elements);
        let snr = snr_exact(&cfg, &ideal, &real, &sol, power).expect("valid inputs");
        let closed = se_ideal(&cfg, power).expect("valid inputs");
        let e = rel(se_of_snr(snr), closed);
        worst = worst.max(e);
        suite.check(e <= 1e-12, || {
            format!("ideal SE {} vs {closed}", se_of_snr(snr))
        });
    }
    suite.note(format!("ideal-hardware SE: max relative error {worst:.2e}"));

    // E[cos psi] for psi ~ U[-d, d] equals sinc(d)
    let mut worst = 0.0f64;
    for k in 1..=24 {
        let d = PI * k as f64 / 24.0;
        let mean = simpson(f64::cos, -d, d, 2000) / (2.0 * d);
        let e = (mean - harness_sinc(d, opts)).abs();
        worst = worst.max(e);
        suite.check(e <= 1e-10, || {
            format!(
                "E[cos U(-{d:.4}, {d:.4})] = {mean} vs sinc {}",
                harness_sinc(d, opts)
            )
        });
    }
    suite.note(format!("uniform phase mean vs sinc: max error {worst:.2e}"));

    // large-array closed form rebuilt from the harness sinc
    let mut worst = 0.0f64;
    for _ in 0..cases / 10 {
        let cfg = random_system(&mut rng);
        let imp = random_impairments(&mut rng);
        let power = 10f64.powf(rng.gen_range(-3.0..3.0));
        let (m, n) = (cfg.ap_antennas as f64, cfg.irs_elements as f64);
        let sp = harness_sinc(imp.delta_psi, opts);
        let st = harness_sinc(imp.delta_theta_hat, opts);
        let g = cfg.cascade_gain() * n * n * st * st;
        let snr =
            power * imp.eta * imp.eta * g * m * sp * sp / (m * g * imp.sigma2 + cfg.noise_power);
        let closed = se_asymptotic(&cfg, &imp, power).expect("valid inputs");
        let e = rel(se_of_snr(snr), closed);
        worst = worst.max(e);
        suite.check(e <= 1e-12, || {
            format!("asymptotic SE {closed} vs rebuilt {}", se_of_snr(snr))
        });
    }
    suite.note(format!(
        "asymptotic SE vs sinc rebuild: max relative error {worst:.2e}"
    ));
    suite.finish()
}

fn bound(_opts: &Options) -> SuiteReport {
    let mut suite = Suite::new("bound");
    const SIZES: [usize; 6] = [4, 16, 64, 256, 1024, 4096];
    let imp = ImpairmentConfig::default();
    let mut closest = f64::INFINITY;
    for ratio in [0.1, 1.0, 10.0, 100.0] {
        let power = ratio * imp.sigma2;
        let ub = se_upper_bound(&imp, power).expect("sigma2 > 0");
        for &m in &SIZES {
            let mut prev = f64::NEG_INFINITY;
            for &n in &SIZES {
                let cfg = SystemConfig::default().with_sizes(m, n);
                let r = se_asymptotic(&cfg, &imp, power).expect("valid inputs");
                closest = closest.min(ub - r);
                suite.check(r <= ub + 1e-12, || {
                    format!("M={m} N={n} P/sigma2={ratio}: {r} > bound {ub}")
                });
                suite.check(r >= prev - 1e-12, || {
                    format!("M={m} N={n} P/sigma2={ratio}: {r} < {prev} at smaller N")
                });
                prev = r;
            }
        }
    }
    suite.note(format!(
        "smallest margin below the bound {closest:.3e} bit/s/Hz"
    ));
    suite.finish()
}

fn monotonicity(_opts: &Options) -> SuiteReport {
    let mut suite = Suite::new("monotonicity");
    let cfg = SystemConfig::default();
    let base = ImpairmentConfig::default();
    let power = 1.0;
    let grid = |lo: f64, hi: f64| (0..5).map(move |i| lo + (hi - lo) * i as f64 / 4.0);
    let se = |imp: &ImpairmentConfig| se_asymptotic(&cfg, imp, power).expect("valid inputs");
    let h = 1e-6;
    for eta in grid(0.5, 1.0 - 2.0 * h) {
        for dpsi in grid(h, PI / 2.0) {
            for s2 in grid(0.01, 1.0) {
                let imp = ImpairmentConfig {
                    eta,
                    delta_psi: dpsi,
                    sigma2: s2,
                    ..base
                };
                let r = se(&imp);
                let d_eta = se(&ImpairmentConfig {
                    eta: eta + h,
                    ..imp
                }) - r;
                let d_psi = se(&ImpairmentConfig {
                    delta_psi: dpsi + h,
                    ..imp
                }) - r;
                let d_s2 = se(&ImpairmentConfig {
                    sigma2: s2 + h,
                    ..imp
                }) - r;
                suite.check(d_eta > 0.0, || {
                    format!("not increasing in eta at ({eta}, {dpsi}, {s2})")
                });
                suite.check(d_psi < 0.0, || {
                    format!("not decreasing in delta_psi at ({eta}, {dpsi}, {s2})")
                });
                suite.check(d_s2 < 0.0, || {
                    format!("not decreasing in sigma2 at ({eta}, {dpsi}, {s2})")
                });
            }
        }
    }

    // the optimum moves the same way
    let pc = irs_core::PowerConfig::default();
    let opt = |imp: &ImpairmentConfig| {
        let r = irs_core::optimal_power(imp, &pc).expect("valid inputs");
        (r.p_opt, r.ee_opt)
    };
    for eta in grid(0.5, 0.9) {
        for dpsi in grid(0.0, PI / 2.0 - 0.1) {
            for s2 in grid(0.01, 0.5) {
                let imp = ImpairmentConfig {
                    eta,
                    delta_psi: dpsi,
                    sigma2: s2,
                    ..base
                };
                let (p, ee) = opt(&imp);
                let (p_eta, ee_eta) = opt(&ImpairmentConfig {
                    eta: eta + 0.1,
                    ..imp
                });
                let (p_s2, ee_s2) = opt(&ImpairmentConfig {
                    sigma2: s2 + 0.1,
                    ..imp
                });
                let (p_psi, ee_psi) = opt(&ImpairmentConfig {
                    delta_psi: dpsi + 0.1,
                    ..imp
                });
                suite.check(p_eta <= p && ee_eta >= ee, || {
                    format!("optimum not monotone in eta at ({eta}, {dpsi}, {s2})")
                });
                suite.check(p_s2 >= p && ee_s2 <= ee, || {
                    format!("optimum not monotone in sigma2 at ({eta}, {dpsi}, {s2})")
                });
                suite.check(p_psi >= p && ee_psi <= ee, || {
                    format!("optimum not monotone in delta_psi at ({eta}, {dpsi}, {s2})")
                });
            }
        }
    }

    // signed gap between the large-array and high-SNR forms falls with P
    let gap = |p: f64| se_asymptotic(&cfg, &base, p).unwrap() - se_high_snr(&base, p).unwrap();
    let powers: Vec<f64> = (0..=40)
        .map(|i| 10f64.powf(-1.0 + i as f64 / 10.0))
        .collect();
    for w in powers.windows(2) {
        let (a, b) = (gap(w[0]), gap(w[1]));
        suite.check(b < a, || {
            format!("gap rises from {a} at P={} to {b} at P={}", w[0], w[1])
        });
    }
    let tail = gap(*powers.last().unwrap()).abs();
    suite.check(tail <= 0.01, || format!("|gap| = {tail} at P = 1000"));
    suite.note(format!("|gap| at P = 1000: {tail:.3e} bit/s/Hz"));

    // the gap's sensitivity to the IRS phase error shrinks with the array
    let slope = |m: usize, n: usize| {
        let c = cfg.with_sizes(m, n);
        let g = |dth: f64| {
            let imp = ImpairmentConfig {
                delta_theta_hat: dth,
                ..base
            };
            se_asymptotic(&c, &imp, 100.0).unwrap() - se_high_snr(&imp, 100.0).unwrap()
        };
        let d = base.delta_theta_hat;
        (g(d + 1e-4) - g(d - 1e-4)) / 2e-4
    };
    let (small, large) = (slope(16, 64), slope(256, 1024));
    suite.check(small.abs() <= 0.01, || {
        format!("d gap / d delta_theta_hat = {small}")
    });
    suite.check(large.abs() < small.abs(), || {
        format!("slope {large} at (256, 1024) not below {small}")
    });
    suite.note(format!(
        "d gap / d delta_theta_hat at P = 100: {small:.3e} (16, 64), {large:.3e} (256, 1024)"
    ));
    suite.finish()
}

fn bisect_w(x: f64) -> f64 {
    let (mut lo, mut hi) = (-1.0f64, 1.0f64.max(x.ln_1p() + 1.0));
    while hi * hi.exp() < x {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if mid * mid.exp() < x {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn lambert(opts: &Options) -> SuiteReport {
    let mut suite = Suite::new("lambert");
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x4c41_4d42);
    let count = opts.intensity.scale(1000, 10_000, 100_000);
    let bp = branch_point::<f64>();
    let mut xs = vec![bp + 1e-9, 0.0, E, bp];
    for i in 0..count {
        xs.push(if i % 2 == 0 {
            rng.gen_range(bp..1.0)
        } else {
            10f64.powf(rng.gen_range(0.0..12.0))
        });
    }
    let (mut worst_res, mut worst_oracle) = (0.0f64, 0.0f64);
    for &x in &xs {
        match lambert_w0(x) {
            Ok(w) => {
                let res = (w * w.exp() - x).abs() / x.abs().max(1.0);
                let oracle = (w - bisect_w(x)).abs() / w.abs().max(1.0);
                worst_res = worst_res.max(res);
                worst_oracle = worst_oracle.max(oracle);
                suite.check(res <= 1e-12 && w >= -1.0, || {
                    format!("W({x}) = {w}, residual {res:e}")
                });
                suite.check(oracle <= 1e-10, || {
                    format!("W({x}) = {w} vs bisection {}", bisect_w(x))
                });
            }
            Err(e) => suite.check(false, || format!("W({x}): {e}")),
        }
    }
    suite.check(lambert_w0(0.0) == Ok(0.0), || "W(0) != 0".into());
    suite.check(
        (lambert_w0(E).unwrap_or(f64::NAN) - 1.0).abs() <= 1e-15,
        || "W(e) != 1".into(),
    );
    suite.check(lambert_w0(bp - 1e-9).is_err(), || {
        "accepted x below -1/e".into()
    });
    suite.check(lambert_w0(f64::NAN).is_err(), || "accepted NaN".into());
    suite.note(format!(
        "{} arguments: max residual {worst_res:.2e}, max bisection gap {worst_oracle:.2e}",
        xs.len()
    ));
    suite.finish()
}

fn convergence(opts: &Options) -> SuiteReport {
    let mut suite = Suite::new("convergence");
    let trials = opts.intensity.scale(2_000, 10_000, 50_000);
    let imp = ImpairmentConfig::default();
    let power = 1.0;
    let gap = |m: usize, n: usize| {
        let cfg = SystemConfig::default().with_sizes(m, n);
        let mc = monte_carlo_se(&cfg, &imp, power, trials, opts.seed).expect("valid inputs");
        let closed = se_asymptotic(&cfg, &imp, power).expect("valid inputs");
        ((mc.mean_se - closed).abs(), mc.std_error)
    };
    let (small, se_small) = gap(16, 64);
    let (large, se_large) = gap(256, 1024);
    suite.check(large < small, || {
        format!("gap {large} at (256, 1024) not below {small} at (16, 64)")
    });
    suite.check(small <= 0.01, || format!("gap {small} at (16, 64)"));
    suite.note(format!(
        "|MC - closed form| with {trials} trials: {small:.3e} (se {se_small:.1e}) at (16, 64), {large:.3e} (se {se_large:.1e}) at (256, 1024)"
    ));

    // strong law for the IRS phase phasor average
    let imp_sum = |n: usize, rep: u64| {
        let real = sample_phases_with(&imp, 1, n, &mut trial_rng(opts.seed, rep));
        (phasor_sum(&real.theta_hat).norm() / n as f64 - sinc(imp.delta_theta_hat)).abs()
    };
    let reps = 8u64;
    let mut errs = Vec::new();
    for n in [100usize, 10_000, 1_000_000] {
        errs.push((0..reps).map(|r| imp_sum(n, r)).sum::<f64>() / reps as f64);
    }
    suite.check(errs[1] < errs[0] && errs[2] < errs[1], || {
        format!("phasor average errors {errs:?} not decreasing")
    });
    suite.note(format!(
        "|mean phasor - sinc|: {:.2e} (N=1e2), {:.2e} (N=1e4), {:.2e} (N=1e6)",
        errs[0], errs[1], errs[2]
    ));
    suite.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(mutate_sinc: bool) -> Options {
        Options {
            seed: 11,
            intensity: Intensity::Quick,
            mutate_sinc,
        }
    }

    #[test]
    fn quick_run_passes() {
        let r = run(&quick(false));
        assert!(r.passed(), "{}", r.render(&quick(false)));
    }

    #[test]
    fn mutated_sinc_fails_identity_only() {
        let opts = quick(true);
        let r = run(&opts);
        let failed: Vec<&str> = r
            .suites
            .iter()
            .filter(|s| !s.passed)
            .map(|s| s.name)
            .collect();
        assert_eq!(failed, vec!["identity"], "{}", r.render(&opts));
    }

    #[test]
    fn simpson_integrates_cubic_exactly() {
        let v = simpson(|x| x * x * x + x, 0.0, 2.0, 4);
        assert!((v - 6.0).abs() < 1e-13);
    }
}
