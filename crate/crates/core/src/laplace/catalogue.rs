use num_complex::Complex64;

use super::{invert, EvalError, TalbotConfig, TransformFn};

/// Known transform pairs used to check the inversion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AnalyticPair {
    /// `1/s ↔ 1`
    Step,
    /// `1/(s+1) ↔ e^{−t}`
    Exponential,
    /// `1/s² ↔ t`
    Ramp,
    /// `1/(s²+1) ↔ sin t`
    Sine,
    /// `e^{−√s}/s ↔ erfc(1/(2√t))`
    ErfcType,
    /// `e^{−s}/s ↔ H(t − 1)`
    DelayedStep,
}

impl AnalyticPair {
    pub const ALL: [AnalyticPair; 6] = [
        AnalyticPair::Step,
        AnalyticPair::Exponential,
        AnalyticPair::Ramp,
        AnalyticPair::Sine,
        AnalyticPair::ErfcType,
        AnalyticPair::DelayedStep,
    ];

    /// Delay of the delayed step.
    pub const DELAY: f64 = 1.0;

    pub fn name(self) -> &'static str {
        match self {
            AnalyticPair::Step => "step",
            AnalyticPair::Exponential => "exponential",
            AnalyticPair::Ramp => "ramp",
            AnalyticPair::Sine => "sine",
            AnalyticPair::ErfcType => "erfc",
            AnalyticPair::DelayedStep => "delayed-step",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == name)
    }

    pub fn transform(self, s: Complex64) -> Complex64 {
        match self {
            AnalyticPair::Step => s.inv(),
            AnalyticPair::Exponential => (s + 1.0).inv(),
            AnalyticPair::Ramp => (s * s).inv(),
            AnalyticPair::Sine => (s * s + 1.0).inv(),
            AnalyticPair::ErfcType => (-s.sqrt()).exp() / s,
            AnalyticPair::DelayedStep => (-s * Self::DELAY).exp() / s,
        }
    }

    pub fn original(self, t: f64) -> f64 {
        match self {
            AnalyticPair::Step => 1.0,
            AnalyticPair::Exponential => (-t).exp(),
            AnalyticPair::Ramp => t,
            AnalyticPair::Sine => t.sin(),
            AnalyticPair::ErfcType => libm::erfc(0.5 / t.sqrt()),
            AnalyticPair::DelayedStep => {
                if t < Self::DELAY {
                    0.0
                } else {
                    1.0
                }
            }
        }
    }

    /// Times at which the fixed-`N` quadrature is expected to reach 1e-8.
    /// Outside it, errors are reported separately.
    ///
    /// The parabola crosses the imaginary axis at `±2iμ_c`, so the sine poles
    /// at `±i` are only resolved while `t` is small against `N`. The delayed
    /// step is only representable once `e^{s(t − a)}` decays along the
    /// contour ends, i.e. well past the delay.
    pub fn accurate_window(self, config: &TalbotConfig) -> (f64, f64) {
        let n = config.node_count() as f64;
        match self {
            AnalyticPair::Sine => (0.0, 0.25 * (n - 24.0).max(0.0)),
            AnalyticPair::DelayedStep => (2.5 * Self::DELAY, f64::INFINITY),
            _ => (0.0, f64::INFINITY),
        }
    }

    /// Points within 1% of the delay, where the original jumps.
    pub fn near_discontinuity(self, t: f64) -> bool {
        matches!(self, AnalyticPair::DelayedStep) && (t - Self::DELAY).abs() <= 0.01 * Self::DELAY
    }
}

impl TransformFn for AnalyticPair {
    fn eval(&self, s: Complex64) -> Result<Complex64, EvalError> {
        Ok(self.transform(s))
    }
}

/// Error summary for one catalogue pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PairReport {
    pub pair: AnalyticPair,
    pub points: usize,
    /// Largest absolute error over the accurate window.
    pub max_abs_error: f64,
    /// Largest error relative to `|f(t)|` over the accurate window, taken
    /// where `|f(t)| ≥ 1e-3`.
    pub max_rel_error: f64,
    pub worst_t: f64,
    /// Points outside the accurate window or near a discontinuity.
    pub flagged_points: usize,
    /// Largest absolute error among the flagged points.
    pub flagged_max_abs_error: f64,
    /// Times inside the accurate window at which inversion returned an error.
    pub failures: Vec<f64>,
}

impl PairReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.failures.is_empty() && self.max_abs_error <= tol
    }
}

/// Catalogue errors plus a node-doubling study on the erfc pair.
#[derive(Debug, Clone, PartialEq)]
pub struct SelfTestReport {
    pub config: TalbotConfig,
    pub pairs: Vec<PairReport>,
    /// `(N, max absolute error)` for the erfc pair at N = 8, 16, 32, 64.
    pub convergence: Vec<(usize, f64)>,
}

/// Errors below this count as having reached the rounding floor.
pub const ROUNDING_FLOOR: f64 = 1e-11;

impl SelfTestReport {
    pub fn pair(&self, pair: AnalyticPair) -> Option<&PairReport> {
        self.pairs.iter().find(|r| r.pair == pair)
    }

    /// Every doubling of `N` cuts the erfc error by at least `factor` until
    /// the rounding floor is reached.
    pub fn converges(&self, factor: f64) -> bool {
        self.convergence
            .windows(2)
            .all(|w| w[0].1 <= ROUNDING_FLOOR || w[1].1 * factor <= w[0].1)
    }
}

pub const SELF_TEST_POINTS: usize = 81;

pub(crate) fn self_test_times() -> Vec<f64> {
    (0..SELF_TEST_POINTS)
        .map(|i| 10f64.powf(-2.0 + 4.0 * i as f64 / (SELF_TEST_POINTS - 1) as f64))
        .collect()
}

/// Inverts every catalogue pair on a log grid over `t ∈ [1e-2, 1e2]`.
pub fn self_test(config: &TalbotConfig) -> SelfTestReport {
    let times = self_test_times();
    let pairs = AnalyticPair::ALL
        .iter()
        .map(|&pair| pair_report(pair, &times, config))
        .collect();
    let convergence = [8, 16, 32, 64]
        .iter()
        .filter_map(|&n| {
            let cfg = TalbotConfig::new(n, config.contour()).ok()?;
            Some((
                n,
                pair_report(AnalyticPair::ErfcType, &times, &cfg).max_abs_error,
            ))
        })
        .collect();
    SelfTestReport {
        config: *config,
        pairs,
        convergence,
    }
}

fn pair_report(pair: AnalyticPair, times: &[f64], config: &TalbotConfig) -> PairReport {
    let (lo, hi) = pair.accurate_window(config);
    let mut report = PairReport {
        pair,
        points: times.len(),
        max_abs_error: 0.0,
        max_rel_error: 0.0,
        worst_t: f64::NAN,
        flagged_points: 0,
        flagged_max_abs_error: 0.0,
        failures: Vec::new(),
    };
    for &t in times {
        let flagged = t < lo || t > hi || pair.near_discontinuity(t);
        let abs = match invert(&pair, t, config) {
            Ok(v) => (v.value - pair.original(t)).abs(),
            Err(_) => f64::INFINITY,
        };
        if flagged {
            report.flagged_points += 1;
            report.flagged_max_abs_error = report.flagged_max_abs_error.max(abs);
            continue;
        }
        if abs.is_infinite() {
            report.failures.push(t);
            continue;
        }
        if report.worst_t.is_nan() || abs > report.max_abs_error {
            report.worst_t = t;
        }
        report.max_abs_error = report.max_abs_error.max(abs);
        let want = pair.original(t).abs();
        if want >= 1e-3 {
            report.max_rel_error = report.max_rel_error.max(abs / want);
        }
    }
    report
}
