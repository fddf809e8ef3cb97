use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fs;

use memwave::dispersion::{self, cross_oracle_sweep};
use memwave::laplace::{self, invert_grid, AnalyticPair, FnTransform, TransformFn};
use memwave::special_functions::{
    bessel_i, bessel_ratio, bessel_recurrence_check, kelvin_pair, EvalPolicy,
};
use memwave::transient::{self, profile, y_tilde, StepResponseProblem};
use memwave::{ContourKind, MediumParams, TalbotConfig};
use num_complex::Complex64;
use thiserror::Error;

use crate::args::{Common, Contour, GridSpec, InvertArgs, StepArgs, SweepArgs};
use crate::table::{self, Table};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{module} failed ({params}): {message}")]
    Compute {
        module: &'static str,
        params: String,
        message: String,
    },
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Compute { .. } => 3,
            CliError::Io { .. } => 4,
        }
    }
}

fn compute(module: &'static str, params: impl Into<String>) -> impl FnOnce(String) -> CliError {
    let params = params.into();
    move |message| CliError::Compute {
        module,
        params,
        message,
    }
}

struct Setup {
    medium: MediumParams,
    talbot: TalbotConfig,
}

fn setup(common: &Common) -> Result<Setup, CliError> {
    let medium =
        MediumParams::new(common.c, common.tau).map_err(|e| CliError::Config(e.to_string()))?;
    let kind = match common.contour {
        Contour::Talbot => ContourKind::Talbot,
        Contour::Parabolic => ContourKind::Parabolic,
    };
    let talbot =
        TalbotConfig::new(common.nodes, kind).map_err(|e| CliError::Config(e.to_string()))?;
    Ok(Setup { medium, talbot })
}

fn echo(command: &str, common: &Common, extra: &str) -> String {
    let mut line = format!(
        "memwave {command} c={} tau={} nodes={} contour={}",
        common.c, common.tau, common.nodes, common.contour
    );
    if !extra.is_empty() {
        line.push(' ');
        line.push_str(extra);
    }
    line.push_str(&format!(" dimensional={}", common.dimensional));
    line
}

fn grid(
    spec: Option<GridSpec>,
    default: &str,
    log: bool,
) -> Result<(GridSpec, Vec<f64>), CliError> {
    let spec = spec.unwrap_or_else(|| default.parse().expect("default grid is valid"));
    let points = spec.points(log).map_err(CliError::Config)?;
    Ok((spec, points))
}

fn spacing_name(log: bool) -> &'static str {
    if log {
        "log"
    } else {
        "linear"
    }
}

type RowCheck = fn(&[f64], &Common) -> Result<(), String>;

/// Writes the table, then re-reads the written text when auditing.
fn emit(table: &Table, common: &Common, check: RowCheck) -> Result<(), CliError> {
    let text = table.render(common.format);
    match &common.out {
        Some(path) => fs::write(path, &text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?,
        None => print!("{text}"),
    }
    if common.audit {
        let written = match &common.out {
            Some(path) => fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })?,
            None => text,
        };
        let rows = table::parse(&written, common.format, &table.columns)
            .map_err(compute("audit", "parse"))?;
        for (i, row) in rows.iter().enumerate() {
            check(row, common).map_err(compute("audit", format!("row {}", i + 1)))?;
        }
        eprintln!("audit: {} rows ok", rows.len());
    }
    Ok(())
}

pub fn dispersion(args: &SweepArgs) -> Result<(), CliError> {
    sweep(args, "dispersion")
}

pub fn velocities(args: &SweepArgs) -> Result<(), CliError> {
    sweep(args, "velocities")
}

fn sweep(args: &SweepArgs, command: &'static str) -> Result<(), CliError> {
    let common = &args.common;
    let Setup { medium, .. } = setup(common)?;
    let log = args.spacing.resolve(true);
    let default = if command == "dispersion" {
        "1e-3:1e3:200"
    } else {
        "1e-2:1e3:200"
    };
    let (spec, omega_tau) = grid(args.omega_tau, default, log)?;
    let omegas: Vec<f64> = omega_tau.iter().map(|w| w / medium.tau()).collect();
    let samples = dispersion::sweep(&omegas, &medium)
        .map_err(|e| e.to_string())
        .map_err(compute("dispersion", format!("omega_tau={spec}")))?;

    let extra = format!("omega_tau={spec} spacing={}", spacing_name(log));
    let l = medium.length_scale();
    let dim = common.dimensional;
    let (columns, check): (Vec<&'static str>, RowCheck) = match (command, dim) {
        ("dispersion", false) => (
            vec!["omega_tau", "kappa_ctau", "delta_att_ctau", "residual"],
            check_dispersion,
        ),
        ("dispersion", true) => (
            vec!["omega", "kappa", "delta_att", "residual"],
            check_dispersion,
        ),
        (_, false) => (
            vec!["omega_tau", "v_p_over_c", "v_g_over_c"],
            check_velocities,
        ),
        (_, true) => (vec!["omega", "v_p", "v_g"], check_velocities),
    };
    let mut t = Table::new(echo(command, common, &extra), columns);
    for (s, wt) in samples.iter().zip(&omega_tau) {
        t.push(match (command, dim) {
            ("dispersion", false) => vec![*wt, s.kappa * l, s.delta_att * l, s.residual],
            ("dispersion", true) => vec![s.omega, s.kappa, s.delta_att, s.residual],
            (_, false) => vec![*wt, s.v_phase / medium.c(), s.v_group / medium.c()],
            (_, true) => vec![s.omega, s.v_phase, s.v_group],
        });
    }
    emit(&t, common, check)
}

fn check_dispersion(row: &[f64], _: &Common) -> Result<(), String> {
    if !(row[1] > 0.0 && row[2] > 0.0) {
        return Err(format!("non-positive kappa or delta_att: {row:?}"));
    }
    if row[3].is_nan() || row[3] > 1e-8 {
        return Err(format!("dispersion residual {} above 1e-8", row[3]));
    }
    Ok(())
}

fn check_velocities(row: &[f64], common: &Common) -> Result<(), String> {
    let c = if common.dimensional { common.c } else { 1.0 };
    let slack = 1e-6 * c;
    if !(row[1] > 0.0 && row[1] <= row[2] + slack && row[2] <= c + slack) {
        return Err(format!("expected 0 < v_p <= v_g <= c: {row:?}"));
    }
    Ok(())
}

pub fn step_response(args: &StepArgs) -> Result<(), CliError> {
    let common = &args.common;
    let Setup { medium, talbot } = setup(common)?;
    let log = args.spacing.resolve(false);
    let (spec, xi) = grid(args.xi, "0:10:400", log)?;
    let chis = &args.x_over_ctau;
    if chis.is_empty() || chis.iter().any(|c| !(*c >= 0.0 && c.is_finite())) {
        return Err(CliError::Config(format!(
            "x/(c tau) must be non-negative, got {chis:?}"
        )));
    }
    let l = medium.length_scale();
    let xs: Vec<f64> = chis.iter().map(|c| c * l).collect();
    let samples = profile(&xs, &xi, &medium, &talbot)
        .map_err(|e| e.to_string())
        .map_err(compute("transient", format!("xi={spec}")))?;

    let list: Vec<String> = chis.iter().map(|c| c.to_string()).collect();
    let extra = format!(
        "x_over_ctau={} xi={spec} spacing={}",
        list.join(","),
        spacing_name(log)
    );
    let first = if common.dimensional {
        "x"
    } else {
        "x_over_ctau"
    };
    let mut t = Table::new(
        echo("step-response", common, &extra),
        vec![first, "xi", "t", "y", "flag_near_front"],
    );
    for s in samples {
        let s = s
            .map_err(|e| e.to_string())
            .map_err(compute("transient", "profile"))?;
        let pos = if common.dimensional { s.x } else { s.chi };
        t.push(vec![
            pos,
            s.xi,
            s.t,
            s.y,
            if s.near_front { 1.0 } else { 0.0 },
        ]);
    }
    emit(&t, common, check_step)
}

fn check_step(row: &[f64], _: &Common) -> Result<(), String> {
    let (xi, y, flag) = (row[1], row[3], row[4]);
    if !(-1e-2..=1.0 + 1e-2).contains(&y) {
        return Err(format!("y outside [-0.01, 1.01]: {row:?}"));
    }
    if xi < 0.0 && y.abs() > 1e-4 {
        return Err(format!("non-zero response ahead of the front: {row:?}"));
    }
    let near = xi > 0.0 && xi < transient::NEAR_FRONT_XI;
    if near != (flag == 1.0) {
        return Err(format!("near-front flag inconsistent: {row:?}"));
    }
    Ok(())
}

enum Source {
    Pair(AnalyticPair),
    YTilde(StepResponseProblem),
}

impl TransformFn for Source {
    fn eval(&self, s: Complex64) -> Result<Complex64, laplace::EvalError> {
        match self {
            Source::Pair(p) => Ok(p.transform(s)),
            Source::YTilde(p) => Ok(y_tilde(s, p)?),
        }
    }
}

pub fn invert(args: &InvertArgs) -> Result<(), CliError> {
    let common = &args.common;
    let Setup { medium, talbot } = setup(common)?;
    let source = if args.transform == "y-tilde" {
        let [chi] = args.x_over_ctau.as_slice() else {
            return Err(CliError::Config(
                "y-tilde takes a single --x-over-ctau".into(),
            ));
        };
        let p = StepResponseProblem::new(medium, chi * medium.length_scale())
            .map_err(|e| CliError::Config(e.to_string()))?;
        Source::YTilde(p)
    } else {
        let pair = AnalyticPair::from_name(&args.transform).ok_or_else(|| {
            let names: Vec<&str> = AnalyticPair::ALL.iter().map(|p| p.name()).collect();
            CliError::Config(format!(
                "unknown transform {:?}; expected one of {}, y-tilde",
                args.transform,
                names.join(", ")
            ))
        })?;
        Source::Pair(pair)
    };
    let log = args.spacing.resolve(true);
    let (spec, times) = grid(args.t, "1e-2:1e2:41", log)?;
    if times[0] <= 0.0 {
        return Err(CliError::Config(format!(
            "times must be positive, got {spec}"
        )));
    }
    let full = talbot.with_symmetry(false);
    let params = format!("transform={} t={spec}", args.transform);
    let results = invert_grid(&source, &times, &full)
        .map_err(|e| e.to_string())
        .map_err(compute("laplace", params.clone()))?;

    let mut extra = format!(
        "transform={} t={spec} spacing={}",
        args.transform,
        spacing_name(log)
    );
    if let Source::YTilde(_) = source {
        extra.push_str(&format!(" x_over_ctau={}", args.x_over_ctau[0]));
    }
    let mut t = Table::new(
        echo("invert", common, &extra),
        vec!["t", "value", "imag_residue"],
    );
    for r in results {
        let r = r
            .map_err(|e| e.to_string())
            .map_err(compute("laplace", params.clone()))?;
        t.push(vec![r.t, r.value, r.imag_residue.unwrap_or(0.0)]);
    }
    emit(&t, common, check_invert)
}

fn check_invert(row: &[f64], _: &Common) -> Result<(), String> {
    if row.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(format!("non-finite value: {row:?}"))
    }
}

struct Check {
    name: String,
    value: f64,
    threshold: f64,
}

impl Check {
    fn new(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            value,
            threshold,
        }
    }

    fn passed(&self) -> bool {
        self.value <= self.threshold
    }
}

fn worst<I: IntoIterator<Item = Result<f64, String>>>(it: I) -> f64 {
    it.into_iter()
        .map(|r| r.unwrap_or(f64::INFINITY))
        .fold(0.0, f64::max)
}

fn log_points(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    GridSpec { lo, hi, n }
        .points(true)
        .expect("positive bounds")
}

fn special_function_checks() -> Vec<Check> {
    let p = EvalPolicy::default();
    let mut checks = Vec::new();

    let i0 = bessel_i(0.0, Complex64::new(1.0, 0.0), &p)
        .map(|v| v.re)
        .unwrap_or(f64::NAN);
    checks.push(Check::new(
        "special: I0(1) reference",
        (i0 / 1.266_065_877_752_008_4 - 1.0).abs(),
        1e-14,
    ));

    let rec = worst([0.0, FRAC_PI_4, FRAC_PI_2].iter().flat_map(|&arg| {
        log_points(0.1, 100.0, 40).into_iter().map(move |r| {
            bessel_recurrence_check(1.0, Complex64::from_polar(r, arg)).map_err(|e| e.to_string())
        })
    }));
    checks.push(Check::new("special: recurrence residual", rec, 1e-10));

    let ident = worst([0.5, 1.0, 2.0, 5.0, 10.0, 20.0].iter().flat_map(|&z| {
        [0.0, 2.0].into_iter().map(move |alpha| {
            let (ber, bei) = kelvin_pair(alpha, z, &p).map_err(|e| e.to_string())?;
            let i = bessel_i(alpha, Complex64::from_polar(z, FRAC_PI_4), &p)
                .map_err(|e| e.to_string())?;
            let rhs = Complex64::from_polar(1.0, alpha * FRAC_PI_2) * i;
            Ok((Complex64::new(ber, bei) - rhs).norm() / (1.0 + i.norm()))
        })
    }));
    checks.push(Check::new("special: Kelvin/Bessel identity", ident, 1e-8));

    let ratio = worst(log_points(0.05, 40.0, 12).into_iter().flat_map(|r| {
        [-1.2, 0.0, 0.7].into_iter().map(move |arg| {
            let z = Complex64::from_polar(r, arg);
            let q = bessel_i(1.0, z, &p).map_err(|e| e.to_string())?
                / bessel_i(0.0, z, &p).map_err(|e| e.to_string())?;
            let got = bessel_ratio(0.0, z, &p).map_err(|e| e.to_string())?;
            Ok((got - q).norm() / q.norm())
        })
    }));
    checks.push(Check::new("special: ratio vs quotient", ratio, 1e-11));
    checks
}

pub fn validate(common: &Common) -> Result<(), CliError> {
    let Setup { medium, talbot } = setup(common)?;
    let mut checks = special_function_checks();

    let report = laplace::self_test(&talbot);
    for r in &report.pairs {
        let value = if r.failures.is_empty() {
            r.max_abs_error
        } else {
            f64::INFINITY
        };
        checks.push(Check::new(
            format!("laplace: {} pair", r.pair.name()),
            value,
            1e-8,
        ));
    }
    let ratios: Vec<f64> = report
        .convergence
        .windows(2)
        .filter(|w| w[0].1 > laplace::ROUNDING_FLOOR)
        .map(|w| w[1].1 / w[0].1)
        .collect();
    checks.push(Check::new(
        "laplace: erfc error ratio per doubling",
        ratios.iter().copied().fold(0.0, f64::max),
        0.1,
    ));

    let omegas: Vec<f64> = log_points(1e-3, 1e3, 200)
        .iter()
        .map(|w| w / medium.tau())
        .collect();
    match cross_oracle_sweep(&omegas, &medium) {
        Ok(r) => {
            checks.push(Check::new(
                "dispersion: Kelvin vs Bessel k^2",
                r.max_ab_vs_k2,
                1e-8,
            ));
            checks.push(Check::new(
                "dispersion: branch closure",
                r.max_closure,
                1e-9,
            ));
            checks.push(Check::new(
                "dispersion: relation residual",
                r.max_residual,
                1e-8,
            ));
        }
        Err(e) => {
            eprintln!("dispersion sweep failed: {e}");
            checks.push(Check::new(
                "dispersion: cross-oracle sweep",
                f64::INFINITY,
                0.0,
            ));
        }
    }

    let boundary = StepResponseProblem::new(medium, 0.0).expect("x = 0 is valid");
    let rec = worst(log_points(1e-2, 1e2, 9).into_iter().map(|tt| {
        transient::step_response(tt * medium.tau(), &boundary, &talbot)
            .map(|y| (y - 1.0).abs())
            .map_err(|e| e.to_string())
    }));
    checks.push(Check::new("transient: boundary recovery", rec, 1e-6));

    let erfc_pair = FnTransform::new(|s: Complex64| (-s.sqrt()).exp() / s, 0.0);
    let v = laplace::invert(&erfc_pair, 1.0, &talbot)
        .map(|v| v.value)
        .unwrap_or(f64::NAN);
    checks.push(Check::new(
        "laplace: erfc(0.5) at t = 1",
        (v - 0.479_500_122_186_953_5).abs(),
        1e-6,
    ));

    let sep = common.format.separator();
    let mut out = format!("# {}\n", echo("validate", common, ""));
    out.push_str(&["check", "value", "threshold", "status"].join(&sep.to_string()));
    out.push('\n');
    for c in &checks {
        let status = if c.passed() { "pass" } else { "FAIL" };
        out.push_str(&format!(
            "{}{sep}{:.3e}{sep}{:.0e}{sep}{status}\n",
            c.name, c.value, c.threshold
        ));
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    out.push_str(&format!("# {} checks, {} failed\n", checks.len(), failed));
    match &common.out {
        Some(path) => fs::write(path, &out).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?,
        None => print!("{out}"),
    }
    if failed > 0 {
        return Err(CliError::Compute {
            module: "validate",
            params: format!("{} of {} checks", failed, checks.len()),
            message: "self checks failed".into(),
        });
    }
    Ok(())
}
