use crate::args::{ContourArgs, MetricArgs, OracleArgs, OutputFormat, ScalingArgs, SchemeArgs};
use crate::output::{fmt_e, write_output};
use qcb_core::scaling::{
    self, ComponentId, CriticalCase, CriticalExpectation, ExponentFit, FitModel, Regime,
};
use qcb_core::{
    full_metric, oracle, CouplingPoint, EvaluationScheme, QuadratureParams, Region, ThermalPoint,
};
use rayon::prelude::*;
use serde_json::{json, Value};

pub const EXIT_INVALID_INPUT: u8 = 2;
pub const EXIT_EXPECTED_CHECK_FAILED: u8 = 3;
pub const EXIT_ORACLE_THRESHOLD: u8 = 4;

pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INVALID_INPUT,
            message: message.into(),
        }
    }
}

impl From<qcb_core::Error> for CliError {
    fn from(e: qcb_core::Error) -> Self {
        CliError::invalid(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::invalid(format!("i/o error: {e}"))
    }
}

type CmdResult = Result<u8, CliError>;

fn scheme_from(args: &SchemeArgs) -> Result<EvaluationScheme, CliError> {
    let base = match args.finite_n {
        Some(n) => EvaluationScheme::finite(n)?,
        None => EvaluationScheme::thermodynamic(),
    };
    Ok(base.with_quadrature(QuadratureParams {
        rel_tol: args.rel_tol,
        max_depth: args.max_depth,
    }))
}

fn scheme_json(scheme: &EvaluationScheme) -> Value {
    match scheme.kind {
        qcb_core::SchemeKind::FiniteN(n) => json!({ "finite_n": n }),
        qcb_core::SchemeKind::ThermodynamicLimit => json!("thermodynamic-limit"),
    }
}

/// Header shared by all metric-grid CSV output (versioned; do not reorder).
pub const METRIC_CSV_HEADER: &str =
    "lambda,gamma,T,g_bb,g_bg,g_bl,g_gg,g_gl,g_ll,nc_gg,nc_gl,nc_ll,max_eig";

pub const CONTOUR_CSV_HEADER: &str = "lambda,gamma,T,max_eig,vx,vy,vz";

pub fn cmd_metric(args: &MetricArgs) -> CmdResult {
    let coupling = CouplingPoint::new(args.gamma, args.lambda)?;
    let point = match (args.t, args.beta, args.zero_t) {
        (Some(t), None, false) => {
            if t.is_nan() || t <= 0.0 {
                return Err(CliError::invalid(format!(
                    "temperature must be > 0, got {t}"
                )));
            }
            ThermalPoint::new(1.0 / t, coupling)?
        }
        (None, Some(beta), false) => ThermalPoint::new(beta, coupling)?,
        (None, None, true) => ThermalPoint::zero_temperature(coupling),
        _ => {
            return Err(CliError::invalid(
                "specify exactly one of --t, --beta, --zero-t",
            ))
        }
    };
    let scheme = scheme_from(&args.scheme)?;
    let tensor = full_metric(&point, &scheme)?;
    let (max_eig, direction) = tensor.max_eigenvalue()?;

    let text = match args.format {
        OutputFormat::Json => {
            let c = tensor.classical;
            let nc = tensor.nonclassical;
            let v = json!({
                "lambda": args.lambda,
                "gamma": args.gamma,
                "t": if point.is_zero_temperature() { 0.0 } else { point.temperature() },
                "beta": if point.is_zero_temperature() { Value::Null } else { json!(point.beta()) },
                "scheme": scheme_json(&scheme),
                "classical": {
                    "bb": c.beta_beta, "bg": c.beta_gamma, "bl": c.beta_lambda,
                    "gg": c.gamma_gamma, "gl": c.gamma_lambda, "ll": c.lambda_lambda,
                },
                "nonclassical": {
                    "gg": nc.gamma_gamma, "gl": nc.gamma_lambda, "ll": nc.lambda_lambda,
                },
                "matrix": tensor.matrix(),
                "max_eig": max_eig,
                "direction": direction,
                "classical_zero_t_limit": tensor.classical_zero_t_limit,
                "converged": tensor.converged,
            });
            format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
        }
        OutputFormat::Csv => {
            let t = if point.is_zero_temperature() {
                0.0
            } else {
                point.temperature()
            };
            let c = tensor.classical.as_array();
            let nc = tensor.nonclassical.as_array();
            let mut row = vec![fmt_e(args.lambda), fmt_e(args.gamma), fmt_e(t)];
            row.extend(c.iter().map(|&x| fmt_e(x)));
            row.extend(nc.iter().map(|&x| fmt_e(x)));
            row.push(fmt_e(max_eig));
            format!("{METRIC_CSV_HEADER}\n{}\n", row.join(","))
        }
    };
    write_output(&text, &args.out)?;
    Ok(0)
}

fn grid(min: f64, max: f64, count: usize) -> Vec<f64> {
    if count <= 1 {
        return vec![min];
    }
    (0..count)
        .map(|i| min + (max - min) * i as f64 / (count - 1) as f64)
        .collect()
}

struct ContourRow {
    lambda: f64,
    gamma: f64,
    max_eig: f64,
    direction: [f64; 3],
    failed: bool,
}

pub fn cmd_contour(args: &ContourArgs) -> CmdResult {
    if args.t.is_nan() || args.t <= 0.0 {
        return Err(CliError::invalid(format!(
            "temperature must be > 0, got {}",
            args.t
        )));
    }
    if args.lambda_count < 1 || args.gamma_count < 1 {
        return Err(CliError::invalid("grid counts must be >= 1"));
    }
    let cap = match args.cap.as_str() {
        "none" => None,
        s => Some(s.parse::<f64>().map_err(|_| {
            CliError::invalid(format!("--cap must be a number or \"none\", got {s:?}"))
        })?),
    };
    let scheme = scheme_from(&args.scheme)?;
    let beta = 1.0 / args.t;
    let lambdas = grid(args.lambda_min, args.lambda_max, args.lambda_count);
    let gammas = grid(args.gamma_min, args.gamma_max, args.gamma_count);
    for &g in &gammas {
        CouplingPoint::new(g, args.lambda_min)?;
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs)
        .build()
        .map_err(|e| CliError::invalid(format!("worker pool: {e}")))?;

    // λ outer, γ inner; the parallel map preserves this ordering.
    let cells: Vec<(f64, f64)> = lambdas
        .iter()
        .flat_map(|&l| gammas.iter().map(move |&g| (l, g)))
        .collect();
    let rows: Vec<ContourRow> = pool.install(|| {
        cells
            .par_iter()
            .map(|&(lambda, gamma)| {
                let result = CouplingPoint::new(gamma, lambda)
                    .and_then(|c| ThermalPoint::new(beta, c))
                    .and_then(|p| full_metric(&p, &scheme))
                    .and_then(|m| m.max_eigenvalue().map(|e| (m.converged, e)));
                match result {
                    Ok((true, (val, dir))) => ContourRow {
                        lambda,
                        gamma,
                        max_eig: val,
                        direction: dir,
                        failed: false,
                    },
                    _ => ContourRow {
                        lambda,
                        gamma,
                        max_eig: f64::NAN,
                        direction: [f64::NAN; 3],
                        failed: true,
                    },
                }
            })
            .collect()
    });

    let failures = rows.iter().filter(|r| r.failed).count();
    if failures > 0 {
        eprintln!(
            "warning: {failures} of {} grid points failed and were written as NaN",
            rows.len()
        );
    }

    let text = match args.format {
        OutputFormat::Csv => {
            let mut out = String::with_capacity(rows.len() * 96 + 64);
            out.push_str(CONTOUR_CSV_HEADER);
            out.push('\n');
            for r in &rows {
                let capped = match cap {
                    Some(c) if !r.failed => r.max_eig.min(c),
                    _ => r.max_eig,
                };
                out.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    fmt_e(r.lambda),
                    fmt_e(r.gamma),
                    fmt_e(args.t),
                    fmt_e(capped),
                    fmt_e(r.direction[0]),
                    fmt_e(r.direction[1]),
                    fmt_e(r.direction[2])
                ));
            }
            out
        }
        OutputFormat::Json => {
            let items: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let capped = match cap {
                        Some(c) if !r.failed => r.max_eig.min(c),
                        _ => r.max_eig,
                    };
                    json!({
                        "lambda": r.lambda,
                        "gamma": r.gamma,
                        "t": args.t,
                        "max_eig": if capped.is_nan() { Value::Null } else { json!(capped) },
                        "direction": if r.failed { Value::Null } else { json!(r.direction) },
                    })
                })
                .collect();
            format!("{}\n", serde_json::to_string_pretty(&items).expect("json"))
        }
    };
    write_output(&text, &args.out)?;
    Ok(0)
}

fn model_label(m: FitModel) -> &'static str {
    match m {
        FitModel::QuasiClassicalClassical => "quasiclassical-classical",
        FitModel::QuasiClassicalNonclassical => "quasiclassical-nonclassical",
        FitModel::CriticalPowerLaw => "critical-power-law",
        FitModel::CriticalConstant => "critical-constant",
        FitModel::ExactZero => "exact-zero",
    }
}

enum Expectation {
    QuasiAlpha(f64),
    Critical(CriticalExpectation),
}

fn expectation_for(
    regime: Regime,
    region: Region,
    case: Option<CriticalCase>,
    component: ComponentId,
) -> Option<Expectation> {
    match regime {
        Regime::QuasiClassical => {
            scaling::table_quasiclassical_exponent(region, component).map(Expectation::QuasiAlpha)
        }
        Regime::QuantumCritical => {
            scaling::table_critical(case?, component).map(Expectation::Critical)
        }
    }
}

fn expectation_passes(e: &Expectation, fit: &ExponentFit) -> bool {
    match e {
        Expectation::QuasiAlpha(a) => (fit.alpha - a).abs() <= 0.1,
        Expectation::Critical(CriticalExpectation::Power(p)) => {
            fit.model == FitModel::CriticalPowerLaw && (fit.alpha - p).abs() <= 0.05
        }
        Expectation::Critical(CriticalExpectation::Constant) => {
            fit.model == FitModel::CriticalConstant
        }
        Expectation::Critical(CriticalExpectation::Zero) => fit.model == FitModel::ExactZero,
    }
}

fn expectation_label(e: &Expectation) -> String {
    match e {
        Expectation::QuasiAlpha(a) => format!("{a}"),
        Expectation::Critical(CriticalExpectation::Power(p)) => format!("T^{p}"),
        Expectation::Critical(CriticalExpectation::Constant) => "const".into(),
        Expectation::Critical(CriticalExpectation::Zero) => "zero".into(),
    }
}

pub fn cmd_scaling(args: &ScalingArgs) -> CmdResult {
    let coupling = CouplingPoint::new(args.gamma, args.lambda)?;
    let gap = qcb_core::gap(&coupling);
    let is_critical = gap.region == Region::Critical;
    if args.critical && !is_critical {
        return Err(CliError::invalid(format!(
            "--critical requested but ({}, {}) is gapped (gap {:.6})",
            args.gamma, args.lambda, gap.value
        )));
    }
    let (t_min, t_max) = if is_critical {
        (args.t_min.unwrap_or(1e-4), args.t_max.unwrap_or(1e-2))
    } else {
        (
            args.t_min.unwrap_or(gap.value / 500.0),
            args.t_max.unwrap_or(gap.value / 20.0),
        )
    };

    let components: Vec<ComponentId> = if args.components.is_empty() {
        if is_critical {
            vec![ComponentId::NcGg, ComponentId::NcGl, ComponentId::NcLl]
        } else {
            ComponentId::ALL.to_vec()
        }
    } else {
        args.components
            .iter()
            .map(|s| {
                ComponentId::parse(s)
                    .ok_or_else(|| CliError::invalid(format!("unknown component {s:?}")))
            })
            .collect::<Result<_, _>>()?
    };

    let scheme = scheme_from(&args.scheme)?;
    let sweep = scaling::sweep_temperature(&coupling, t_min, t_max, args.points, &scheme)?;
    let case = CriticalCase::classify(&coupling);

    let mut fits = Vec::new();
    for &component in &components {
        let fit = match sweep.regime {
            Regime::QuasiClassical => scaling::fit_quasiclassical(&sweep, component)?,
            Regime::QuantumCritical => scaling::fit_critical(&sweep, component)?,
        };
        fits.push(fit);
    }

    let mut any_expected_failed = false;
    let mut annotated = Vec::new();
    for fit in &fits {
        let expectation = if args.expected {
            expectation_for(sweep.regime, gap.region, case, fit.component)
        } else {
            None
        };
        let pass = expectation.as_ref().map(|e| expectation_passes(e, fit));
        if pass == Some(false) {
            any_expected_failed = true;
        }
        annotated.push((fit, expectation, pass));
    }

    let text = match args.format {
        OutputFormat::Json => {
            let rows: Vec<Value> = annotated
                .iter()
                .map(|(fit, expectation, pass)| {
                    json!({
                        "component": fit.component.label(),
                        "model": model_label(fit.model),
                        "alpha": fit.alpha,
                        "alpha_stderr": fit.alpha_stderr,
                        "r_squared": fit.r_squared,
                        "window": [fit.window.0, fit.window.1],
                        "reliable": fit.reliable,
                        "dropped_points": fit.dropped_points,
                        "constant": fit.constant,
                        "expected": expectation.as_ref().map(expectation_label),
                        "pass": pass,
                    })
                })
                .collect();
            let mut doc = json!({
                "gamma": args.gamma,
                "lambda": args.lambda,
                "gap": gap.value,
                "regime": match sweep.regime {
                    Regime::QuasiClassical => "quasi-classical",
                    Regime::QuantumCritical => "quantum-critical",
                },
                "region": match gap.region {
                    Region::A => "A",
                    Region::B => "B",
                    Region::Critical => "critical",
                },
                "window": [t_min, t_max],
                "points": args.points,
                "fits": rows,
            });
            if let Some(case) = case {
                let report = scaling::scaling_dimension_report(&fits, case);
                let rows: Vec<Value> = report
                    .rows
                    .iter()
                    .map(|r| {
                        json!({
                            "component": r.component.label(),
                            "predicted": match r.predicted {
                                scaling::ScalingPrediction::Power(p) => json!(p),
                                scaling::ScalingPrediction::ExactZero => json!("zero"),
                            },
                            "fitted_alpha": r.fitted_alpha,
                            "fitted_model": model_label(r.fitted_model),
                            "consistent": r.consistent,
                        })
                    })
                    .collect();
                doc["dimension_report"] = json!(rows);
            }
            format!("{}\n", serde_json::to_string_pretty(&doc).expect("json"))
        }
        OutputFormat::Csv => {
            let mut out = String::from(
                "component,model,alpha,alpha_stderr,r_squared,t_min,t_max,reliable,dropped,constant,expected,pass\n",
            );
            for (fit, expectation, pass) in &annotated {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{},{},{}\n",
                    fit.component.label(),
                    model_label(fit.model),
                    fmt_e(fit.alpha),
                    fmt_e(fit.alpha_stderr),
                    fmt_e(fit.r_squared),
                    fmt_e(fit.window.0),
                    fmt_e(fit.window.1),
                    fit.reliable,
                    fit.dropped_points,
                    fit.constant.map(fmt_e).unwrap_or_default(),
                    expectation
                        .as_ref()
                        .map(expectation_label)
                        .unwrap_or_default(),
                    pass.map(|p| p.to_string()).unwrap_or_default(),
                ));
            }
            out
        }
    };
    write_output(&text, &args.out)?;
    Ok(if any_expected_failed {
        EXIT_EXPECTED_CHECK_FAILED
    } else {
        0
    })
}

fn parse_triple(s: &str, what: &str) -> Result<[f64; 3], CliError> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(CliError::invalid(format!(
            "{what} must be three comma-separated numbers, got {s:?}"
        )));
    }
    let mut out = [0.0; 3];
    for (slot, p) in out.iter_mut().zip(parts) {
        *slot = p
            .trim()
            .parse()
            .map_err(|_| CliError::invalid(format!("bad number {p:?} in {what} {s:?}")))?;
    }
    Ok(out)
}

pub fn cmd_oracle_check(args: &OracleArgs) -> CmdResult {
    if args.threshold.is_nan() || args.threshold <= 0.0 {
        return Err(CliError::invalid("threshold must be positive"));
    }
    let points: Vec<[f64; 3]> = if args.points.is_empty() {
        vec![[2.0, 0.8, 0.3]]
    } else {
        args.points
            .iter()
            .map(|s| parse_triple(s, "--point"))
            .collect::<Result<_, _>>()?
    };
    let isq = std::f64::consts::FRAC_1_SQRT_2;
    let directions: Vec<[f64; 3]> = if args.directions.is_empty() {
        vec![
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, 0.0, 1.0],
            [isq, isq, 0.0],
            [0.0, isq, isq],
            [isq, 0.0, isq],
        ]
    } else {
        args.directions
            .iter()
            .map(|s| parse_triple(s, "--direction"))
            .collect::<Result<_, _>>()?
    };

    let mut rows = Vec::new();
    let mut breaches = 0usize;
    for &[beta, gamma, lambda] in &points {
        let p = ThermalPoint::new(beta, CouplingPoint::new(gamma, lambda)?)?;
        for &dir in &directions {
            let check = oracle::fd_metric_check(&p, dir, args.step, args.n)?;
            let pass = check.rel_err < args.threshold;
            if !pass {
                breaches += 1;
            }
            rows.push((beta, gamma, lambda, dir, check, pass));
        }
    }

    let text = match args.format {
        OutputFormat::Json => {
            let items: Vec<Value> = rows
                .iter()
                .map(|(b, g, l, dir, check, pass)| {
                    json!({
                        "beta": b,
                        "gamma": g,
                        "lambda": l,
                        "direction": dir,
                        "scaled_direction": check.direction,
                        "analytic": check.analytic,
                        "oracle": check.oracle,
                        "rel_err": check.rel_err,
                        "step_warning": check.step_warning,
                        "pass": pass,
                    })
                })
                .collect();
            let doc = json!({
                "n": args.n,
                "step": args.step,
                "threshold": args.threshold,
                "checks": items,
            });
            format!("{}\n", serde_json::to_string_pretty(&doc).expect("json"))
        }
        OutputFormat::Csv => {
            let mut out = String::from("beta,gamma,lambda,db,dg,dl,analytic,oracle,rel_err,pass\n");
            for (b, g, l, dir, check, pass) in &rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{}\n",
                    fmt_e(*b),
                    fmt_e(*g),
                    fmt_e(*l),
                    fmt_e(dir[0]),
                    fmt_e(dir[1]),
                    fmt_e(dir[2]),
                    fmt_e(check.analytic),
                    fmt_e(check.oracle),
                    fmt_e(check.rel_err),
                    pass
                ));
            }
            out
        }
    };
    write_output(&text, &args.out)?;
    Ok(if breaches > 0 {
        EXIT_ORACLE_THRESHOLD
    } else {
        0
    })
}
