use std::f64::consts::PI;

use serde_json::json;

use eprb_core::analysis::{self, rel_diff};
use eprb_core::closed_form::{self, closed_curve};
use eprb_core::montecarlo::{self, estimate_curve, simulate_batch, substream_seed};
use eprb_core::quadrature::{quad_expectation, sweep_curve, QuadratureGrid};
use eprb_core::spectral::spectral_curve;
use eprb_core::{
    csv, svg, Angle, CorrelationMode, Curve, DetectionDensity, GridMode, Method, RunManifest,
    TheoryConfig,
};

use crate::args::{
    default_method, resolve, to_method, BellArgs, CliError, FormatArg, StatsArgs, SweepArgs,
    TheoryArg, TradeoffArgs, VerifyArgs,
};
use crate::output::{emit, emit_json, now_unix};

const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Per-pair tolerances of the verify cross-check. quad and dft evaluate the
/// same discrete sums, so they must agree to rounding; the closed forms
/// differ from quadrature by the |.|-kink truncation of the rectangle rule,
/// about 3.5e-4 on t at 256 node-aligned angles.
const TOL_QUAD_DFT: f64 = 1e-6;
const TOL_CLOSED_C: f64 = 1e-9;
const TOL_CLOSED_T: f64 = 1e-3;
const TOL_CLOSED_E: f64 = 5e-4;
const MC_SE_LIMIT: f64 = 4.0;

fn has_closed_form(density: &DetectionDensity) -> bool {
    matches!(
        density,
        DetectionDensity::NaiveSg | DetectionDensity::Projection
    )
}

/// (se_e, se_t) per point, present for the Monte Carlo method only.
type PointErrors = Vec<(f64, f64)>;

fn compute_curve(
    cfg: &TheoryConfig,
    method: Method,
) -> Result<(Curve, Option<PointErrors>), CliError> {
    match method {
        Method::Closed => Ok((closed_curve(cfg.density, cfg.mode, cfg.phi_points)?, None)),
        Method::Quad => Ok((sweep_curve(cfg)?, None)),
        Method::Dft => Ok((
            spectral_curve(&cfg.density, cfg.theta_points, cfg.mode)?,
            None,
        )),
        Method::Mc => {
            let mc = estimate_curve(cfg)?;
            let errors = mc.points.iter().map(|p| (p.se_e, p.se_t)).collect();
            Ok((mc.curve(), Some(errors)))
        }
    }
}

fn curve_points_json(curve: &Curve, errors: &Option<PointErrors>) -> Vec<serde_json::Value> {
    let center = curve.t_center();
    curve
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let rel_dev_t = if center == 0.0 {
                0.0
            } else {
                (p.t - center) / center
            };
            let mut v = json!({
                "phi_rad": p.phi.radians(),
                "c": p.c,
                "t": p.t,
                "e_hv": p.e_hv,
                "e_ref": p.e_ref,
                "diff_e": p.e_diff(),
                "rel_dev_t": rel_dev_t,
            });
            if let Some(errors) = errors {
                v["se_e"] = errors[i].0.into();
                v["se_t"] = errors[i].1.into();
            }
            v
        })
        .collect()
}

fn plot_title(cfg: &TheoryConfig, method: Method) -> String {
    let mode = match cfg.mode {
        CorrelationMode::Correlated => "correlated",
        CorrelationMode::Anticorrelated => "anticorrelated",
    };
    format!("{} {} ({})", cfg.density.label(), mode, method)
}

pub fn sweep(args: SweepArgs) -> Result<(), CliError> {
    let resolved = resolve(&args.common)?;
    let cfg = resolved.config;
    let method = args.method.map(to_method).unwrap_or(Method::Quad);
    let (curve, errors) = compute_curve(&cfg, method)?;
    let manifest = RunManifest::new(&cfg, method, VERSION, now_unix());
    match args.common.format {
        FormatArg::Csv => emit(
            args.common.out.as_deref(),
            &csv::curve_to_csv(&curve),
            Some(&manifest),
        )?,
        FormatArg::Json => emit_json(
            args.common.out.as_deref(),
            &json!({
                "manifest": manifest,
                "points": curve_points_json(&curve, &errors),
            }),
        )?,
    }
    if let Some(plot) = &args.common.plot {
        emit(
            Some(plot),
            &svg::curve_plot(&curve, &plot_title(&cfg, method)),
            Some(&manifest),
        )?;
    }
    Ok(())
}

/// Closed-form or quadrature expectation as a function of the analyzer
/// separation, usable at any angle via the even-periodic fold.
fn expectation_eval(
    cfg: &TheoryConfig,
    method: Method,
) -> Result<Box<dyn Fn(Angle) -> eprb_core::Result<f64>>, CliError> {
    let density = cfg.density;
    let mode = cfg.mode;
    match method {
        Method::Closed => {
            if !has_closed_form(&density) {
                return Err(CliError::usage(format!(
                    "no closed form for the {} density; use --method quad or mc",
                    density.label()
                )));
            }
            // the closed laws are stated for the anticorrelated source;
            // e = sigma * c/t flips their sign for the correlated one
            Ok(Box::new(move |phi: Angle| {
                let folded = phi.folded();
                let anticorr = match density {
                    DetectionDensity::NaiveSg => closed_form::naive_expectation(folded)?,
                    _ => closed_form::projection_curves(folded)?.expectation,
                };
                Ok(-mode.sign() * anticorr)
            }))
        }
        Method::Quad => {
            let grid = QuadratureGrid::new(cfg.grid_mode, cfg.theta_points)?;
            Ok(Box::new(move |phi: Angle| {
                Ok(quad_expectation(&density, phi.folded(), mode, &grid)?.e_hv)
            }))
        }
        Method::Dft | Method::Mc => Err(CliError::usage(
            "expectation tables support --method closed or quad here",
        )),
    }
}

fn parse_angles_deg(spec: &str) -> Result<[Angle; 3], CliError> {
    let parts: Vec<&str> = spec.split(',').collect();
    if parts.len() != 3 {
        return Err(CliError::usage(format!(
            "--angles needs three comma-separated degrees, got {spec:?}"
        )));
    }
    let mut angles = [Angle::ZERO; 3];
    for (slot, part) in angles.iter_mut().zip(&parts) {
        let deg: f64 = part
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("bad angle {part:?} in --angles")))?;
        if !deg.is_finite() {
            return Err(CliError::usage(format!("bad angle {part:?} in --angles")));
        }
        *slot = Angle::from_degrees(deg);
    }
    Ok(angles)
}

pub fn bell(args: BellArgs) -> Result<(), CliError> {
    let resolved = resolve(&args.common)?;
    let cfg = resolved.config;
    let method = args
        .method
        .map(to_method)
        .unwrap_or(default_method(resolved.has_closed_form));
    if method == Method::Dft {
        return Err(CliError::usage(
            "--method dft is not applicable to bell; use closed, quad, or mc",
        ));
    }
    let manifest = RunManifest::new(&cfg, method, VERSION, now_unix());
    if args.scan {
        return bell_scan_report(&args, &cfg, method, manifest);
    }
    let spec = args
        .angles
        .as_deref()
        .ok_or_else(|| CliError::usage("bell needs --angles a,b,c (degrees) or --scan"))?;
    let [a, b, c] = parse_angles_deg(spec)?;
    let report = match method {
        Method::Mc => {
            let trial = montecarlo::bell_trial(
                &cfg.density,
                a,
                b,
                c,
                cfg.pairs_per_angle,
                cfg.mode,
                cfg.seed,
            )?;
            json!({
                "manifest": manifest,
                "angles_deg": [a.degrees(), b.degrees(), c.degrees()],
                "lhs": trial.lhs,
                "rhs": trial.rhs,
                "se_lhs": trial.se_lhs,
                "se_rhs": trial.se_rhs,
                "violated": trial.violated,
            })
        }
        _ => {
            let eval = expectation_eval(&cfg, method)?;
            let separations = [a.separation(b), a.separation(c), b.separation(c)];
            let mut values = std::collections::HashMap::new();
            for sep in separations {
                values.insert(sep.radians().to_bits(), eval(sep)?);
            }
            let triple =
                analysis::bell_evaluate(|phi| values[&phi.radians().to_bits()], a, b, c);
            json!({
                "manifest": manifest,
                "angles_deg": [a.degrees(), b.degrees(), c.degrees()],
                "lhs": triple.lhs,
                "rhs": triple.rhs,
                "violated": triple.violated,
            })
        }
    };
    emit_json(args.common.out.as_deref(), &report)
}

fn bell_scan_report(
    args: &BellArgs,
    cfg: &TheoryConfig,
    method: Method,
    manifest: RunManifest,
) -> Result<(), CliError> {
    let step = Angle::from_degrees(args.step);
    let step_rad = step.radians();
    let divisions = PI / step_rad;
    if step_rad <= 0.0 || (divisions - divisions.round()).abs() > 1e-9 * divisions.max(1.0) {
        return Err(CliError::usage(format!(
            "--step {} does not divide 180 degrees",
            args.step
        )));
    }
    let m = divisions.round() as usize;
    // every separation on the grid, evaluated once
    let e_values: Vec<f64> = match method {
        Method::Mc => (0..=m)
            .map(|k| {
                simulate_batch(
                    &cfg.density,
                    Angle::from_radians(step_rad * k as f64),
                    cfg.pairs_per_angle,
                    cfg.mode,
                    substream_seed(cfg.seed, k as u64),
                )
                .expectation()
            })
            .collect::<eprb_core::Result<_>>()?,
        _ => {
            let eval = expectation_eval(cfg, method)?;
            (0..=m)
                .map(|k| eval(Angle::from_radians(step_rad * k as f64)))
                .collect::<eprb_core::Result<_>>()?
        }
    };
    let triples = analysis::bell_scan(
        |phi| e_values[(phi.radians() / step_rad).round() as usize],
        step,
    )?;
    let violations = triples.iter().filter(|t| t.violated).count();
    let top: Vec<serde_json::Value> = triples
        .iter()
        .take(args.top)
        .map(|t| {
            json!({
                "a_deg": t.a.degrees(),
                "b_deg": t.b.degrees(),
                "c_deg": t.c.degrees(),
                "lhs": t.lhs,
                "rhs": t.rhs,
                "margin": t.margin(),
                "violated": t.violated,
            })
        })
        .collect();
    emit_json(
        args.common.out.as_deref(),
        &json!({
            "manifest": manifest,
            "step_deg": args.step,
            "triples": triples.len(),
            "violations": violations,
            "top": top,
        }),
    )
}

pub fn verify(args: VerifyArgs) -> Result<(), CliError> {
    let density = crate::args::build_density(args.theory, args.exponent)?;
    let mode = match args.mode {
        Some(crate::args::ModeArg::Corr) => CorrelationMode::Correlated,
        Some(crate::args::ModeArg::Anticorr) => CorrelationMode::Anticorrelated,
        None => crate::args::native_mode(args.theory),
    };
    let n = args.theta_points;
    let cfg = TheoryConfig {
        density,
        mode,
        theta_points: n,
        phi_points: n,
        grid_mode: GridMode::FullPeriod,
        seed: args.seed,
        pairs_per_angle: args.pairs,
    };
    cfg.validate()?;
    let manifest = RunManifest::new(&cfg, Method::Quad, VERSION, now_unix());

    if args.theory == TheoryArg::Naive {
        // the toy model is defined by its closed form; the probabilistic
        // routes are exercised in the test suite, not here
        return emit_json(
            args.out.as_deref(),
            &json!({
                "manifest": manifest,
                "theory": "naive",
                "paths": ["closed"],
                "note": "single path; nothing to cross-check",
                "pass": true,
            }),
        );
    }

    let spectral = spectral_curve(&density, n, mode)?;
    let grid = QuadratureGrid::full(n)?;
    let mut checks = Vec::new();
    let mut pass = true;

    // quad vs dft on the identical node set
    let (mut wc, mut wt, mut we) = (0.0f64, 0.0f64, 0.0f64);
    let mut quads = Vec::with_capacity(spectral.len());
    for p in &spectral {
        let q = quad_expectation(&density, p.phi, mode, &grid)?;
        wc = wc.max(rel_diff(p.c, q.c));
        wt = wt.max(rel_diff(p.t, q.t));
        we = we.max(rel_diff(p.e_hv, q.e_hv));
        quads.push(q);
    }
    let ok = wc <= TOL_QUAD_DFT && wt <= TOL_QUAD_DFT && we <= TOL_QUAD_DFT;
    pass &= ok;
    checks.push(json!({
        "pair": "quad_vs_dft",
        "max_rel_diff": {"c": wc, "t": wt, "e": we},
        "tolerance": TOL_QUAD_DFT,
        "pass": ok,
    }));

    // closed form vs quad, truncation-limited
    if args.theory == TheoryArg::Proj {
        let (mut wc, mut wt, mut we) = (0.0f64, 0.0f64, 0.0f64);
        for q in &quads {
            let folded = q.phi.folded();
            let exact = closed_form::projection_curves(folded)?;
            let e_closed = -mode.sign() * exact.expectation;
            wc = wc.max(rel_diff(q.c, PI * q.phi.radians().cos()));
            wt = wt.max(rel_diff(q.t, exact.t));
            we = we.max(rel_diff(q.e_hv, e_closed));
        }
        let ok = wc <= TOL_CLOSED_C && wt <= TOL_CLOSED_T && we <= TOL_CLOSED_E;
        pass &= ok;
        checks.push(json!({
            "pair": "closed_vs_quad",
            "max_rel_diff": {"c": wc, "t": wt, "e": we},
            "tolerance": {"c": TOL_CLOSED_C, "t": TOL_CLOSED_T, "e": TOL_CLOSED_E},
            "note": "rectangle-rule truncation bound, not rounding",
            "pass": ok,
        }));
    }

    // Monte Carlo vs fine quadrature at spread angles
    let fine = QuadratureGrid::paper(10_000)?;
    let mut max_ratio = 0.0f64;
    let mut mc_angles = Vec::new();
    for (i, frac) in [0.1, 0.3, 0.5, 0.7, 0.9].iter().enumerate() {
        let phi = Angle::from_radians(PI * frac);
        let q = quad_expectation(&density, phi, mode, &fine)?;
        let batch = simulate_batch(
            &density,
            phi,
            cfg.pairs_per_angle,
            mode,
            substream_seed(cfg.seed, i as u64),
        );
        let e = batch.expectation()?;
        let se = batch.expectation_standard_error()?;
        let ratio = if se > 0.0 {
            (e - q.e_hv).abs() / se
        } else {
            // zero variance only when every product agrees; require the
            // estimate to match outright
            if (e - q.e_hv).abs() <= 1e-9 {
                0.0
            } else {
                f64::INFINITY
            }
        };
        max_ratio = max_ratio.max(ratio);
        mc_angles.push(phi.radians());
    }
    let ok = max_ratio <= MC_SE_LIMIT;
    pass &= ok;
    checks.push(json!({
        "pair": "mc_vs_quad",
        "phi_rad": mc_angles,
        "max_se_ratio": max_ratio,
        "tolerance_se": MC_SE_LIMIT,
        "pass": ok,
    }));

    let paths: Vec<&str> = if args.theory == TheoryArg::Proj {
        vec!["closed", "quad", "dft", "mc"]
    } else {
        vec!["quad", "dft", "mc"]
    };
    emit_json(
        args.out.as_deref(),
        &json!({
            "manifest": manifest,
            "theory": density.label(),
            "paths": paths,
            "checks": checks,
            "pass": pass,
        }),
    )?;
    if pass {
        Ok(())
    } else {
        Err(CliError::verification(
            "cross-path discrepancies exceed tolerances",
        ))
    }
}

pub fn stats(args: StatsArgs) -> Result<(), CliError> {
    let resolved = resolve(&args.common)?;
    let cfg = resolved.config;
    let method = args
        .method
        .map(to_method)
        .unwrap_or(default_method(resolved.has_closed_form));
    let (curve, _) = compute_curve(&cfg, method)?;
    let report = analysis::deviation_report(&curve)?;
    let manifest = RunManifest::new(&cfg, method, VERSION, now_unix());
    match args.common.format {
        FormatArg::Json => emit_json(
            args.common.out.as_deref(),
            &json!({ "manifest": manifest, "report": report }),
        ),
        FormatArg::Csv => {
            let text = format!(
                "mean_t,max_rel_dev_t,std_rel_dev_t,max_abs_dev_e,std_abs_dev_e,sample_points\n\
                 {},{},{},{},{},{}\n",
                csv::format_g12(report.mean_t),
                csv::format_g12(report.max_rel_dev_t),
                csv::format_g12(report.std_rel_dev_t),
                csv::format_g12(report.max_abs_dev_e),
                csv::format_g12(report.std_abs_dev_e),
                report.sample_points
            );
            emit(args.common.out.as_deref(), &text, Some(&manifest))
        }
    }
}

fn parse_exponents(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = |s: &str| CliError::usage(format!("bad exponent {s:?} in --exponents"));
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(CliError::usage(
                "--exponents range must be start:end:step",
            ));
        }
        let start: f64 = parts[0].trim().parse().map_err(|_| bad(parts[0]))?;
        let end: f64 = parts[1].trim().parse().map_err(|_| bad(parts[1]))?;
        let step: f64 = parts[2].trim().parse().map_err(|_| bad(parts[2]))?;
        if !step.is_finite() || step <= 0.0 || end < start {
            return Err(CliError::usage(
                "--exponents range needs end >= start and step > 0",
            ));
        }
        let mut out = Vec::new();
        let mut k = 0u32;
        loop {
            let p = start + step * k as f64;
            if p > end + step * 1e-9 {
                break;
            }
            out.push(p);
            k += 1;
        }
        Ok(out)
    } else {
        spec.split(',')
            .map(|s| s.trim().parse::<f64>().map_err(|_| bad(s)))
            .collect()
    }
}

pub fn tradeoff(args: TradeoffArgs) -> Result<(), CliError> {
    let resolved = resolve(&args.common)?;
    let cfg = resolved.config;
    let exponents = parse_exponents(&args.exponents)?;
    let rows = analysis::tradeoff_scan(&exponents, &cfg)?;
    let manifest = RunManifest::new(&cfg, Method::Quad, VERSION, now_unix());
    match args.common.format {
        FormatArg::Csv => emit(
            args.common.out.as_deref(),
            &csv::tradeoff_to_csv(&rows),
            Some(&manifest),
        )?,
        FormatArg::Json => emit_json(
            args.common.out.as_deref(),
            &json!({ "manifest": manifest, "rows": rows }),
        )?,
    }
    if let Some(plot) = &args.common.plot {
        emit(
            Some(plot),
            &svg::tradeoff_plot(&rows, "cos^p accuracy/rate-variation frontier"),
            Some(&manifest),
        )?;
    }
    Ok(())
}
