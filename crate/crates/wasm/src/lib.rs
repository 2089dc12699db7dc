//! Browser bindings for the correlation laboratory. Each export takes plain
//! scalars, runs one computation, and returns a JSON string: `{"error": ..}`
//! on failure, otherwise the panel payload (SVG markup plus numbers). The
//! page stays framework-free and parses the JSON itself.

use serde_json::json;
use wasm_bindgen::prelude::wasm_bindgen;

use eprb_core::analysis::{bell_scan, deviation_report, tradeoff_scan};
use eprb_core::closed_form::{closed_curve, naive_expectation, projection_curves};
use eprb_core::montecarlo::{bell_trial, estimate_curve};
use eprb_core::quadrature::{quad_expectation, sweep_curve, QuadratureGrid};
use eprb_core::spectral::spectral_curve;
use eprb_core::{
    csv, svg, Angle, CorrelationMode, Curve, DetectionDensity, Error, GridMode, Method,
    TheoryConfig,
};

fn parse_density(theory: &str, exponent: f64) -> Result<DetectionDensity, String> {
    let density = match theory {
        "naive" => DetectionDensity::naive(),
        "proj" => DetectionDensity::projection(),
        "pow" => DetectionDensity::SignedPowerCosine { exponent },
        "custom" => DetectionDensity::Custom { exponent },
        other => return Err(format!("unknown theory {other:?}")),
    };
    density.validate().map_err(|e| e.to_string())?;
    Ok(density)
}

fn parse_mode(mode: &str, theory: &str) -> Result<CorrelationMode, String> {
    match mode {
        "corr" => Ok(CorrelationMode::Correlated),
        "anticorr" => Ok(CorrelationMode::Anticorrelated),
        // the theory's native source convention
        "" | "native" => Ok(match theory {
            "pow" | "custom" => CorrelationMode::Correlated,
            _ => CorrelationMode::Anticorrelated,
        }),
        other => Err(format!("unknown mode {other:?}")),
    }
}

fn parse_method(method: &str) -> Result<Method, String> {
    method.parse::<Method>().map_err(|e| e.to_string())
}

fn error_json(message: impl std::fmt::Display) -> String {
    json!({ "error": message.to_string() }).to_string()
}

fn compute(cfg: &TheoryConfig, method: Method) -> Result<Curve, Error> {
    match method {
        Method::Closed => closed_curve(cfg.density, cfg.mode, cfg.phi_points),
        Method::Quad => sweep_curve(cfg),
        Method::Dft => spectral_curve(&cfg.density, cfg.theta_points, cfg.mode),
        Method::Mc => Ok(estimate_curve(cfg)?.curve()),
    }
}

/// Correlation/rate curves for one theory and method: SVG plot, deviation
/// statistics, and the CSV for download.
#[wasm_bindgen]
#[allow(clippy::too_many_arguments)] // flat scalars are the js boundary
pub fn sweep_panel(
    theory: &str,
    exponent: f64,
    mode: &str,
    method: &str,
    theta_points: u32,
    phi_points: u32,
    pairs: u32,
    seed: u32,
) -> String {
    let inner = || -> Result<String, String> {
        let density = parse_density(theory, exponent)?;
        let mode = parse_mode(mode, theory)?;
        let method = parse_method(method)?;
        let cfg = TheoryConfig {
            density,
            mode,
            theta_points: theta_points as usize,
            phi_points: phi_points as usize,
            grid_mode: GridMode::PaperHalfInterval,
            seed: seed as u64,
            pairs_per_angle: pairs as u64,
        };
        cfg.validate().map_err(|e| e.to_string())?;
        let curve = compute(&cfg, method).map_err(|e| e.to_string())?;
        let report = deviation_report(&curve).map_err(|e| e.to_string())?;
        let mode_label = match mode {
            CorrelationMode::Correlated => "correlated",
            CorrelationMode::Anticorrelated => "anticorrelated",
        };
        let title = format!("{} {} ({})", density.label(), mode_label, method);
        Ok(json!({
            "svg": svg::curve_plot(&curve, &title),
            "stats": report,
            "csv": csv::curve_to_csv(&curve),
            "points": curve.len(),
        })
        .to_string())
    };
    inner().unwrap_or_else(error_json)
}

/// One evaluation of |E(a,b) - E(a,c)| <= 1 + E(b,c) at three analyzer
/// angles in degrees.
#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn bell_panel(
    theory: &str,
    exponent: f64,
    mode: &str,
    method: &str,
    a_deg: f64,
    b_deg: f64,
    c_deg: f64,
    pairs: u32,
    seed: u32,
) -> String {
    let inner = || -> Result<String, String> {
        let density = parse_density(theory, exponent)?;
        let mode = parse_mode(mode, theory)?;
        let method = parse_method(method)?;
        let (a, b, c) = (
            Angle::from_degrees(a_deg),
            Angle::from_degrees(b_deg),
            Angle::from_degrees(c_deg),
        );
        if method == Method::Mc {
            let trial = bell_trial(&density, a, b, c, pairs as u64, mode, seed as u64)
                .map_err(|e| e.to_string())?;
            return Ok(json!({
                "lhs": trial.lhs,
                "rhs": trial.rhs,
                "se_lhs": trial.se_lhs,
                "se_rhs": trial.se_rhs,
                "violated": trial.violated,
            })
            .to_string());
        }
        let eval = expectation_table(&density, mode, method, 256)?;
        let seps = [a.separation(b), a.separation(c), b.separation(c)];
        let values: Vec<f64> = seps
            .iter()
            .map(|s| eval(*s))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        let lhs = (values[0] - values[1]).abs();
        let rhs = 1.0 + values[2];
        Ok(json!({
            "lhs": lhs,
            "rhs": rhs,
            "violated": lhs > rhs + eprb_core::analysis::BELL_TIE_EPS,
        })
        .to_string())
    };
    inner().unwrap_or_else(error_json)
}

type EvalFn = Box<dyn Fn(Angle) -> Result<f64, Error>>;

fn expectation_table(
    density: &DetectionDensity,
    mode: CorrelationMode,
    method: Method,
    theta_points: usize,
) -> Result<EvalFn, String> {
    let density = *density;
    match method {
        Method::Closed => match density {
            DetectionDensity::NaiveSg => Ok(Box::new(move |phi: Angle| {
                Ok(-mode.sign() * naive_expectation(phi.folded())?)
            })),
            DetectionDensity::Projection => Ok(Box::new(move |phi: Angle| {
                Ok(-mode.sign() * projection_curves(phi.folded())?.expectation)
            })),
            _ => Err(format!("no closed form for the {} density", density.label())),
        },
        Method::Quad => {
            let grid =
                QuadratureGrid::paper(theta_points).map_err(|e| e.to_string())?;
            Ok(Box::new(move |phi: Angle| {
                Ok(quad_expectation(&density, phi.folded(), mode, &grid)?.e_hv)
            }))
        }
        _ => Err("bell expectation tables support closed or quad".to_string()),
    }
}

/// Exhaustive Bell scan over grid triples: violation count and the
/// strongest cases.
#[wasm_bindgen]
pub fn bell_scan_panel(
    theory: &str,
    exponent: f64,
    mode: &str,
    method: &str,
    step_deg: f64,
    top: u32,
) -> String {
    let inner = || -> Result<String, String> {
        let density = parse_density(theory, exponent)?;
        let mode = parse_mode(mode, theory)?;
        let method = parse_method(method)?;
        let eval = expectation_table(&density, mode, method, 50)?;
        let step = Angle::from_degrees(step_deg);
        let step_rad = step.radians();
        let divisions = (std::f64::consts::PI / step_rad).round() as usize;
        let values: Vec<f64> = (0..=divisions)
            .map(|k| eval(Angle::from_radians(step_rad * k as f64)))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        let triples = bell_scan(
            |phi| values[(phi.radians() / step_rad).round() as usize],
            step,
        )
        .map_err(|e| e.to_string())?;
        let violations = triples.iter().filter(|t| t.violated).count();
        let rows: Vec<serde_json::Value> = triples
            .iter()
            .take(top as usize)
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
        Ok(json!({
            "triples": triples.len(),
            "violations": violations,
            "top": rows,
        })
        .to_string())
    };
    inner().unwrap_or_else(error_json)
}

/// The cos^p family's accuracy/rate-variation frontier over an exponent
/// range: SVG plot plus the table.
#[wasm_bindgen]
pub fn tradeoff_panel(p_min: f64, p_max: f64, p_step: f64, theta_points: u32) -> String {
    let inner = || -> Result<String, String> {
        let valid = p_step.is_finite() && p_step > 0.0 && p_min > 0.0 && p_max >= p_min;
        if !valid {
            return Err("need 0 < p_min <= p_max and p_step > 0".to_string());
        }
        let mut exponents = Vec::new();
        let mut k = 0u32;
        loop {
            let p = p_min + p_step * k as f64;
            if p > p_max + p_step * 1e-9 {
                break;
            }
            exponents.push(p);
            k += 1;
        }
        let cfg = TheoryConfig {
            density: DetectionDensity::signed_power(),
            mode: CorrelationMode::Correlated,
            theta_points: theta_points as usize,
            phi_points: 50,
            grid_mode: GridMode::PaperHalfInterval,
            seed: 42,
            pairs_per_angle: 1,
        };
        let rows = tradeoff_scan(&exponents, &cfg).map_err(|e| e.to_string())?;
        Ok(json!({
            "svg": svg::tradeoff_plot(&rows, "cos^p accuracy vs rate variation"),
            "rows": rows,
        })
        .to_string())
    };
    inner().unwrap_or_else(error_json)
}
