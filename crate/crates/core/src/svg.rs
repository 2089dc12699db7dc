//! Static SVG line plots: axes, polylines, legend. Nothing interactive and
//! nothing stateful, so output bytes depend only on the data.

use crate::analysis::TradeoffPoint;
use crate::curve::Curve;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN_L: f64 = 64.0;
const MARGIN_R: f64 = 24.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 48.0;

pub struct Series<'a> {
    pub label: &'a str,
    pub color: &'a str,
    pub dashed: bool,
    pub points: Vec<(f64, f64)>,
}

fn fmt(v: f64) -> String {
    let s = format!("{v:.2}");
    if s == "-0.00" {
        "0.00".to_string()
    } else {
        s
    }
}

fn fmt_tick(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

/// A titled line chart over the given series, axes auto-ranged with 5% pad.
pub fn line_chart(title: &str, x_label: &str, y_label: &str, series: &[Series<'_>]) -> String {
    let mut x_min = f64::INFINITY;
    let mut x_max = f64::NEG_INFINITY;
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for s in series {
        for &(x, y) in &s.points {
            x_min = x_min.min(x);
            x_max = x_max.max(x);
            y_min = y_min.min(y);
            y_max = y_max.max(y);
        }
    }
    if !x_min.is_finite() || x_min == x_max {
        x_min = 0.0;
        x_max = 1.0;
    }
    if !y_min.is_finite() || y_min == y_max {
        y_min -= 0.5;
        y_max += 0.5;
    }
    let y_pad = 0.05 * (y_max - y_min);
    y_min -= y_pad;
    y_max += y_pad;

    let plot_w = WIDTH - MARGIN_L - MARGIN_R;
    let plot_h = HEIGHT - MARGIN_T - MARGIN_B;
    let sx = |x: f64| MARGIN_L + (x - x_min) / (x_max - x_min) * plot_w;
    let sy = |y: f64| MARGIN_T + (y_max - y) / (y_max - y_min) * plot_h;

    let mut svg = String::with_capacity(4096);
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" \
         font-family=\"sans-serif\" font-size=\"13\">\n"
    ));
    svg.push_str(&format!(
        "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">{}</text>\n",
        WIDTH / 2.0,
        escape(title)
    ));

    // frame
    svg.push_str(&format!(
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#444\"/>\n",
        fmt(MARGIN_L),
        fmt(MARGIN_T),
        fmt(plot_w),
        fmt(plot_h)
    ));

    // ticks: 5 on each axis
    for i in 0..=4 {
        let fx = x_min + (x_max - x_min) * i as f64 / 4.0;
        let px = sx(fx);
        svg.push_str(&format!(
            "<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"#444\"/>\n",
            fmt(px),
            fmt(MARGIN_T + plot_h),
            fmt(MARGIN_T + plot_h + 5.0)
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
            fmt(px),
            fmt(MARGIN_T + plot_h + 20.0),
            fmt_tick(fx)
        ));
        let fy = y_min + (y_max - y_min) * i as f64 / 4.0;
        let py = sy(fy);
        svg.push_str(&format!(
            "<line x1=\"{0}\" y1=\"{2}\" x2=\"{1}\" y2=\"{2}\" stroke=\"#444\"/>\n",
            fmt(MARGIN_L - 5.0),
            fmt(MARGIN_L),
            fmt(py)
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"end\" dominant-baseline=\"middle\">{}</text>\n",
            fmt(MARGIN_L - 9.0),
            fmt(py),
            fmt_tick(fy)
        ));
    }

    // zero line when it is inside the range
    if y_min < 0.0 && y_max > 0.0 {
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{2}\" x2=\"{}\" y2=\"{2}\" stroke=\"#bbb\" stroke-dasharray=\"2,4\"/>\n",
            fmt(MARGIN_L),
            fmt(MARGIN_L + plot_w),
            fmt(sy(0.0))
        ));
    }

    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
        fmt(MARGIN_L + plot_w / 2.0),
        fmt(HEIGHT - 10.0),
        escape(x_label)
    ));
    svg.push_str(&format!(
        "<text x=\"16\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {})\">{}</text>\n",
        fmt(MARGIN_T + plot_h / 2.0),
        fmt(MARGIN_T + plot_h / 2.0),
        escape(y_label)
    ));

    for s in series {
        let pts: Vec<String> = s
            .points
            .iter()
            .map(|&(x, y)| format!("{},{}", fmt(sx(x)), fmt(sy(y))))
            .collect();
        let dash = if s.dashed { " stroke-dasharray=\"6,4\"" } else { "" };
        svg.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.8\"{}/>\n",
            pts.join(" "),
            s.color,
            dash
        ));
    }

    // legend, top-right inside the frame
    for (i, s) in series.iter().enumerate() {
        let y = MARGIN_T + 16.0 + 18.0 * i as f64;
        let x = MARGIN_L + plot_w - 150.0;
        let dash = if s.dashed { " stroke-dasharray=\"6,4\"" } else { "" };
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"{3}\" stroke-width=\"1.8\"{4}/>\n",
            fmt(x),
            fmt(y),
            fmt(x + 26.0),
            s.color,
            dash
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" dominant-baseline=\"middle\">{}</text>\n",
            fmt(x + 32.0),
            fmt(y),
            escape(s.label)
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

/// The standard curve figure: expectation and half pair rate against the
/// quantum reference.
pub fn curve_plot(curve: &Curve, title: &str) -> String {
    let e_hv: Vec<(f64, f64)> = curve.iter().map(|p| (p.phi.radians(), p.e_hv)).collect();
    let e_ref: Vec<(f64, f64)> = curve.iter().map(|p| (p.phi.radians(), p.e_ref)).collect();
    let t_half: Vec<(f64, f64)> = curve.iter().map(|p| (p.phi.radians(), p.t / 2.0)).collect();
    line_chart(
        title,
        "phi (rad)",
        "E, t/2",
        &[
            Series { label: "E_hv", color: "#1f77b4", dashed: false, points: e_hv },
            Series { label: "E_ref (QM)", color: "#7f7f7f", dashed: true, points: e_ref },
            Series { label: "t/2", color: "#ff7f0e", dashed: false, points: t_half },
        ],
    )
}

/// The exponent tradeoff frontier: both error channels against p.
pub fn tradeoff_plot(points: &[TradeoffPoint], title: &str) -> String {
    let e: Vec<(f64, f64)> = points.iter().map(|p| (p.exponent, p.max_abs_dev_e)).collect();
    let t: Vec<(f64, f64)> = points.iter().map(|p| (p.exponent, p.max_rel_dev_t)).collect();
    line_chart(
        title,
        "exponent p",
        "max deviation",
        &[
            Series { label: "max |E - E_ref|", color: "#1f77b4", dashed: false, points: e },
            Series { label: "max rel t dev", color: "#ff7f0e", dashed: false, points: t },
        ],
    )
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::Angle;
    use crate::curve::CurvePoint;
    use std::f64::consts::PI;

    fn sample_curve() -> Curve {
        Curve::new(
            (0..20)
                .map(|k| {
                    let phi = PI * k as f64 / 19.0;
                    CurvePoint {
                        phi: Angle::from_radians(phi),
                        c: PI * phi.cos(),
                        t: 2.0 + phi.sin(),
                        e_hv: -phi.cos(),
                        e_ref: -phi.cos(),
                    }
                })
                .collect(),
        )
    }

    #[test]
    fn plot_contains_three_series_and_legend() {
        let svg = curve_plot(&sample_curve(), "test");
        assert_eq!(svg.matches("<polyline").count(), 3);
        assert!(svg.contains("E_ref (QM)"));
        assert!(svg.contains("viewBox=\"0 0 720 480\""));
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn plots_are_deterministic() {
        assert_eq!(
            curve_plot(&sample_curve(), "t"),
            curve_plot(&sample_curve(), "t")
        );
    }

    #[test]
    fn titles_are_escaped() {
        let svg = curve_plot(&sample_curve(), "a < b & c");
        assert!(svg.contains("a &lt; b &amp; c"));
    }
}
