//! CSV emission with a pinned byte format: UTF-8, LF line endings, numbers
//! rendered exactly as C's %.12g so equal runs produce identical files.

use crate::analysis::TradeoffPoint;
use crate::curve::Curve;

pub const CURVE_HEADER: &str = "phi_rad,c,t,e_hv,e_ref,diff_e,rel_dev_t";
pub const TRADEOFF_HEADER: &str = "exponent,max_abs_dev_e,max_rel_dev_t";

/// Render like C's printf("%.12g", v): 12 significant digits, trailing
/// zeros stripped, scientific notation outside [1e-4, 1e12) with a signed
/// two-digit exponent.
pub fn format_g12(value: f64) -> String {
    if value == 0.0 {
        return if value.is_sign_negative() { "-0" } else { "0" }.to_string();
    }
    if value.is_nan() {
        return "nan".to_string();
    }
    if value.is_infinite() {
        return if value > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    // decide the style from the exponent after rounding to 12 significant
    // digits, exactly as %g does
    let sci = format!("{value:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("{:e} always has an exponent");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    if !(-4..12).contains(&exp) {
        let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
        format!("{}e{}{:02}", mantissa, if exp < 0 { "-" } else { "+" }, exp.abs())
    } else {
        let fixed = format!("{value:.*}", (11 - exp) as usize);
        if fixed.contains('.') {
            fixed.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            fixed
        }
    }
}

/// Curve CSV: header plus one row per point. The rel_dev_t column is
/// measured against the curve-wide t band center.
pub fn curve_to_csv(curve: &Curve) -> String {
    let center = curve.t_center();
    let mut out = String::with_capacity(64 * (curve.len() + 1));
    out.push_str(CURVE_HEADER);
    out.push('\n');
    for p in curve {
        let rel_dev_t = if center == 0.0 { 0.0 } else { (p.t - center) / center };
        let row = [
            p.phi.radians(),
            p.c,
            p.t,
            p.e_hv,
            p.e_ref,
            p.e_diff(),
            rel_dev_t,
        ];
        let mut first = true;
        for v in row {
            if !first {
                out.push(',');
            }
            out.push_str(&format_g12(v));
            first = false;
        }
        out.push('\n');
    }
    out
}

pub fn tradeoff_to_csv(points: &[TradeoffPoint]) -> String {
    let mut out = String::new();
    out.push_str(TRADEOFF_HEADER);
    out.push('\n');
    for p in points {
        out.push_str(&format_g12(p.exponent));
        out.push(',');
        out.push_str(&format_g12(p.max_abs_dev_e));
        out.push(',');
        out.push_str(&format_g12(p.max_rel_dev_t));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::Angle;
    use crate::curve::CurvePoint;
    use std::f64::consts::PI;

    #[test]
    fn g12_matches_the_c_reference_vectors() {
        // frozen against printf("%.12g", ...)
        let cases: [(f64, &str); 20] = [
            (PI, "3.14159265359"),
            (2.0, "2"),
            (0.5, "0.5"),
            (1e-5, "1e-05"),
            (123456789012345.0, "1.23456789012e+14"),
            (1.0 / 3.0, "0.333333333333"),
            (-0.0, "-0"),
            (2.0 * PI, "6.28318530718"),
            (1e12, "1e+12"),
            (999999999999.9, "1e+12"),
            (-std::f64::consts::E, "-2.71828182846"),
            (0.000123456789012345, "0.000123456789012"),
            (std::f64::consts::FRAC_PI_2, "1.57079632679"),
            (9.999999999999999e-05, "0.0001"),
            (1234.5678901234567, "1234.56789012"),
            (-1.0, "-1"),
            (0.1, "0.1"),
            (42.0, "42"),
            (6.02214076e23, "6.02214076e+23"),
            (1.602176634e-19, "1.602176634e-19"),
        ];
        for (v, expected) in cases {
            assert_eq!(format_g12(v), expected, "formatting {v:?}");
        }
        assert_eq!(format_g12(0.0), "0");
    }

    #[test]
    fn curve_csv_golden_bytes() {
        let curve = Curve::new(vec![
            CurvePoint {
                phi: Angle::ZERO,
                c: PI,
                t: PI,
                e_hv: -1.0,
                e_ref: -1.0,
            },
            CurvePoint {
                phi: Angle::from_radians(PI / 2.0),
                c: 0.0,
                t: 2.0,
                e_hv: 0.0,
                e_ref: 0.0,
            },
        ]);
        let expected = "phi_rad,c,t,e_hv,e_ref,diff_e,rel_dev_t\n\
                        0,3.14159265359,3.14159265359,-1,-1,0,0.222030940703\n\
                        1.57079632679,0,2,0,0,0,-0.222030940703\n";
        assert_eq!(curve_to_csv(&curve), expected);
    }

    #[test]
    fn equal_curves_produce_identical_bytes() {
        let make = || {
            Curve::new(
                (0..50)
                    .map(|k| CurvePoint {
                        phi: Angle::from_radians(PI * k as f64 / 49.0),
                        c: (k as f64).sin(),
                        t: 2.0 + (k as f64).cos(),
                        e_hv: (k as f64 * 0.1).tanh(),
                        e_ref: -(PI * k as f64 / 49.0).cos(),
                    })
                    .collect(),
            )
        };
        assert_eq!(curve_to_csv(&make()), curve_to_csv(&make()));
    }

    #[test]
    fn header_only_for_an_empty_curve() {
        assert_eq!(curve_to_csv(&Curve::default()), "phi_rad,c,t,e_hv,e_ref,diff_e,rel_dev_t\n");
    }

    proptest::proptest! {
        #[test]
        fn g12_round_trips_to_twelve_digits(v in -1e12f64..1e12) {
            let parsed: f64 = format_g12(v).parse().unwrap();
            let tol = v.abs() * 1e-11;
            proptest::prop_assert!((parsed - v).abs() <= tol.max(1e-15));
        }
    }
}
