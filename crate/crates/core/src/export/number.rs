/// Formats `v` with 9 significant digits in plain decimal notation.
///
/// Magnitudes outside `[1e-6, 1e9)` fall back to scientific notation with the same
/// digit count. `-0` prints as `0`.
pub fn format_sig9(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{v:.8e}");
    let exponent: i32 = sci
        .rsplit_once('e')
        .and_then(|(_, e)| e.parse().ok())
        .expect("scientific formatting has an exponent");
    if !(-6..9).contains(&exponent) {
        return sci;
    }
    let decimals = (8 - exponent).max(0) as usize;
    format!("{v:.decimals$}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(format_sig9(1.0), "1.00000000");
        assert_eq!(format_sig9(-0.0), "0");
        assert_eq!(format_sig9(0.0), "0");
        assert_eq!(format_sig9(std::f64::consts::PI), "3.14159265");
        assert_eq!(format_sig9(-12.5), "-12.5000000");
        assert_eq!(format_sig9(0.001234567891), "0.00123456789");
        assert_eq!(format_sig9(9.9999999999), "10.0000000");
        assert_eq!(format_sig9(123456789012.0), "1.23456789e11");
        assert_eq!(format_sig9(123456789.0), "123456789");
        assert_eq!(format_sig9(1e-9), "1.00000000e-9");
        assert_eq!(format_sig9(2.5e20), "2.50000000e20");
    }

    #[test]
    fn round_trips_to_nine_digits() {
        for v in [0.1, 1.0 / 3.0, -7.123456789123, 1e-5, 42.0] {
            let back: f64 = format_sig9(v).parse().unwrap();
            assert!(((back - v) / v).abs() < 1e-8, "{v}");
        }
    }
}
