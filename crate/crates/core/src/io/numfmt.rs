/// Significant digits that make every binary64 value round-trip.
pub const ROUND_TRIP_DIGITS: usize = 17;

/// Formats `x` with `digits` significant digits, positional when the
/// exponent is moderate and scientific otherwise. Trailing zeros are
/// dropped, which never changes the parsed value.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mantissa),
    };
    let significand: String = mantissa.chars().filter(|c| *c != '.').collect();

    if (-5..digits as i32).contains(&exp) {
        let body = if exp < 0 {
            format!("0.{}{}", "0".repeat((-exp - 1) as usize), significand)
        } else {
            let split = exp as usize + 1;
            let (int, frac) = significand.split_at(split.min(significand.len()));
            format!("{int}.{frac}")
        };
        format!("{sign}{}", trim_fraction(&body))
    } else {
        let m = trim_fraction(mantissa);
        format!("{sign}{m}e{exp}")
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Full round-trip precision.
pub fn format_exact(x: f64) -> String {
    format_significant(x, ROUND_TRIP_DIGITS)
}
