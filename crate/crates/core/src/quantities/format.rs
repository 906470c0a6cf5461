//! Parenthesis notation: `-1404.240(2)` means -1404.240 ± 0.002.

use super::UncertainValue;

/// How many significant digits of sigma to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParenthesisStyle {
    /// Keep two digits when the leading digit of sigma is 1.
    pub two_digits_on_leading_one: bool,
}

impl Default for ParenthesisStyle {
    fn default() -> Self {
        Self {
            two_digits_on_leading_one: true,
        }
    }
}

/// Formats `u` as `value(sigma) unit` with the default style.
pub fn format_parenthesis(u: UncertainValue, unit_label: &str) -> String {
    format_parenthesis_with(u, unit_label, ParenthesisStyle::default())
}

pub fn format_parenthesis_with(
    u: UncertainValue,
    unit_label: &str,
    style: ParenthesisStyle,
) -> String {
    let body = if u.sigma() > 0.0 {
        let (digits, place) = sigma_digits(u.sigma(), style);
        // digits left of the decimal point are written out in full
        let shown = if place > 0 {
            digits * 10u64.pow(place as u32)
        } else {
            digits
        };
        format!("{}({})", format_at_place(u.value(), place), shown)
    } else {
        format_plain(u.value())
    };
    if unit_label.is_empty() {
        body
    } else {
        format!("{body} {unit_label}")
    }
}

/// Rounded sigma digits and the decimal exponent of the last one.
fn sigma_digits(sigma: f64, style: ParenthesisStyle) -> (u64, i32) {
    let mut exp = sigma.log10().floor() as i32;
    // log10 can be off by one ulp near powers of ten
    if pow10(exp + 1) <= sigma {
        exp += 1;
    } else if pow10(exp) > sigma {
        exp -= 1;
    }
    let leading = (sigma / pow10(exp)).floor() as u64;
    if leading == 1 && style.two_digits_on_leading_one {
        let place = exp - 1;
        return ((sigma / pow10(place)).round() as u64, place);
    }
    let rounded = (sigma / pow10(exp)).round() as u64;
    if rounded >= 10 {
        // 0.0096 -> 0.010
        let place = exp + 1;
        if style.two_digits_on_leading_one {
            return (10, place - 1);
        }
        return (1, place);
    }
    (rounded, exp)
}

fn pow10(e: i32) -> f64 {
    10f64.powi(e)
}

fn format_at_place(value: f64, place: i32) -> String {
    let s = if place < 0 {
        format!("{:.*}", (-place) as usize, value)
    } else {
        let q = (value / pow10(place)).round();
        format!("{:.0}", q * pow10(place))
    };
    strip_negative_zero(s)
}

fn format_plain(value: f64) -> String {
    let s = format!("{value}");
    let s = if s.contains(['.', 'e', 'E', 'i', 'N']) {
        s
    } else {
        format!("{s}.0")
    };
    strip_negative_zero(s)
}

fn strip_negative_zero(s: String) -> String {
    match s.strip_prefix('-') {
        Some(rest) if rest.chars().all(|c| c == '0' || c == '.') => rest.to_string(),
        _ => s,
    }
}
