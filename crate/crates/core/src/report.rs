//! Number formatting shared by every CSV/JSON writer.

/// `x` printed with `digits` significant digits in `%g` style.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if exp < -5 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        format!("{mantissa}e{exp}")
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Rounds to `digits` significant digits so that JSON output carries the
/// same precision as the CSV writers.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", digits - 1, x).parse().unwrap_or(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_style() {
        assert_eq!(fmt_sig(0.5, 12), "0.5");
        assert_eq!(fmt_sig(-1.9, 12), "-1.9");
        assert_eq!(fmt_sig(1.0 / 3.0, 12), "0.333333333333");
        assert_eq!(fmt_sig(1.5e-9, 12), "1.5e-9");
        assert_eq!(fmt_sig(123456.0, 12), "123456");
        assert_eq!(fmt_sig(0.0, 12), "0");
        assert_eq!(round_sig(1.0 / 3.0, 12), 0.333333333333);
    }
}
