//! Locale-independent numeric formatting for CSV outputs.

/// Formats `x` with 10 significant digits, following the conventions of C's
/// `%.10g`: fixed notation for decimal exponents in `[-4, 10)`, scientific
/// otherwise, trailing zeros removed.
pub fn sig10(x: f64) -> String {
    sig(x, 10)
}

pub fn sig(x: f64, digits: usize) -> String {
    assert!(digits >= 1);
    if x == 0.0 {
        return "0".to_string();
    }
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp) as usize;
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

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g() {
        assert_eq!(sig10(0.0), "0");
        assert_eq!(sig10(-0.0), "0");
        assert_eq!(sig10(1.0), "1");
        assert_eq!(sig10(-0.5), "-0.5");
        assert_eq!(sig10(1.0 / 3.0), "0.3333333333");
        assert_eq!(sig10(2.0 / 3.0 * 1e6), "666666.6667");
        assert_eq!(sig10(1234567890.4), "1234567890");
        assert_eq!(sig10(12345678901.0), "1.23456789e+10");
        assert_eq!(sig10(0.0001), "0.0001");
        assert_eq!(sig10(0.00001234), "1.234e-05");
        assert_eq!(sig10(9.99999999996), "10");
        assert_eq!(sig10(f64::NAN), "nan");
    }
}
