//! Round-trip decimal rendering for amplitudes and probabilities.

/// Formats `v` like C's `%.17g`: 17 significant digits, trailing zeros
/// stripped, exponent form when the decimal exponent is below -4 or at
/// least 17. Any finite double survives a parse round trip. Negative zero
/// renders as `0`.
pub fn g17(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".to_string()
        } else if v > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        };
    }
    // `{:.16e}` yields exactly 17 significant digits, correctly rounded.
    let sci = format!("{:.16e}", v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();

    if !(-4..17).contains(&exp) {
        let mut m = format!("{}.{}", &digits[..1], &digits[1..]);
        trim_fraction(&mut m);
        let esign = if exp < 0 { '-' } else { '+' };
        return format!("{sign}{m}e{esign}{:02}", exp.abs());
    }

    let mut out = String::with_capacity(24);
    if exp < 0 {
        out.push_str("0.");
        for _ in 0..(-exp - 1) {
            out.push('0');
        }
        out.push_str(&digits);
    } else {
        let int_len = exp as usize + 1;
        out.push_str(&digits[..int_len]);
        out.push('.');
        out.push_str(&digits[int_len..]);
    }
    trim_fraction(&mut out);
    format!("{sign}{out}")
}

fn trim_fraction(s: &mut String) {
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::g17;

    #[test]
    fn matches_c_printf() {
        // Expected strings produced by C printf("%.17g"), except that -0
        // is normalized.
        let cases: &[(f64, &str)] = &[
            (1.0, "1"),
            (-1.0, "-1"),
            (0.5, "0.5"),
            (0.1, "0.10000000000000001"),
            (0.0625, "0.0625"),
            (0.25, "0.25"),
            (1.0 / 3.0, "0.33333333333333331"),
            (0.0001, "0.0001"),
            (0.00001, "1.0000000000000001e-05"),
            (1.1102230246251565e-16, "1.1102230246251565e-16"),
            (123456.0, "123456"),
            (1e17, "1e+17"),
            (12345678901234567.0, "12345678901234568"),
            (-0.0, "0"),
            (std::f64::consts::FRAC_1_SQRT_2, "0.70710678118654757"),
        ];
        for &(v, s) in cases {
            assert_eq!(g17(v), s, "value {v:e}");
        }
    }

    #[test]
    fn round_trips() {
        let mut x = 0.123456789f64;
        for _ in 0..2000 {
            x = (x * 7.31 + 0.17).fract() * 10f64.powi((x * 40.0) as i32 - 20);
            let s = g17(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
    }
}
