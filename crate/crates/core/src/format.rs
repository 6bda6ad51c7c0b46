//! Number formatting shared by all outputs: 15 significant digits, shortest form.

/// Format with at most 15 significant digits, trailing zeros removed.
///
/// Uses fixed notation for exponents in `[-5, 15)` and `1.5e-07`-style otherwise.
/// Non-finite values print as `inf`, `-inf` and `nan`.
pub fn num(x: f64) -> String {
    num_digits(x, 15)
}

/// Like [`num`] with `digits` significant digits (clamped to `1..=17`).
pub fn num_digits(x: f64, digits: usize) -> String {
    let digits = digits.clamp(1, 17) as i32;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", (digits - 1) as usize, x);
    let (mant, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    if (-5..15).contains(&exp) {
        let decimals = (digits - 1 - exp).max(0) as usize;
        let rounded: f64 = sci.parse().expect("round trip");
        trim(&format!("{:.*}", decimals, rounded))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim(mant), sign, exp.abs())
    }
}

fn trim(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}
