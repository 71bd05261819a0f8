//! Number formatting for human-facing output.

/// Decimal with at most 15 significant digits, trailing zeros trimmed.
/// Uses exponent notation outside `[1e-4, 1e15)`.
pub fn sig15(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{v:.14e}");
    let (mant, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..15).contains(&exp) {
        let mant = trim(mant);
        return format!("{mant}e{exp}");
    }
    let decimals = (14 - exp).max(0) as usize;
    trim(&format!("{v:.decimals$}")).to_string()
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn point(x: f64, y: f64) -> String {
    format!("{},{}", sig15(x), sig15(y))
}
