//! JSON output with every numeric value rounded to 12 significant digits.

use serde_json::Value;

/// Rounds to 12 significant decimal digits; integers and non-finite values
/// pass through.
pub fn sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let magnitude = x.abs().log10().floor() as i32;
    let factor = 10f64.powi(11 - magnitude);
    (x * factor).round() / factor
}

/// Recursively rounds every fractional number in a JSON tree.
pub fn round_numbers(value: &mut Value) {
    match value {
        Value::Number(n) => {
            if let Some(f) = n.as_f64() {
                if n.as_i64().is_none() && n.as_u64().is_none() {
                    if let Some(rounded) = serde_json::Number::from_f64(sig12(f)) {
                        *value = Value::Number(rounded);
                    }
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_numbers),
        Value::Object(map) => map.values_mut().for_each(round_numbers),
        _ => {}
    }
}

/// Serializes onto standard output as one pretty-printed document.
pub fn emit(mut value: Value) {
    round_numbers(&mut value);
    println!("{}", serde_json::to_string_pretty(&value).expect("valid JSON tree"));
}
