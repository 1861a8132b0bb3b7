//! Plain-text number formatting shared by the CSV and JSON writers.

/// Scientific notation with 17 significant digits, enough for any `f64` to
/// survive a text round trip bit-for-bit.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}
