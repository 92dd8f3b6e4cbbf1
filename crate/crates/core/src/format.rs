//! Stable text formatting shared by the CSV exporters.

/// Seventeen significant digits in scientific notation, enough to round-trip
/// any `f64` and byte-stable across runs.
pub fn float17(x: f64) -> String {
    format!("{x:.16e}")
}
