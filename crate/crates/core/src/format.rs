//! Fixed-precision number formatting shared by every CSV writer.

/// 17 significant digits in scientific notation; round-trips any `f64`.
pub fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}
