/// Scientific notation with 9 significant digits, independent of locale.
pub fn sci(x: f64) -> String {
    format!("{x:.8e}")
}
