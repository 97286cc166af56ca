//! Shared CSV formatting: floats at 17 significant digits so repeated runs
//! produce byte-identical files and values round-trip exactly.

pub(crate) fn float17(value: f64) -> String {
    format!("{value:.16e}")
}

pub(crate) fn boolean(value: bool) -> &'static str {
    if value {
        "true"
    } else {
        "false"
    }
}
