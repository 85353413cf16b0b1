use erlangc_core::ExtendedReal;

const SIG_DIGITS: usize = 17;

/// Decimal with 17 significant digits, enough to round-trip any `f64`.
///
/// Fixed notation for magnitudes in `[1e-5, 1e17)`, scientific outside.
/// Negative zero prints as zero.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        return "NA".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    if x == 0.0 {
        return format!("{:.*}", SIG_DIGITS - 1, 0.0);
    }
    // Rounding to 17 digits may carry into the next decade, so the exponent
    // is read back from the rounded scientific form.
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if (-5..17).contains(&exp) {
        let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        sci
    }
}

pub fn extended(x: ExtendedReal) -> String {
    match x {
        ExtendedReal::Finite(v) => num(v),
        ExtendedReal::PosInfinity => "inf".to_string(),
    }
}
