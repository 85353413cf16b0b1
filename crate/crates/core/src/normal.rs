//! Standard-normal primitives and the signed Mills-ratio function.
//!
//! `xi(x) = x * Phi^c(x) / phi(x)` drives every non-degenerate limit in this
//! crate. It is strictly increasing, runs from `-inf` to `1`, and `xi(0) = 0`.
//!
//! The upper tail is never formed as `1 - Phi(x)`. Below [`CF_SWITCH`] the tail
//! comes from the complementary error function; above it the Mills ratio is
//! evaluated by its Laplace continued fraction, so `Phi^c(x) = phi(x) * R(x)`
//! keeps full relative precision out to the underflow point.

use crate::error::{Error, Result};

/// Working range of [`xi`]: `|x| <= X_MAX`.
pub const X_MAX: f64 = 30.0;

/// `1 / sqrt(2 pi)`.
pub const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Abscissa above which the Mills ratio is taken from the continued fraction.
const CF_SWITCH: f64 = 3.0;

/// Standard-normal density.
///
/// `x^2` is split into a rounded product and its exact error term so the
/// exponent carries no rounding error; the result underflows to zero for
/// `|x|` beyond roughly 38.6.
pub fn phi(x: f64) -> f64 {
    let sq = x * x;
    let sq_err = x.mul_add(x, -sq);
    INV_SQRT_2PI * (-0.5 * sq).exp() * (-0.5 * sq_err).exp()
}

/// Standard-normal upper tail `P(Z > x)`.
pub fn phi_c(x: f64) -> f64 {
    if x < 0.0 {
        return 1.0 - phi_c(-x);
    }
    if x >= CF_SWITCH {
        phi(x) * mills_ratio_cf(x)
    } else {
        0.5 * libm::erfc(x * std::f64::consts::FRAC_1_SQRT_2)
    }
}

/// Mills ratio `R(x) = Phi^c(x) / phi(x)` for any finite `x`.
///
/// No range check: for very negative `x` the density underflows and the result
/// becomes `+inf`.
pub fn mills_ratio(x: f64) -> f64 {
    if x >= CF_SWITCH {
        mills_ratio_cf(x)
    } else {
        phi_c(x) / phi(x)
    }
}

/// Laplace continued fraction `R(x) = 1/(x + 1/(x + 2/(x + 3/(x + ...))))`,
/// evaluated with the modified Lentz scheme. Only used for `x >= CF_SWITCH`
/// where it converges in a few hundred terms at worst.
fn mills_ratio_cf(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = TINY;
    let mut c = f;
    let mut d = 0.0;
    for j in 1..10_000u32 {
        let a = if j == 1 { 1.0 } else { f64::from(j - 1) };
        d = x + a * d;
        if d == 0.0 {
            d = TINY;
        }
        c = x + a / c;
        if c == 0.0 {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    f
}

/// `xi(x) = x * Phi^c(x) / phi(x)` on the working range `|x| <= X_MAX`.
pub fn xi(x: f64) -> Result<f64> {
    check_range(x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    Ok(x * mills_ratio(x))
}

/// `eta(x) = (1 + x^2) Phi^c(x) - x phi(x)`, the numerator of `xi'(x)`.
pub fn eta(x: f64) -> f64 {
    phi(x) * xi_derivative(x)
}

/// Closed-form derivative `xi'(x) = eta(x) / phi(x) = (1 + x^2) R(x) - x`.
pub fn xi_derivative(x: f64) -> f64 {
    (1.0 + x * x) * mills_ratio(x) - x
}

fn check_range(x: f64) -> Result<()> {
    if !x.is_finite() || x.abs() > X_MAX {
        return Err(Error::domain(
            "x",
            format!("xi is evaluated on |x| <= {X_MAX}, got {x}"),
        ));
    }
    Ok(())
}
