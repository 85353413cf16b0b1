//! M/M/N+M (Erlang-A) steady-state measures.
//!
//! With `a = mu rho / theta` and `c = N mu / theta`,
//!
//! ```text
//! J        = int_0^inf exp(a (1 - e^{-theta x}) - N mu x) dx
//! S        = mu (N - rho) J
//!          = 1 - a int_0^1 e^{a v} (1 - v)^{c - 1} v dv
//! P(delay) = (1 + (C^{-1} - 1) / S)^{-1}
//! ```
//!
//! `S` carries the sign of `N - rho`, and so does `C^{-1} - 1`. Both vanish at
//! `N = rho`. The delay probability is therefore evaluated through their
//! ratio with the common factor `N - rho` cancelled analytically:
//! `(C^{-1} - 1) / S = I / (mu J)`, where `I` is the Erlang-C half-line
//! kernel. That ratio is positive and finite for every `N > 0`.

use crate::erlang::{
    erlang_c_reciprocal_minus_one, exp_kernel, ln_delay_kernel, OfferedLoad, ServerCount, Side,
    QUAD_REL_TOL,
};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_peaked, ScaledEstimate};

/// Service and patience rates of the Erlang-A model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbandonmentModel {
    mu: f64,
    theta: f64,
}

impl AbandonmentModel {
    /// `theta = 0` (plain Erlang-C) is rejected; use [`crate::erlang`] for it.
    pub fn new(mu: f64, theta: f64) -> Result<Self> {
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::domain(
                "mu",
                format!("service rate must be positive, got {mu}"),
            ));
        }
        if !(theta > 0.0 && theta.is_finite()) {
            return Err(Error::domain(
                "theta",
                format!("abandonment rate must be positive, got {theta}"),
            ));
        }
        Ok(AbandonmentModel { mu, theta })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// Erlang-A delay probability together with the two quantities it is built
/// from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelayProbability {
    pub value: f64,
    /// `C(N, rho)^{-1} - 1`.
    pub c_recip_minus_one: f64,
    /// `mu (N - rho) J`.
    pub scaled_j: f64,
    /// `(C^{-1} - 1) / (mu (N - rho) J)` with `N - rho` cancelled, so it is
    /// also defined at `N = rho`. `value = 1 / (1 + ratio)`.
    pub ratio: f64,
    /// The `J` integral.
    pub j: f64,
    /// Estimated relative error of `ratio`, from the two quadratures.
    pub ratio_rel_error: f64,
}

impl DelayProbability {
    /// Estimated absolute error of `value`.
    pub fn est_abs_error(&self) -> f64 {
        self.value * (1.0 - self.value) * self.ratio_rel_error
    }
}

fn require_positive_n(n: ServerCount) -> Result<()> {
    if n.get() > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(
            "n",
            "Erlang-A needs at least one server (n > 0)",
        ))
    }
}

/// `J` in log-scaled form, after substituting `u = theta x`.
fn j_scaled(n: ServerCount, rho: OfferedLoad, m: &AbandonmentModel) -> Result<ScaledEstimate> {
    require_positive_n(n)?;
    let a = m.mu * rho.get() / m.theta;
    let c = n.get() * m.mu / m.theta;
    let mut est = exp_kernel(a, c, Side::Positive)?;
    est.log_scale -= m.theta.ln();
    Ok(est)
}

/// The `J` integral, strictly positive.
pub fn j_integral(n: ServerCount, rho: OfferedLoad, m: &AbandonmentModel) -> Result<f64> {
    Ok(j_scaled(n, rho, m)?.get())
}

/// `mu (N - rho) J`, exactly zero at `N = rho` and with the sign of `N - rho`
/// elsewhere. Increasing in `N`.
pub fn scaled_j(n: ServerCount, rho: OfferedLoad, m: &AbandonmentModel) -> Result<f64> {
    let gap = n.get() - rho.get();
    let j = j_scaled(n, rho, m)?;
    if gap == 0.0 {
        return Ok(0.0);
    }
    Ok(m.mu * gap * j.get())
}

/// `mu (N - rho) J` from the finite-interval representation
/// `1 - a int_0^1 e^{a v} (1 - v)^{c - 1} v dv`.
///
/// Kept as an independent check on [`scaled_j`]. It suffers cancellation when
/// `N` is close to `rho` (the result is a small difference of two numbers
/// near one), which is why it is not the primary route.
///
/// For `c < 1` the factor `(1 - v)^{c - 1}` is singular at `v = 1`; the
/// substitution `s = (1 - v)^c` removes the singularity.
pub fn scaled_j_finite_form(n: ServerCount, rho: OfferedLoad, m: &AbandonmentModel) -> Result<f64> {
    require_positive_n(n)?;
    let a = m.mu * rho.get() / m.theta;
    let c = n.get() * m.mu / m.theta;

    let est = if c >= 1.0 {
        // Mode of a v + (c-1) ln(1-v) + ln v solves a v^2 - (a - c) v - 1 = 0.
        let b = a - c;
        let disc = (b * b + 4.0 * a).sqrt();
        let mode = if b >= 0.0 {
            (b + disc) / (2.0 * a)
        } else {
            2.0 / (disc - b)
        };
        // At c = 1 the (1 - v) factor is absent and the mode sits on v = 1.
        let mode = if c == 1.0 {
            1.0
        } else {
            mode.min(1.0 - f64::EPSILON)
        };
        let g = |v: f64| {
            let edge = if c == 1.0 {
                0.0
            } else {
                (c - 1.0) * (-v).ln_1p()
            };
            a * v + edge + v.ln()
        };
        let slope = (a - (c - 1.0) / (1.0 - mode) + 1.0 / mode).abs();
        let curvature = (c - 1.0) / ((1.0 - mode) * (1.0 - mode)) + 1.0 / (mode * mode);
        let slope = if mode == 1.0 { a + 1.0 } else { slope };
        let scale = 1.0 / slope.max(curvature.sqrt());
        let scale = if scale.is_finite() && scale > 0.0 {
            scale
        } else {
            1.0 / (a + 1.0)
        };
        integrate_peaked(g, 0.0, 1.0, mode, scale.min(0.5), QUAD_REL_TOL)?
    } else {
        // (1/c) int_0^1 e^{a (1 - s^{1/c})} (1 - s^{1/c}) ds; the e^a is folded
        // into the log scale.
        let p = 1.0 / c;
        let g = |s: f64| {
            let w = s.powf(p);
            -a * w + (-w).ln_1p()
        };
        let scale = a.powf(-c).min(1.0) * 0.5;
        let mut est = integrate_peaked(g, 0.0, 1.0, 0.0, scale, QUAD_REL_TOL)?;
        est.log_scale += a - c.ln();
        est
    };
    Ok(1.0 - a * est.get())
}

/// Erlang-A probability that an arriving customer has to wait.
pub fn delay_probability(
    n: ServerCount,
    rho: OfferedLoad,
    m: &AbandonmentModel,
) -> Result<DelayProbability> {
    require_positive_n(n)?;
    let (ln_kernel, kernel_rel_err) = ln_delay_kernel(n, rho)?;
    let j = j_scaled(n, rho, m)?;
    let ln_ratio = ln_kernel - (m.mu.ln() + j.ln());
    let ratio = ln_ratio.exp();
    let value = 1.0 / (1.0 + ratio);

    let gap = n.get() - rho.get();
    let c_recip_minus_one = erlang_c_reciprocal_minus_one(n, rho)?;
    let scaled_j = if gap == 0.0 {
        0.0
    } else {
        m.mu * gap * j.get()
    };
    Ok(DelayProbability {
        value,
        c_recip_minus_one,
        scaled_j,
        ratio,
        j: j.get(),
        ratio_rel_error: kernel_rel_err + j.rel_err(),
    })
}

/// Probability of exactly `i < N` customers in the system:
/// `p_i = (rho^i / i!) / (sum_{k<N} rho^k / k! + (rho^N / N!) N mu J)`.
pub fn state_probability(
    i: u64,
    n: ServerCount,
    rho: OfferedLoad,
    m: &AbandonmentModel,
) -> Result<f64> {
    let servers = n.as_u64().filter(|&k| k > 0).ok_or_else(|| {
        Error::domain(
            "n",
            format!(
                "state probabilities need a positive integer n, got {}",
                n.get()
            ),
        )
    })?;
    if i >= servers {
        return Err(Error::domain(
            "i",
            format!("closed form covers states i < N = {servers}, got i = {i}"),
        ));
    }
    let r = rho.get();
    let ln_rho = r.ln();
    let ln_term = |k: u64| k as f64 * ln_rho - libm::lgamma(k as f64 + 1.0);
    let j = j_scaled(n, rho, m)?;
    let ln_tail = ln_term(servers) + (servers as f64 * m.mu).ln() + j.ln();

    let mut ln_parts: Vec<f64> = (0..servers).map(ln_term).collect();
    ln_parts.push(ln_tail);
    let max = ln_parts.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = ln_parts.iter().map(|l| (l - max).exp()).sum();
    let ln_norm = max + sum.ln();
    Ok((ln_term(i) - ln_norm).exp())
}
