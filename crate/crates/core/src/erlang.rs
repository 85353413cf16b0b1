//! Exact Erlang-B and Erlang-C values for integer and real server counts.
//!
//! Four independent routes to `C(N, rho)` are provided (see [`Method`]). The
//! integer-only routes are a log-space direct sum and the Erlang-B reciprocal
//! recursion. The two quadrature routes accept any real `N > 0`:
//!
//! * `C^{-1} = rho * int_0^inf e^{-rho v} (1+v)^{N-1} v dv`
//! * `C^{-1} = 1 + (N - rho) * int_{-inf}^0 e^{-rho(e^{-u}-1) - N u} du`
//!
//! The second form carries the factor `N - rho` explicitly, so it is also
//! the route used by [`erlang_c_reciprocal_minus_one`].

use crate::error::{Error, Result};
use crate::quadrature::{integrate_peaked, ScaledEstimate};

/// Relative tolerance for every quadrature in this module.
pub(crate) const QUAD_REL_TOL: f64 = 1e-13;

/// Offered load `rho = lambda / mu`, strictly positive and finite.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct OfferedLoad(f64);

impl OfferedLoad {
    pub fn new(rho: f64) -> Result<Self> {
        if rho > 0.0 && rho.is_finite() {
            Ok(OfferedLoad(rho))
        } else {
            Err(Error::domain(
                "rho",
                format!("offered load must be positive and finite, got {rho}"),
            ))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// Number of servers. Real values are allowed because staffing rules such as
/// `rho + beta * sqrt(rho)` rarely land on an integer.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ServerCount(f64);

impl ServerCount {
    /// Any finite `n >= 0`. Zero is only meaningful for Erlang-B.
    pub fn new(n: f64) -> Result<Self> {
        if n >= 0.0 && n.is_finite() {
            Ok(ServerCount(n))
        } else {
            Err(Error::domain(
                "n",
                format!("server count must be a finite non-negative number, got {n}"),
            ))
        }
    }

    pub fn integer(n: u64) -> Self {
        ServerCount(n as f64)
    }

    pub fn get(self) -> f64 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0.fract() == 0.0 && self.0 < 2f64.powi(53)
    }

    /// Nearest integer server count (ties away from zero).
    pub fn rounded(self) -> Self {
        ServerCount(self.0.round())
    }

    pub(crate) fn as_u64(self) -> Option<u64> {
        self.is_integer().then_some(self.0 as u64)
    }

    fn require_positive(self) -> Result<Self> {
        if self.0 > 0.0 {
            Ok(self)
        } else {
            Err(Error::domain(
                "n",
                "Erlang-C needs at least one server (n > 0)",
            ))
        }
    }
}

/// Which evaluation route produced an [`ErlangValue`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Textbook sum, taken as ratios to the top term; integer `N` only.
    DirectSum,
    /// Erlang-B reciprocal recursion plus the B-to-C relation; integer `N` only.
    Recursion,
    /// `C^{-1} = rho int_0^inf e^{-rho v}(1+v)^{N-1} v dv`.
    QuadratureA,
    /// `C^{-1} = 1 + (N-rho) int_{-inf}^0 e^{-rho(e^{-u}-1)-Nu} du`.
    QuadratureB,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::DirectSum,
        Method::Recursion,
        Method::QuadratureA,
        Method::QuadratureB,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::DirectSum => "direct-sum",
            Method::Recursion => "recursion",
            Method::QuadratureA => "quadrature-a",
            Method::QuadratureB => "quadrature-b",
        }
    }

    /// Recursion for integer `N`, QuadratureA otherwise.
    pub fn default_for(n: ServerCount) -> Self {
        if n.is_integer() {
            Method::Recursion
        } else {
            Method::QuadratureA
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErlangValue {
    pub value: f64,
    pub method: Method,
    pub est_abs_error: f64,
}

/// `ln(1/B(k, rho))` for `k = 0..=n` by `1/B_k = 1 + (k/rho) / B_{k-1}`.
///
/// Runs in plain arithmetic until the reciprocal gets large, then continues
/// in log space so that `N` in the millions with small `rho` cannot overflow.
fn ln_inv_erlang_b(n: u64, rho: f64) -> f64 {
    const SWITCH: f64 = 1e250;
    let mut r = 1.0f64;
    let mut k = 1u64;
    while k <= n {
        r = 1.0 + (k as f64 / rho) * r;
        k += 1;
        if r > SWITCH {
            break;
        }
    }
    let mut ln_r = r.ln();
    while k <= n {
        let kf = k as f64;
        let correction = (rho / kf * (-ln_r).exp()).ln_1p();
        ln_r += (kf / rho).ln() + correction;
        k += 1;
    }
    ln_r
}

/// `ln` of `I_b = int_{-inf}^0 exp(-rho (e^{-u} - 1) - N u) du`, so that
/// `C^{-1} - 1 = (N - rho) I_b`. Also returns a relative error estimate.
///
/// For integer `N` this is exactly `1 / (rho B(N-1, rho))`.
pub(crate) fn ln_delay_kernel(n: ServerCount, rho: OfferedLoad) -> Result<(f64, f64)> {
    let rho = rho.get();
    match n.as_u64() {
        Some(k) if k >= 1 => {
            let ln = ln_inv_erlang_b(k - 1, rho) - rho.ln();
            Ok((ln, 8.0 * f64::EPSILON * (k as f64).max(1.0)))
        }
        _ => {
            let est = exp_kernel(rho, n.get(), Side::Negative)?;
            Ok((est.ln(), est.rel_err()))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Side {
    /// `u in (-inf, 0]`
    Negative,
    /// `u in [0, inf)`
    Positive,
}

/// `int exp(-a * expm1(-u) - c * u) du` over one half-line.
///
/// This single kernel covers both the Erlang-C integral (negative side, with
/// `a = rho`, `c = N`) and the Erlang-A `J` integral (positive side, after
/// `u = theta x`, with `a = mu rho / theta`, `c = N mu / theta`). The log
/// integrand is concave with curvature `-a e^{-u}`, and its stationary point
/// is `u = ln(a / c)`.
pub(crate) fn exp_kernel(a: f64, c: f64, side: Side) -> Result<ScaledEstimate> {
    let g = |u: f64| -a * (-u).exp_m1() - c * u;
    let stationary = (a / c).ln();
    let (lo, hi, mode) = match side {
        Side::Negative => (f64::NEG_INFINITY, 0.0, stationary.min(0.0)),
        Side::Positive => (0.0, f64::INFINITY, stationary.max(0.0)),
    };
    let slope = (a * (-mode).exp() - c).abs();
    let curvature = a * (-mode).exp();
    let scale = 1.0 / slope.max(curvature.sqrt()).max(1e-300);
    integrate_peaked(g, lo, hi, mode, scale, QUAD_REL_TOL)
}

/// Erlang-B blocking probability `B(N, rho)`.
///
/// Integer `N` uses the reciprocal recursion; real `N` integrates
/// `B^{-1} = rho int_0^inf e^{-rho v} (1+v)^N dv`. `B(0, rho) = 1`.
pub fn erlang_b(n: ServerCount, rho: OfferedLoad) -> Result<ErlangValue> {
    let r = rho.get();
    if let Some(k) = n.as_u64() {
        let ln_inv = ln_inv_erlang_b(k, r);
        let value = (-ln_inv).exp();
        return Ok(ErlangValue {
            value,
            method: Method::Recursion,
            est_abs_error: 4.0 * f64::EPSILON * (k as f64 + 1.0) * value,
        });
    }
    let nf = n.get();
    let g = |v: f64| -r * v + nf * v.ln_1p();
    let mode = (nf / r - 1.0).max(0.0);
    let slope = (nf / (1.0 + mode) - r).abs();
    let curvature = nf / ((1.0 + mode) * (1.0 + mode));
    let scale = 1.0 / slope.max(curvature.sqrt());
    let est = integrate_peaked(g, 0.0, f64::INFINITY, mode, scale, QUAD_REL_TOL)?;
    let ln_inv = r.ln() + est.ln();
    let value = (-ln_inv).exp();
    Ok(ErlangValue {
        value,
        method: Method::QuadratureA,
        est_abs_error: value * est.rel_err(),
    })
}

/// Erlang-C value `C(N, rho)` by the requested route.
///
/// For `rho > N` the value exceeds one: it is no longer a probability, but it
/// is still the well-defined expression that enters Erlang-A and other
/// models.
pub fn erlang_c(n: ServerCount, rho: OfferedLoad, method: Method) -> Result<ErlangValue> {
    let n = n.require_positive()?;
    let nf = n.get();
    let r = rho.get();
    match method {
        Method::DirectSum => {
            let k = n.as_u64().ok_or_else(|| {
                Error::domain(
                    "n",
                    format!("direct summation needs an integer n, got {nf}"),
                )
            })?;
            // sum_{i<N} (rho^i/i!) / (rho^N/N!) = sum_{m=1..N} prod_{j=N-m+1..N} j/rho,
            // accumulated from the top term down with a running rescale so
            // that no factorial or power is ever formed.
            const RESCALE: f64 = 1e280;
            let (mut term, mut sum, mut ln_scale) = (1.0f64, 0.0f64, 0.0f64);
            for j in (1..=k).rev() {
                term *= j as f64 / r;
                sum += term;
                if term > RESCALE {
                    term /= RESCALE;
                    sum /= RESCALE;
                    ln_scale += RESCALE.ln();
                }
            }
            let ratio = sum * ln_scale.exp();
            let inv = 1.0 + (nf - r) / nf * ratio;
            let value = 1.0 / inv;
            Ok(ErlangValue {
                value,
                method,
                est_abs_error: 16.0 * f64::EPSILON * (k as f64 + 1.0) * value * (ratio + 1.0),
            })
        }
        Method::Recursion => {
            let k = n.as_u64().ok_or_else(|| {
                Error::domain("n", format!("the recursion needs an integer n, got {nf}"))
            })?;
            // B^{-1} - 1 = (N/rho) * B(N-1, rho)^{-1}, no cancellation.
            let b_inv_minus_one = (nf / r) * ln_inv_erlang_b(k - 1, r).exp();
            let inv = 1.0 + (1.0 - r / nf) * b_inv_minus_one;
            let value = 1.0 / inv;
            Ok(ErlangValue {
                value,
                method,
                est_abs_error: 8.0 * f64::EPSILON * (k as f64 + 1.0) * value,
            })
        }
        Method::QuadratureA => {
            let mode = {
                let b = r - nf;
                let disc = (b * b + 4.0 * r).sqrt();
                if b <= 0.0 {
                    (-b + disc) / (2.0 * r)
                } else {
                    2.0 / (b + disc)
                }
            };
            let g = |v: f64| -r * v + (nf - 1.0) * v.ln_1p() + v.ln();
            let curvature = (nf - 1.0) / ((1.0 + mode) * (1.0 + mode)) + 1.0 / (mode * mode);
            let scale = 1.0 / curvature.sqrt();
            let est = integrate_peaked(g, 0.0, f64::INFINITY, mode, scale, QUAD_REL_TOL)?;
            let inv = r * est.get();
            let value = 1.0 / inv;
            Ok(ErlangValue {
                value,
                method,
                est_abs_error: value * est.rel_err(),
            })
        }
        Method::QuadratureB => {
            let est = exp_kernel(r, nf, Side::Negative)?;
            let scaled = (nf - r) * est.get();
            let inv = 1.0 + scaled;
            let value = 1.0 / inv;
            Ok(ErlangValue {
                value,
                method,
                est_abs_error: value * value * scaled.abs() * est.rel_err(),
            })
        }
    }
}

/// [`erlang_c`] with [`Method::default_for`].
pub fn erlang_c_default(n: ServerCount, rho: OfferedLoad) -> Result<ErlangValue> {
    erlang_c(n, rho, Method::default_for(n))
}

/// `C(N, rho)^{-1} - 1`, with the sign of `N - rho` exactly.
///
/// Computed as `(N - rho)` times a strictly positive kernel, so there is no
/// cancellation when `C` is close to one and the value is exactly zero at
/// `N = rho`.
pub fn erlang_c_reciprocal_minus_one(n: ServerCount, rho: OfferedLoad) -> Result<f64> {
    let n = n.require_positive()?;
    let gap = n.get() - rho.get();
    if gap == 0.0 {
        return Ok(0.0);
    }
    let (ln_kernel, _) = ln_delay_kernel(n, rho)?;
    Ok(gap * ln_kernel.exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(x: f64) -> ServerCount {
        ServerCount::new(x).unwrap()
    }
    fn rho(x: f64) -> OfferedLoad {
        OfferedLoad::new(x).unwrap()
    }

    /// Brute-force textbook Erlang-C with plain f64 sums; only for small N.
    fn erlang_c_naive(k: u32, r: f64) -> f64 {
        let mut term = 1.0;
        let mut sum = 0.0;
        for i in 0..k {
            if i > 0 {
                term *= r / i as f64;
            }
            sum += term;
        }
        let top = term * r / k as f64;
        top / ((1.0 - r / k as f64) * sum + top)
    }

    #[test]
    fn erlang_b_examples() {
        assert_eq!(
            erlang_b(ServerCount::integer(0), rho(3.7)).unwrap().value,
            1.0
        );
        assert!((erlang_b(n(1.0), rho(1.0)).unwrap().value - 0.5).abs() < 1e-15);
        let b = erlang_b(n(2.0), rho(1.5)).unwrap().value;
        // 1.125 / (1 + 1.5 + 1.125)
        assert!((b - 0.310_344_827_6).abs() < 1e-10);
    }

    #[test]
    fn erlang_b_real_route_brackets_integers() {
        let r = rho(4.0);
        let b3 = erlang_b(n(3.0), r).unwrap().value;
        let b35 = erlang_b(n(3.5), r).unwrap().value;
        let b4 = erlang_b(n(4.0), r).unwrap().value;
        assert!(b3 > b35 && b35 > b4);
        // Real-N route at an integer agrees with the recursion.
        let nudged = erlang_b(n(4.0 + 1e-9), r).unwrap().value;
        assert!((nudged - b4).abs() < 1e-8);
    }

    #[test]
    fn erlang_c_examples() {
        for m in Method::ALL {
            let c = erlang_c(n(1.0), rho(0.5), m).unwrap().value;
            assert!((c - 0.5).abs() < 1e-12, "{m:?}");
            let c = erlang_c(n(2.0), rho(1.5), m).unwrap().value;
            assert!((c - 0.642_857_142_857_142_9).abs() < 1e-11, "{m:?}");
            let c = erlang_c(n(2.0), rho(2.0), m).unwrap().value;
            assert!((c - 1.0).abs() < 1e-12, "{m:?}");
        }
    }

    #[test]
    fn real_n_quadratures_agree() {
        let a = erlang_c(n(2.5), rho(3.1), Method::QuadratureA)
            .unwrap()
            .value;
        let b = erlang_c(n(2.5), rho(3.1), Method::QuadratureB)
            .unwrap()
            .value;
        assert!((a - b).abs() < 1e-10, "{a} vs {b}");
    }

    #[test]
    fn integer_only_methods_reject_real_n() {
        for m in [Method::DirectSum, Method::Recursion] {
            assert!(erlang_c(n(2.5), rho(1.0), m).unwrap_err().is_domain());
        }
    }

    #[test]
    fn domain_errors() {
        assert!(ServerCount::new(-1.0).is_err());
        assert!(OfferedLoad::new(0.0).is_err());
        assert!(OfferedLoad::new(f64::NAN).is_err());
        assert!(erlang_c(n(0.0), rho(1.0), Method::Recursion)
            .unwrap_err()
            .is_domain());
        assert!(erlang_c_reciprocal_minus_one(n(0.0), rho(1.0)).is_err());
    }

    #[test]
    fn matches_naive_sum() {
        for k in 1..=30u32 {
            for ratio in [0.3, 0.8, 1.0, 1.4] {
                let r = ratio * k as f64;
                let want = erlang_c_naive(k, r);
                for m in Method::ALL {
                    let got = erlang_c(n(k as f64), rho(r), m).unwrap().value;
                    assert!(
                        (got - want).abs() < 1e-11,
                        "k={k} r={r} {m:?}: {got} vs {want}"
                    );
                }
            }
        }
    }

    #[test]
    fn reciprocal_minus_one_sign_and_values() {
        assert_eq!(
            erlang_c_reciprocal_minus_one(n(2.0), rho(2.0)).unwrap(),
            0.0
        );
        let v = erlang_c_reciprocal_minus_one(n(2.0), rho(1.5)).unwrap();
        assert!((v - 5.0 / 9.0).abs() < 1e-12);
        let v = erlang_c_reciprocal_minus_one(n(2.0), rho(2.5)).unwrap();
        let direct = 1.0 / erlang_c(n(2.0), rho(2.5), Method::DirectSum).unwrap().value - 1.0;
        assert!(v < 0.0);
        assert!((v - direct).abs() < 1e-10);
        // Real N a hair away from rho keeps the sign and stays tiny.
        let v = erlang_c_reciprocal_minus_one(n(50.0 + 1e-9), rho(50.0)).unwrap();
        assert!(v > 0.0 && v < 1e-8);
        let v = erlang_c_reciprocal_minus_one(n(50.0), rho(50.0 + 1e-9)).unwrap();
        assert!(v < 0.0 && v > -1e-8);
    }

    #[test]
    fn recursion_survives_huge_n() {
        // N far above rho: C underflows towards zero but stays finite and >= 0.
        let c = erlang_c(n(5000.0), rho(10.0), Method::Recursion)
            .unwrap()
            .value;
        assert!((0.0..1e-300).contains(&c));
        let b = erlang_b(n(3000.0), rho(2900.0)).unwrap().value;
        assert!(b > 0.0 && b < 1.0);
    }

    #[test]
    fn large_rho_quadrature_matches_recursion() {
        for (k, r) in [(1000.0, 980.0), (10_000.0, 10_100.0), (100_000.0, 99_500.0)] {
            let rec = erlang_c(n(k), rho(r), Method::Recursion).unwrap().value;
            let qa = erlang_c(n(k), rho(r), Method::QuadratureA).unwrap().value;
            let qb = erlang_c(n(k), rho(r), Method::QuadratureB).unwrap().value;
            assert!(
                (rec - qa).abs() < 1e-10 * rec.max(1.0),
                "{k} {r}: {rec} {qa}"
            );
            assert!(
                (rec - qb).abs() < 1e-10 * rec.max(1.0),
                "{k} {r}: {rec} {qb}"
            );
        }
    }
}
