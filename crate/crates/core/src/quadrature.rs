//! Adaptive Gauss-Kronrod quadrature.
//!
//! [`integrate`] is a globally adaptive 7/15-point Gauss-Kronrod scheme on a
//! finite interval (QUADPACK `qag` style: always bisect the panel with the
//! largest error estimate).
//!
//! [`integrate_peaked`] handles the integrands that show up in the Erlang
//! integral representations: `exp(g(t))` with `g` concave, a mode that may sit
//! deep inside a semi-infinite range, and a width that shrinks like
//! `1/sqrt(rho)`. It factors out `exp(g(mode))`, so results are returned in
//! log-scaled form and never overflow, then marches outward from the mode in
//! geometrically growing panels until the tail is negligible.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

// Gauss-Kronrod 7-15 nodes and weights, as tabulated in QUADPACK.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights at XGK[1], XGK[3], XGK[5], XGK[7].
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Stopping rule: the total error estimate must satisfy
/// `err <= max(abs, rel * |integral|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_panels: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs: 1e-13,
            rel: 1e-12,
            max_panels: 2000,
        }
    }
}

impl Tolerance {
    fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }
}

/// An integral value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub abs_err: f64,
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut err = err.abs();
    if res_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / res_asc).powf(1.5);
        err = if scale < 1.0 {
            res_asc * scale
        } else {
            res_asc
        };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    err
}

fn gauss_kronrod_15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);

    let mut res_gauss = f_center * WG[3];
    let mut res_kronrod = f_center * WGK[7];
    let mut res_abs = res_kronrod.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];

    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_gauss += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = 0.5 * res_kronrod;
    let mut res_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = res_kronrod * half;
    let err = rescale_error(
        (res_kronrod - res_gauss) * half,
        res_abs * half.abs(),
        res_asc * half.abs(),
    );
    Panel { a, b, value, err }
}

/// Integrate `f` over the finite interval `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<Estimate> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::domain("interval", "integrate needs finite bounds"));
    }
    if a == b {
        return Ok(Estimate {
            value: 0.0,
            abs_err: 0.0,
        });
    }

    let first = gauss_kronrod_15(&f, a, b);
    let mut value = first.value;
    let mut err = first.err;
    if !value.is_finite() {
        return Err(Error::NoConvergence {
            what: "quadrature",
            achieved: f64::INFINITY,
            tolerance: tol.target(0.0),
        });
    }

    let mut heap = BinaryHeap::new();
    heap.push(first);

    while err > tol.target(value) {
        if heap.len() >= tol.max_panels {
            return Err(Error::NoConvergence {
                what: "quadrature",
                achieved: err,
                tolerance: tol.target(value),
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Panel can no longer be split in double precision.
            heap.push(worst);
            return Err(Error::NoConvergence {
                what: "quadrature",
                achieved: err,
                tolerance: tol.target(value),
            });
        }
        let left = gauss_kronrod_15(&f, worst.a, mid);
        let right = gauss_kronrod_15(&f, mid, worst.b);
        value += left.value + right.value - worst.value;
        err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
    }

    // Re-sum to shed drift from the running updates.
    let (value, err) = heap
        .iter()
        .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.err));
    Ok(Estimate {
        value,
        abs_err: err,
    })
}

/// Result of [`integrate_peaked`]: the integral equals
/// `exp(log_scale) * value`, with `abs_err` on the same scale as `value`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledEstimate {
    pub log_scale: f64,
    pub value: f64,
    pub abs_err: f64,
}

impl ScaledEstimate {
    /// Natural log of the integral.
    pub fn ln(&self) -> f64 {
        self.log_scale + self.value.ln()
    }

    /// Relative error estimate.
    pub fn rel_err(&self) -> f64 {
        self.abs_err / self.value.abs()
    }

    /// The integral itself; may overflow for very large `log_scale`.
    pub fn get(&self) -> f64 {
        self.log_scale.exp() * self.value
    }
}

/// Integrate `exp(log_integrand(t))` over `[lo, hi]`, either end may be
/// infinite.
///
/// `mode` must lie in `[lo, hi]` and be the maximiser of `log_integrand`;
/// `scale` is the characteristic width around it (for example
/// `1 / sqrt(-g''(mode))`). Panels of width `scale`, growing by half each step,
/// are laid out on both sides of the mode until the integrand has dropped
/// below `1e-20` of its peak and the last panel no longer moves the sum.
pub fn integrate_peaked<G: Fn(f64) -> f64>(
    log_integrand: G,
    lo: f64,
    hi: f64,
    mode: f64,
    scale: f64,
    rel_tol: f64,
) -> Result<ScaledEstimate> {
    if !(lo <= mode && mode <= hi) || !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::domain(
            "integrate_peaked",
            format!("mode {mode} outside [{lo}, {hi}] or bad scale {scale}"),
        ));
    }
    let peak = log_integrand(mode);
    if !peak.is_finite() {
        return Err(Error::domain(
            "integrate_peaked",
            format!("log-integrand not finite at the mode ({peak})"),
        ));
    }
    let f = |t: f64| {
        let v = (log_integrand(t) - peak).exp();
        if v.is_nan() {
            0.0
        } else {
            v
        }
    };
    let panel_tol = Tolerance {
        abs: rel_tol * scale * 1e-3,
        rel: rel_tol,
        max_panels: 400,
    };

    let mut total = 0.0;
    let mut err = 0.0;
    for dir in [1.0f64, -1.0] {
        let bound = if dir > 0.0 { hi } else { lo };
        let mut edge = mode;
        let mut width = scale;
        for step in 0.. {
            if edge == bound {
                break;
            }
            if step > 2000 {
                return Err(Error::NoConvergence {
                    what: "peaked quadrature (tail march)",
                    achieved: f(edge),
                    tolerance: 1e-20,
                });
            }
            let next = if dir > 0.0 {
                (edge + width).min(bound)
            } else {
                (edge - width).max(bound)
            };
            let (a, b) = if dir > 0.0 {
                (edge, next)
            } else {
                (next, edge)
            };
            let part = integrate(f, a, b, panel_tol)?;
            total += part.value;
            err += part.abs_err;
            edge = next;
            width *= 1.5;
            if f(edge) < 1e-20 && part.value.abs() <= 1e-17 * total.abs() {
                break;
            }
        }
    }

    Ok(ScaledEstimate {
        log_scale: peak,
        value: total,
        abs_err: err,
    })
}
