//! Expansion of `varphi(v; x) = exp(v^2/2 - x (e^{-v/sqrt(x)} + v/sqrt(x) - 1))`
//! in powers of `x^{-1/2}`.
//!
//! Writing `s = x^{-1/2}`, the exponent equals `sum_{m>=1} e_m(v) s^m` with
//! `e_m(v) = (-1)^{m-1} v^{m+2} / (m+2)!`. The coefficients of
//! `exp(E(s)) = sum_n a_n(v) s^n` follow from `n a_n = sum_{m=1}^n m e_m a_{n-m}`.
//! All arithmetic is exact over the rationals; `a_n` has degree `3n`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest supported expansion order.
pub const K_MAX: usize = 12;

/// Polynomial in `v` with exact rational coefficients, lowest power first.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<BigRational>,
}

impl Polynomial {
    fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    fn one() -> Self {
        Polynomial {
            coeffs: vec![BigRational::one()],
        }
    }

    fn monomial(c: BigRational, power: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); power + 1];
        coeffs[power] = c;
        Polynomial { coeffs }
    }

    fn trim(mut self) -> Self {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
        self
    }

    fn add_assign(&mut self, other: &Polynomial) {
        if self.coeffs.len() < other.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), BigRational::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
    }

    fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Polynomial::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial { coeffs: out }.trim()
    }

    fn scale(&self, c: &BigRational) -> Polynomial {
        Polynomial {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
        .trim()
    }

    /// Exact coefficient of `v^power` (zero above the degree).
    pub fn coefficient(&self, power: usize) -> BigRational {
        self.coeffs
            .get(power)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    /// `(power, coefficient)` for every non-zero coefficient.
    pub fn nonzero_terms(&self) -> Vec<(usize, BigRational)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(p, c)| (p, c.clone()))
            .collect()
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(rational_to_f64).collect()
    }

    /// Horner evaluation in double precision.
    pub fn eval(&self, v: f64) -> f64 {
        self.to_f64_coeffs()
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * v + c)
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `a_0(v), ..., a_k(v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesCoefficients {
    pub order: usize,
    pub polys: Vec<Polynomial>,
}

impl SeriesCoefficients {
    /// Truncated series `sum_{i<=order} a_i(v) x^{-i/2}`.
    pub fn eval(&self, v: f64, x: f64) -> f64 {
        let s = x.sqrt().recip();
        self.polys
            .iter()
            .rev()
            .fold(0.0, |acc, p| acc * s + p.eval(v))
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Exact coefficients `a_0..a_k` of the `varphi` expansion, `k <= K_MAX`.
pub fn varphi_series(k: usize) -> Result<SeriesCoefficients> {
    if k > K_MAX {
        return Err(Error::domain(
            "k",
            format!("series order is limited to {K_MAX}, got {k}"),
        ));
    }
    // Exponent coefficients e_1..e_k.
    let exponent: Vec<Polynomial> = (1..=k)
        .map(|m| {
            let sign = if m % 2 == 1 { 1 } else { -1 };
            let c = BigRational::new(BigInt::from(sign), factorial(m + 2));
            Polynomial::monomial(c, m + 2)
        })
        .collect();

    let mut polys = vec![Polynomial::one()];
    for n in 1..=k {
        let mut acc = Polynomial::zero();
        for m in 1..=n {
            let weighted = exponent[m - 1].mul(&polys[n - m]);
            acc.add_assign(&weighted.scale(&BigRational::from_integer(BigInt::from(m))));
        }
        let an = acc
            .scale(&BigRational::new(BigInt::one(), BigInt::from(n)))
            .trim();
        polys.push(an);
    }
    Ok(SeriesCoefficients { order: k, polys })
}

/// Direct evaluation of `varphi(v; x)` for `x > 0`.
///
/// With `t = v / sqrt(x)` the exponent is `-x h(t)`, `h(t) = e^{-t} - 1 + t - t^2/2`.
/// For small `|t|` the Taylor series of `h` (starting at `-t^3/6`) avoids the
/// cancellation in the closed form.
pub fn varphi_eval(v: f64, x: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::domain(
            "x",
            format!("must be positive and finite, got {x}"),
        ));
    }
    if !v.is_finite() {
        return Err(Error::domain("v", format!("must be finite, got {v}")));
    }
    let t = v / x.sqrt();
    let h = if t.abs() < 0.5 {
        // sum_{i>=3} (-t)^i / i!
        let mut term = -t * t * t / 6.0;
        let mut sum = term;
        let mut i = 3.0;
        while term.abs() > 1e-18 * sum.abs() {
            i += 1.0;
            term *= -t / i;
            sum += term;
        }
        sum
    } else {
        (-t).exp_m1() + t - 0.5 * t * t
    };
    Ok((-x * h).exp())
}
