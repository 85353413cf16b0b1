use std::fmt;

use crate::erlang_a::AbandonmentModel;
use crate::error::{Error, Result};

/// One sublinear term `coefficient * rho^exponent`, `exponent in [0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StaffingTerm {
    pub coefficient: f64,
    pub exponent: f64,
}

impl StaffingTerm {
    pub fn new(coefficient: f64, exponent: f64) -> Result<Self> {
        if !coefficient.is_finite() {
            return Err(Error::domain(
                "coefficient",
                format!("must be finite, got {coefficient}"),
            ));
        }
        if !(0.0..1.0).contains(&exponent) {
            return Err(Error::domain(
                "exponent",
                format!(
                    "staffing terms must be sublinear in the load, exponent in [0, 1), got {exponent}"
                ),
            ));
        }
        Ok(StaffingTerm {
            coefficient,
            exponent,
        })
    }
}

/// `N(rho) = rho + sum_j c_j rho^{alpha_j}` with strictly decreasing
/// exponents in `[0, 1)`. An empty rule staffs exactly at the offered load.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct StaffingRule {
    terms: Vec<StaffingTerm>,
}

impl StaffingRule {
    /// Terms may come in any order; they are sorted by decreasing exponent.
    /// Two terms with the same exponent are rejected.
    pub fn new(mut terms: Vec<StaffingTerm>) -> Result<Self> {
        terms.sort_by(|a, b| b.exponent.total_cmp(&a.exponent));
        if let Some(w) = terms.windows(2).find(|w| w[0].exponent == w[1].exponent) {
            return Err(Error::domain(
                "exponent",
                format!("exponent {} appears more than once", w[0].exponent),
            ));
        }
        Ok(StaffingRule { terms })
    }

    /// `N = rho + beta * sqrt(rho)`.
    pub fn square_root(beta: f64) -> Result<Self> {
        Self::new(vec![StaffingTerm::new(beta, 0.5)?])
    }

    pub fn terms(&self) -> &[StaffingTerm] {
        &self.terms
    }

    /// Server count for offered load `rho`. May be non-positive for small
    /// loads under understaffing rules; callers check.
    pub fn servers(&self, rho: f64) -> f64 {
        rho + self
            .terms
            .iter()
            .map(|t| t.coefficient * rho.powf(t.exponent))
            .sum::<f64>()
    }

    /// First term with a non-zero coefficient.
    fn leading(&self) -> Option<&StaffingTerm> {
        self.terms.iter().find(|t| t.coefficient != 0.0)
    }
}

impl fmt::Display for StaffingRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N = rho")?;
        for t in &self.terms {
            let sign = if t.coefficient < 0.0 { '-' } else { '+' };
            write!(f, " {sign} {}*rho^{}", t.coefficient.abs(), t.exponent)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegimeKind {
    /// `rho - N` grows faster than `sqrt(lambda)`.
    OverloadedOmega,
    /// `rho - N` of order `sqrt(lambda)`: `z > 0`.
    OverloadedTheta,
    /// `|N - rho|` is `o(sqrt(lambda))`: `z = 0`.
    Balanced,
    /// `N - rho` of order `sqrt(lambda)`: `z < 0`.
    UnderloadedTheta,
    /// `N - rho` grows faster than `sqrt(lambda)`.
    UnderloadedOmega,
}

impl RegimeKind {
    pub fn name(self) -> &'static str {
        match self {
            RegimeKind::OverloadedOmega => "OverloadedOmega",
            RegimeKind::OverloadedTheta => "OverloadedTheta",
            RegimeKind::Balanced => "Balanced",
            RegimeKind::UnderloadedTheta => "UnderloadedTheta",
            RegimeKind::UnderloadedOmega => "UnderloadedOmega",
        }
    }
}

/// A limiting regime with its centred gap `z = lim (rho - N) / sqrt(N)` when
/// that limit is finite, and `z_hat = z sqrt(mu / theta)` once an abandonment
/// model is attached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeClass {
    pub kind: RegimeKind,
    pub z: Option<f64>,
    pub z_hat: Option<f64>,
}

impl RegimeClass {
    /// Regime for a given `z`: positive is overloaded, negative underloaded.
    pub fn from_z(z: f64) -> Result<Self> {
        if !z.is_finite() {
            return Err(Error::domain("z", format!("must be finite, got {z}")));
        }
        let kind = if z > 0.0 {
            RegimeKind::OverloadedTheta
        } else if z < 0.0 {
            RegimeKind::UnderloadedTheta
        } else {
            RegimeKind::Balanced
        };
        Ok(RegimeClass {
            kind,
            z: Some(if z == 0.0 { 0.0 } else { z }),
            z_hat: None,
        })
    }

    pub fn omega(overloaded: bool) -> Self {
        RegimeClass {
            kind: if overloaded {
                RegimeKind::OverloadedOmega
            } else {
                RegimeKind::UnderloadedOmega
            },
            z: None,
            z_hat: None,
        }
    }

    pub fn with_abandonment(mut self, m: &AbandonmentModel) -> Self {
        self.z_hat = self.z.map(|z| z * (m.mu() / m.theta()).sqrt());
        self
    }
}

/// Regime of a staffing rule, read off its leading sublinear term `c rho^a`:
/// `a > 1/2` gives an Omega regime (overloaded iff `c < 0`), `a = 1/2` a Theta
/// regime with `z = -c`, and `a < 1/2` or no term the balanced regime.
///
/// `z` is taken from the coefficient of `sqrt(rho)`; the definition via
/// `sqrt(N)` has the same limit.
pub fn classify(rule: &StaffingRule) -> RegimeClass {
    match rule.leading() {
        Some(t) if t.exponent > 0.5 => RegimeClass::omega(t.coefficient < 0.0),
        Some(t) if t.exponent == 0.5 => {
            RegimeClass::from_z(-t.coefficient).expect("coefficient is finite")
        }
        _ => RegimeClass::from_z(0.0).expect("zero is finite"),
    }
}
