use std::fmt;

use super::staffing::{RegimeClass, RegimeKind};
use crate::erlang_a::AbandonmentModel;
use crate::normal::mills_ratio;

/// A real number or `+inf`. Infinite limits are always produced explicitly,
/// never by floating-point overflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedReal {
    Finite(f64),
    PosInfinity,
}

impl ExtendedReal {
    pub fn finite(self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(v) => Some(v),
            ExtendedReal::PosInfinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ExtendedReal::PosInfinity)
    }

    /// `|a - b|` against a finite value.
    pub fn abs_diff(self, other: f64) -> ExtendedReal {
        match self {
            ExtendedReal::Finite(v) => ExtendedReal::Finite((v - other).abs()),
            ExtendedReal::PosInfinity => ExtendedReal::PosInfinity,
        }
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::Finite(v) => write!(f, "{v}"),
            ExtendedReal::PosInfinity => f.write_str("inf"),
        }
    }
}

/// Which closed form produced a [`LimitResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClosedForm {
    Infinity,
    /// `(1 - xi(z))^{-1}`
    OneMinusXiInverse,
    One,
    Zero,
    /// `(1 - xi(z) / xi(-z_hat))^{-1}`, or its `z -> 0` value
    /// `(1 + sqrt(theta / mu))^{-1}`.
    PropOneForm,
}

impl ClosedForm {
    pub fn expression(self) -> &'static str {
        match self {
            ClosedForm::Infinity => "inf",
            ClosedForm::OneMinusXiInverse => "(1 - xi(z))^-1",
            ClosedForm::One => "1",
            ClosedForm::Zero => "0",
            ClosedForm::PropOneForm => "(1 - xi(z)/xi(-z_hat))^-1",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitResult {
    pub value: ExtendedReal,
    pub closed_form: ClosedForm,
}

/// Limit of `C(N, rho)` as the arrival rate grows, for a given regime.
pub fn limit_erlang_c(regime: &RegimeClass) -> LimitResult {
    let finite = |value, closed_form| LimitResult {
        value: ExtendedReal::Finite(value),
        closed_form,
    };
    match regime.kind {
        RegimeKind::OverloadedOmega => LimitResult {
            value: ExtendedReal::PosInfinity,
            closed_form: ClosedForm::Infinity,
        },
        RegimeKind::UnderloadedOmega => finite(0.0, ClosedForm::Zero),
        RegimeKind::Balanced => finite(1.0, ClosedForm::One),
        RegimeKind::OverloadedTheta | RegimeKind::UnderloadedTheta => {
            let z = regime.z.expect("theta regimes carry z");
            // For z far below zero R(z) overflows and the limit is 0.
            let xi = z * mills_ratio(z);
            finite(1.0 / (1.0 - xi), ClosedForm::OneMinusXiInverse)
        }
    }
}

/// Limit of the Erlang-A delay probability for a given regime.
pub fn limit_delay_probability(regime: &RegimeClass, m: &AbandonmentModel) -> LimitResult {
    let finite = |value, closed_form| LimitResult {
        value: ExtendedReal::Finite(value),
        closed_form,
    };
    let root_ratio = (m.theta() / m.mu()).sqrt();
    match regime.kind {
        RegimeKind::OverloadedOmega => finite(1.0, ClosedForm::One),
        RegimeKind::UnderloadedOmega => finite(0.0, ClosedForm::Zero),
        RegimeKind::Balanced => finite(1.0 / (1.0 + root_ratio), ClosedForm::PropOneForm),
        RegimeKind::OverloadedTheta | RegimeKind::UnderloadedTheta => {
            let z = regime.z.expect("theta regimes carry z");
            let z_hat = z / root_ratio;
            // xi(z) / xi(-z_hat) = -sqrt(theta/mu) R(z) / R(-z_hat), which stays
            // well defined as z -> 0.
            let q = -root_ratio * mills_ratio(z) / mills_ratio(-z_hat);
            finite(1.0 / (1.0 - q), ClosedForm::PropOneForm)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn theta_regime(z: f64) -> RegimeClass {
        RegimeClass::from_z(z).unwrap()
    }

    #[test]
    fn erlang_c_table() {
        assert!(limit_erlang_c(&RegimeClass::omega(true))
            .value
            .is_infinite());
        assert_eq!(
            limit_erlang_c(&RegimeClass::omega(false)).value,
            ExtendedReal::Finite(0.0)
        );
        assert_eq!(
            limit_erlang_c(&theta_regime(0.0)).value,
            ExtendedReal::Finite(1.0)
        );
        // 40-digit references.
        let v = limit_erlang_c(&theta_regime(-1.0)).value.finite().unwrap();
        assert!((v - 0.223_361_274_798_260_74).abs() < 1e-12);
        let v = limit_erlang_c(&theta_regime(1.0)).value.finite().unwrap();
        assert!((v - 2.904_271_233_329_692).abs() < 1e-11);
        assert_eq!(
            limit_erlang_c(&theta_regime(1.0)).closed_form,
            ClosedForm::OneMinusXiInverse
        );
    }

    #[test]
    fn delay_table() {
        let m = AbandonmentModel::new(5.0, 10.0).unwrap();
        let v = limit_delay_probability(&theta_regime(0.0), &m)
            .value
            .finite()
            .unwrap();
        assert!((v - 0.414_213_562_373_095_1).abs() < 1e-14);
        assert_eq!(
            limit_delay_probability(&RegimeClass::omega(false), &m).value,
            ExtendedReal::Finite(0.0)
        );
        assert_eq!(
            limit_delay_probability(&RegimeClass::omega(true), &m).value,
            ExtendedReal::Finite(1.0)
        );
        // (1 - xi(1)/xi(-sqrt(1/2)))^{-1}, 30-digit reference 0.725187266...
        let v = limit_delay_probability(&theta_regime(1.0), &m)
            .value
            .finite()
            .unwrap();
        assert!((v - 0.725_187_266_187_867_7).abs() < 1e-12, "{v}");
    }

    #[test]
    fn continuity_at_balanced_boundary() {
        let m = AbandonmentModel::new(2.0, 3.0).unwrap();
        let mid = limit_delay_probability(&theta_regime(0.0), &m)
            .value
            .finite()
            .unwrap();
        let at = |z| {
            limit_delay_probability(&theta_regime(z), &m)
                .value
                .finite()
                .unwrap()
        };
        // The theta form has slope 1/((1 + sqrt(theta/mu)) sqrt(pi/2)) at 0, so
        // one-sided values sit ~3e-7 away; the symmetric mean is O(z^2).
        let (lo, hi) = (at(-1e-6), at(1e-6));
        assert!((lo - mid).abs() < 1e-6 && (hi - mid).abs() < 1e-6);
        assert!((0.5 * (lo + hi) - mid).abs() < 1e-8);
        let slope = 1.0 / ((1.0 + 1.5f64.sqrt()) * (std::f64::consts::PI / 2.0).sqrt());
        assert!(((hi - lo) / 2e-6 - slope).abs() < 1e-6);
    }

    #[test]
    fn extreme_z_saturates() {
        let m = AbandonmentModel::new(1.0, 1.0).unwrap();
        let lo = limit_delay_probability(&theta_regime(-60.0), &m)
            .value
            .finite()
            .unwrap();
        let hi = limit_delay_probability(&theta_regime(60.0), &m)
            .value
            .finite()
            .unwrap();
        assert!(lo < 1e-10);
        assert!(hi > 1.0 - 1e-3);
        let c = limit_erlang_c(&theta_regime(-60.0)).value.finite().unwrap();
        assert!((0.0..1e-100).contains(&c));
    }

    proptest! {
        #[test]
        fn balanced_closed_form(mu in 0.01..100.0f64, theta in 0.01..100.0f64) {
            let m = AbandonmentModel::new(mu, theta).unwrap();
            let v = limit_delay_probability(&theta_regime(0.0), &m).value.finite().unwrap();
            prop_assert!((v - 1.0 / (1.0 + (theta / mu).sqrt())).abs() < 1e-14);
        }
    }
}
