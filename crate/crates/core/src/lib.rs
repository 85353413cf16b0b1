//! Exact and asymptotic Erlang-C / Erlang-A computations.
//!
//! The crate is organised bottom-up:
//!
//! * [`normal`]: standard-normal density, tail, and the signed Mills-ratio
//!   function `xi(x) = x * Phi^c(x) / phi(x)`.
//! * [`quadrature`]: adaptive Gauss-Kronrod integration, including a driver for
//!   sharply peaked log-concave integrands on (semi-)infinite ranges.
//! * [`erlang`]: Erlang-B and Erlang-C for integer and real server counts.
//! * [`erlang_a`]: the M/M/N+M (Erlang-A) delay probability and state
//!   probabilities.
//! * [`oracle`]: birth-death product-form solver used as independent ground
//!   truth.
//! * [`asymptotics`]: staffing rules, regime classification, limit values,
//!   the `varphi` series and convergence studies.

pub mod asymptotics;
pub mod erlang;
pub mod erlang_a;
mod error;
pub mod normal;
pub mod oracle;
pub mod quadrature;

pub use asymptotics::{
    classify, limit_delay_probability, limit_erlang_c, run_convergence_study, varphi_eval,
    varphi_series, ClosedForm, ConvergenceRecord, ExtendedReal, LimitResult, RegimeClass,
    RegimeKind, Rounding, SeriesCoefficients, StaffingRule, StaffingTerm, StudyModel, Target,
};
pub use erlang::{
    erlang_b, erlang_c, erlang_c_default, erlang_c_reciprocal_minus_one, ErlangValue, Method,
    OfferedLoad, ServerCount,
};
pub use erlang_a::{
    delay_probability, j_integral, scaled_j, scaled_j_finite_form, state_probability,
    AbandonmentModel, DelayProbability,
};
pub use error::{Error, Result};
pub use oracle::{delay_probability_from_pi, steady_state, BirthDeathSpec, StationaryDistribution};
