//! Many-server asymptotics: staffing rules, the five limiting regimes, their
//! closed-form limits, the `varphi(v; x)` expansion, and empirical
//! convergence studies.

mod limits;
mod series;
mod staffing;
mod study;

pub use limits::{limit_delay_probability, limit_erlang_c, ClosedForm, ExtendedReal, LimitResult};
pub use series::{varphi_eval, varphi_series, Polynomial, SeriesCoefficients, K_MAX};
pub use staffing::{classify, RegimeClass, RegimeKind, StaffingRule, StaffingTerm};
pub use study::{run_convergence_study, ConvergenceRecord, Rounding, StudyModel, Target};
