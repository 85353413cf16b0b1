use rayon::prelude::*;

use super::limits::{limit_delay_probability, limit_erlang_c, ExtendedReal};
use super::staffing::{classify, StaffingRule};
use crate::erlang::{erlang_c_default, OfferedLoad, ServerCount};
use crate::erlang_a::{delay_probability, AbandonmentModel};
use crate::error::{Error, Result};

/// Quantity tracked by a convergence study.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    ErlangC,
    DelayProbability,
}

/// How the staffing rule's server count is used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Rounding {
    /// Real-valued `N`, as in the limit results.
    #[default]
    Real,
    /// Round to the nearest integer. Perturbs `N` by up to 1/2, which shifts
    /// the centred gap by `O(1/sqrt(rho))`.
    Nearest,
}

/// Service rate and optional abandonment rate shared by every row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StudyModel {
    pub mu: f64,
    pub theta: Option<f64>,
}

/// One arrival rate of a study.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRecord {
    pub lambda: f64,
    pub rho: f64,
    pub n: f64,
    /// `None` when the row failed; see `failure`.
    pub finite_value: Option<f64>,
    pub limit_value: ExtendedReal,
    /// `|finite - limit|`, `PosInfinity` for an infinite limit.
    pub abs_error: Option<ExtendedReal>,
    pub failure: Option<Error>,
}

/// Evaluate the finite system along `lambdas` and compare with the limit.
///
/// Input validation failures abort the study. Numerical failures are
/// recorded on their row and the study carries on. Rows are computed in
/// parallel and returned sorted by `lambda`.
pub fn run_convergence_study(
    rule: &StaffingRule,
    model: &StudyModel,
    lambdas: &[f64],
    target: Target,
    rounding: Rounding,
) -> Result<Vec<ConvergenceRecord>> {
    if !(model.mu > 0.0 && model.mu.is_finite()) {
        return Err(Error::domain(
            "mu",
            format!("must be positive, got {}", model.mu),
        ));
    }
    if let Some(&bad) = lambdas.iter().find(|l| !(**l > 0.0 && l.is_finite())) {
        return Err(Error::domain(
            "lambda",
            format!("arrival rates must be positive, got {bad}"),
        ));
    }
    let abandonment = match (target, model.theta) {
        (Target::DelayProbability, None) => {
            return Err(Error::domain(
                "theta",
                "the delay-probability target needs an abandonment rate",
            ))
        }
        (_, Some(theta)) => Some(AbandonmentModel::new(model.mu, theta)?),
        (Target::ErlangC, None) => None,
    };

    let regime = classify(rule);
    let limit = match (target, &abandonment) {
        (Target::DelayProbability, Some(m)) => {
            limit_delay_probability(&regime.with_abandonment(m), m)
        }
        _ => limit_erlang_c(&regime),
    }
    .value;

    let mut rows: Vec<ConvergenceRecord> = lambdas
        .par_iter()
        .map(|&lambda| {
            let rho = lambda / model.mu;
            let raw_n = rule.servers(rho);
            let n = match rounding {
                Rounding::Real => raw_n,
                Rounding::Nearest => raw_n.round(),
            };
            let finite = evaluate(n, rho, target, abandonment.as_ref());
            let (finite_value, abs_error, failure) = match finite {
                Ok(v) => (Some(v), Some(limit.abs_diff(v)), None),
                Err(e) => (None, None, Some(e)),
            };
            ConvergenceRecord {
                lambda,
                rho,
                n,
                finite_value,
                limit_value: limit,
                abs_error,
                failure,
            }
        })
        .collect();
    rows.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
    Ok(rows)
}

fn evaluate(n: f64, rho: f64, target: Target, m: Option<&AbandonmentModel>) -> Result<f64> {
    if n.is_nan() || n <= 0.0 {
        return Err(Error::domain(
            "n",
            format!("staffing rule gives N = {n} <= 0 at rho = {rho}"),
        ));
    }
    let servers = ServerCount::new(n)?;
    let load = OfferedLoad::new(rho)?;
    match (target, m) {
        (Target::ErlangC, _) => Ok(erlang_c_default(servers, load)?.value),
        (Target::DelayProbability, Some(m)) => Ok(delay_probability(servers, load, m)?.value),
        (Target::DelayProbability, None) => unreachable!("checked by the caller"),
    }
}
