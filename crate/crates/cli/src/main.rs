//! `erlangc`: exact Erlang-B/C/A values, regime classification, limits,
//! convergence studies and z-sweeps as CSV.

mod args;
mod format;

use std::fmt::Write as _;
use std::io::Write as _;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use erlangc_core::{
    classify, delay_probability, delay_probability_from_pi, erlang_b, erlang_c, erlang_c_default,
    limit_delay_probability, limit_erlang_c, run_convergence_study, state_probability,
    steady_state, AbandonmentModel, BirthDeathSpec, Error, Method, OfferedLoad, RegimeClass,
    Rounding, ServerCount, StaffingRule, StaffingTerm, StudyModel, Target,
};

use crate::args::{GeometricRange, Grid, Rates};
use crate::format::{extended, num};

const EXIT_USAGE: u8 = 2;
const EXIT_DOMAIN: u8 = 3;
const EXIT_NUMERIC: u8 = 4;

#[derive(Parser)]
#[command(
    name = "erlangc",
    version,
    about = "Erlang-B/C/A values and their many-server limits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// B, C and, with --theta, the Erlang-A delay probability for one system.
    Exact {
        /// Number of servers; may be real.
        #[arg(long, value_parser = args::real, allow_hyphen_values = true)]
        n: f64,
        /// Offered load lambda / mu.
        #[arg(long, value_parser = args::real, allow_hyphen_values = true)]
        rho: f64,
        #[arg(long, value_parser = args::real, default_value = "1", allow_hyphen_values = true)]
        mu: f64,
        /// Abandonment rate; turns on the Erlang-A rows.
        #[arg(long, value_parser = args::real, allow_hyphen_values = true)]
        theta: Option<f64>,
        /// Erlang-C route: direct-sum, recursion, quadrature-a, quadrature-b.
        #[arg(long, value_parser = args::method)]
        method: Option<Method>,
    },
    /// Regime and limit of a staffing rule N = rho + sum c * rho^alpha.
    Classify {
        /// Rule term coefficient:exponent, repeatable.
        #[arg(long = "term", value_parser = args::term, allow_hyphen_values = true)]
        terms: Vec<(f64, f64)>,
        #[arg(long, value_parser = args::real, default_value = "1", allow_hyphen_values = true)]
        mu: f64,
        /// Abandonment rate; adds z_hat and the delay-probability limit.
        #[arg(long, value_parser = args::real, allow_hyphen_values = true)]
        theta: Option<f64>,
    },
    /// Finite-system values along a staffing rule against their limit.
    #[command(group(ArgGroup::new("rates").required(true).args(["lambdas", "lambda_range"])))]
    Converge {
        #[arg(long = "term", value_parser = args::term, allow_hyphen_values = true)]
        terms: Vec<(f64, f64)>,
        #[arg(long, value_parser = args::real, default_value = "1", allow_hyphen_values = true)]
        mu: f64,
        #[arg(long, value_parser = args::real, allow_hyphen_values = true)]
        theta: Option<f64>,
        /// Comma-separated arrival rates.
        #[arg(long, value_parser = args::lambdas, allow_hyphen_values = true)]
        lambdas: Option<Rates>,
        /// Geometric arrival-rate range lo:hi:count.
        #[arg(long, value_parser = args::geometric)]
        lambda_range: Option<GeometricRange>,
        #[arg(long, value_enum, default_value_t = ConvergeTarget::ErlangC)]
        target: ConvergeTarget,
        /// Round the rule's server count to the nearest integer.
        #[arg(long)]
        round_n: bool,
    },
    /// A limit or finite-system value over a grid of z.
    Sweep {
        #[arg(long, value_enum)]
        target: SweepTarget,
        /// Grid start:stop:step; start = stop gives one point.
        #[arg(long, value_parser = args::grid, allow_hyphen_values = true)]
        z: Grid,
        #[arg(long, value_parser = args::real, default_value = "5", allow_hyphen_values = true)]
        mu: f64,
        #[arg(long, value_parser = args::real, default_value = "10", allow_hyphen_values = true)]
        theta: f64,
        /// Arrival rate for the finite-c and finite-p targets.
        #[arg(long, value_parser = args::real, allow_hyphen_values = true)]
        lambda: Option<f64>,
        #[arg(long)]
        round_n: bool,
    },
    /// Closed forms against the birth-death chain.
    Oracle {
        #[arg(long, allow_hyphen_values = true)]
        n: u64,
        #[arg(long, value_parser = args::real, allow_hyphen_values = true)]
        rho: f64,
        #[arg(long, value_parser = args::real, default_value = "1", allow_hyphen_values = true)]
        mu: f64,
        #[arg(long, value_parser = args::real, allow_hyphen_values = true)]
        theta: Option<f64>,
        /// State-space cap; chosen automatically when absent.
        #[arg(long)]
        k: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ConvergeTarget {
    ErlangC,
    DelayProbability,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepTarget {
    ErlangCLimit,
    DelayLimit,
    FiniteC,
    FiniteP,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match &e {
            Error::Domain { name, reason } => Failure {
                code: EXIT_DOMAIN,
                message: format!("{}: {reason}", flag_for(name)),
            },
            Error::Truncation { .. } => Failure {
                code: EXIT_NUMERIC,
                message: format!("--k: {e}"),
            },
            Error::NoConvergence { .. } => Failure {
                code: EXIT_NUMERIC,
                message: e.to_string(),
            },
        }
    }
}

fn flag_for(name: &str) -> &'static str {
    match name {
        "n" | "servers" | "i" => "--n",
        "rho" | "arrival" => "--rho",
        "mu" | "service" => "--mu",
        "theta" | "abandonment" => "--theta",
        "coefficient" | "exponent" => "--term",
        "lambda" => "--lambdas",
        "z" | "x" => "--z",
        "truncation" => "--k",
        _ => "input",
    }
}

fn domain(flag: &str, reason: impl std::fmt::Display) -> Failure {
    Failure {
        code: EXIT_DOMAIN,
        message: format!("{flag}: {reason}"),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout
                .write_all(out.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::FAILURE;
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Result<String, Failure> {
    match command {
        Command::Exact {
            n,
            rho,
            mu,
            theta,
            method,
        } => cmd_exact(n, rho, mu, theta, method),
        Command::Classify { terms, mu, theta } => cmd_classify(&terms, mu, theta),
        Command::Converge {
            terms,
            mu,
            theta,
            lambdas,
            lambda_range,
            target,
            round_n,
        } => {
            let lambdas = match (lambdas, lambda_range) {
                (Some(Rates(l)), _) => l,
                (None, Some(r)) => r.points(),
                (None, None) => unreachable!("clap requires one of them"),
            };
            cmd_converge(&terms, mu, theta, &lambdas, target, round_n)
        }
        Command::Sweep {
            target,
            z,
            mu,
            theta,
            lambda,
            round_n,
        } => cmd_sweep(target, z, mu, theta, lambda, round_n),
        Command::Oracle {
            n,
            rho,
            mu,
            theta,
            k,
        } => cmd_oracle(n, rho, mu, theta, k),
    }
}

fn rule_from(terms: &[(f64, f64)]) -> Result<StaffingRule, Failure> {
    let terms = terms
        .iter()
        .map(|&(c, a)| StaffingTerm::new(c, a))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(StaffingRule::new(terms)?)
}

fn cmd_exact(
    n: f64,
    rho: f64,
    mu: f64,
    theta: Option<f64>,
    method: Option<Method>,
) -> Result<String, Failure> {
    let servers = ServerCount::new(n)?;
    let load = OfferedLoad::new(rho)?;
    let b = erlang_b(servers, load)?;
    let c = erlang_c(
        servers,
        load,
        method.unwrap_or(Method::default_for(servers)),
    )?;
    let mut out = String::from("quantity,value,method,est_abs_error\n");
    let _ = writeln!(
        out,
        "B,{},{},{}",
        num(b.value),
        b.method.name(),
        num(b.est_abs_error)
    );
    let _ = writeln!(
        out,
        "C,{},{},{}",
        num(c.value),
        c.method.name(),
        num(c.est_abs_error)
    );
    if let Some(theta) = theta {
        let m = AbandonmentModel::new(mu, theta)?;
        let p = delay_probability(servers, load, &m)?;
        let rel = p.ratio_rel_error;
        let _ = writeln!(
            out,
            "P,{},scaled-j,{}",
            num(p.value),
            num(p.est_abs_error())
        );
        let _ = writeln!(out, "J,{},quadrature,{}", num(p.j), num(p.j * rel));
        let _ = writeln!(
            out,
            "scaled_j,{},quadrature,{}",
            num(p.scaled_j),
            num(p.scaled_j.abs() * rel)
        );
    }
    Ok(out)
}

fn cmd_classify(terms: &[(f64, f64)], mu: f64, theta: Option<f64>) -> Result<String, Failure> {
    let rule = rule_from(terms)?;
    let m = theta.map(|t| AbandonmentModel::new(mu, t)).transpose()?;
    let mut regime = classify(&rule);
    if let Some(m) = &m {
        regime = regime.with_abandonment(m);
    }
    let opt = |v: Option<f64>| v.map_or_else(|| "NA".to_string(), num);
    let limit_c = limit_erlang_c(&regime);
    let mut out = String::from("field,value\n");
    let _ = writeln!(out, "rule,{rule}");
    let _ = writeln!(out, "kind,{}", regime.kind.name());
    let _ = writeln!(out, "z,{}", opt(regime.z));
    let _ = writeln!(
        out,
        "erlang_c_limit_expression,{}",
        limit_c.closed_form.expression()
    );
    let _ = writeln!(out, "erlang_c_limit,{}", extended(limit_c.value));
    if let Some(m) = &m {
        let limit_p = limit_delay_probability(&regime, m);
        let _ = writeln!(out, "z_hat,{}", opt(regime.z_hat));
        let _ = writeln!(
            out,
            "delay_limit_expression,{}",
            limit_p.closed_form.expression()
        );
        let _ = writeln!(out, "delay_limit,{}", extended(limit_p.value));
    }
    Ok(out)
}

fn cmd_converge(
    terms: &[(f64, f64)],
    mu: f64,
    theta: Option<f64>,
    lambdas: &[f64],
    target: ConvergeTarget,
    round_n: bool,
) -> Result<String, Failure> {
    let rule = rule_from(terms)?;
    let target = match target {
        ConvergeTarget::ErlangC => Target::ErlangC,
        ConvergeTarget::DelayProbability => Target::DelayProbability,
    };
    let rounding = if round_n {
        Rounding::Nearest
    } else {
        Rounding::Real
    };
    let rows = run_convergence_study(&rule, &StudyModel { mu, theta }, lambdas, target, rounding)?;
    let mut out = String::from("lambda,rho,n,finite_value,limit_value,abs_error\n");
    for row in &rows {
        if let Some(e) = &row.failure {
            eprintln!(
                "warning: lambda = {}: {}",
                num(row.lambda),
                Failure::from(e.clone()).message
            );
        }
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            num(row.lambda),
            num(row.rho),
            num(row.n),
            row.finite_value.map_or_else(|| "NA".to_string(), num),
            extended(row.limit_value),
            row.abs_error.map_or_else(|| "NA".to_string(), extended),
        );
    }
    Ok(out)
}

fn cmd_sweep(
    target: SweepTarget,
    z: Grid,
    mu: f64,
    theta: f64,
    lambda: Option<f64>,
    round_n: bool,
) -> Result<String, Failure> {
    let m = AbandonmentModel::new(mu, theta)?;
    let finite_load = match target {
        SweepTarget::FiniteC | SweepTarget::FiniteP => {
            let lambda = lambda.ok_or_else(|| {
                domain(
                    "--lambda",
                    "the finite-c and finite-p targets need an arrival rate",
                )
            })?;
            if lambda <= 0.0 {
                return Err(domain(
                    "--lambda",
                    format!("must be positive, got {lambda}"),
                ));
            }
            Some(lambda / mu)
        }
        _ => None,
    };
    let mut out = String::from("z,value\n");
    for z in z.points() {
        let value = match (target, finite_load) {
            (SweepTarget::ErlangCLimit, _) => {
                extended(limit_erlang_c(&RegimeClass::from_z(z)?).value)
            }
            (SweepTarget::DelayLimit, _) => {
                let regime = RegimeClass::from_z(z)?.with_abandonment(&m);
                extended(limit_delay_probability(&regime, &m).value)
            }
            (_, Some(rho)) => {
                // N = rho - z sqrt(rho), so that z is the centred gap.
                let raw = rho - z * rho.sqrt();
                let n = if round_n { raw.round() } else { raw };
                match finite_value(target, n, rho, &m) {
                    Ok(v) => num(v),
                    Err(e) => {
                        eprintln!("warning: z = {}: {}", num(z), Failure::from(e).message);
                        "NA".to_string()
                    }
                }
            }
            (_, None) => unreachable!("finite targets carry a load"),
        };
        let _ = writeln!(out, "{},{value}", num(z));
    }
    Ok(out)
}

fn finite_value(target: SweepTarget, n: f64, rho: f64, m: &AbandonmentModel) -> Result<f64, Error> {
    let servers = ServerCount::new(n)?;
    let load = OfferedLoad::new(rho)?;
    match target {
        SweepTarget::FiniteC => Ok(erlang_c_default(servers, load)?.value),
        _ => Ok(delay_probability(servers, load, m)?.value),
    }
}

fn cmd_oracle(
    n: u64,
    rho: f64,
    mu: f64,
    theta: Option<f64>,
    k: Option<usize>,
) -> Result<String, Failure> {
    let with_cap = |spec: BirthDeathSpec| match k {
        Some(k) => spec.with_truncation(k),
        None => spec,
    };
    let pure = with_cap(BirthDeathSpec::new(rho * mu, mu, n, 0.0));
    let servers = ServerCount::new(n as f64)?;
    let load = OfferedLoad::new(rho)?;

    let mut out = String::from("quantity,formula,oracle,abs_diff\n");
    let mut row = |name: &str, formula: f64, oracle: f64| {
        let _ = writeln!(
            out,
            "{name},{},{},{}",
            num(formula),
            num(oracle),
            num((formula - oracle).abs())
        );
    };

    // The pure M/M/N chain only exists below saturation; with abandonment
    // the C row is skipped there and the chain below still checks P.
    if theta.is_none() || rho < n as f64 {
        let dist = steady_state(&pure)?;
        let c = erlang_c_default(servers, load)?;
        row("C", c.value, delay_probability_from_pi(&pure, &dist));
    }
    if let Some(theta) = theta {
        let m = AbandonmentModel::new(mu, theta)?;
        let spec = with_cap(BirthDeathSpec::new(rho * mu, mu, n, theta));
        let dist = steady_state(&spec)?;
        let p = delay_probability(servers, load, &m)?;
        row("P", p.value, delay_probability_from_pi(&spec, &dist));
        let mut head = 0.0;
        for i in 0..n {
            head += state_probability(i, servers, load, &m)?;
        }
        let oracle_head: f64 = dist.probabilities.iter().take(n as usize).sum();
        row("sum_p_below_n", head, oracle_head);
    }
    Ok(out)
}
