//! Birth-death ground truth for M/M/N and M/M/N+M.
//!
//! The stationary law is product form, `pi_i ∝ prod_{j<=i} arrival / d_j`
//! with death rate `d_j = min(j, N) service + max(j - N, 0) abandonment`, so
//! no linear solve is needed. Everything is accumulated in log space and
//! normalised with a single log-sum-exp.

use crate::error::{Error, Result};

/// Largest tail mass tolerated beyond the truncation point.
pub const TAIL_LIMIT: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BirthDeathSpec {
    pub arrival: f64,
    pub service: f64,
    pub servers: u64,
    /// Zero means the pure M/M/N chain.
    pub abandonment: f64,
    /// State cap `K`; `None` picks one automatically.
    pub truncation: Option<usize>,
}

impl BirthDeathSpec {
    pub fn new(arrival: f64, service: f64, servers: u64, abandonment: f64) -> Self {
        BirthDeathSpec {
            arrival,
            service,
            servers,
            abandonment,
            truncation: None,
        }
    }

    pub fn with_truncation(mut self, cap: usize) -> Self {
        self.truncation = Some(cap);
        self
    }

    fn validate(&self) -> Result<()> {
        let positive = |name, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::domain(
                    name,
                    format!("must be positive and finite, got {v}"),
                ))
            }
        };
        positive("arrival", self.arrival)?;
        positive("service", self.service)?;
        if self.servers == 0 {
            return Err(Error::domain("servers", "need at least one server"));
        }
        if !(self.abandonment >= 0.0 && self.abandonment.is_finite()) {
            return Err(Error::domain(
                "abandonment",
                format!("must be non-negative and finite, got {}", self.abandonment),
            ));
        }
        if self.abandonment == 0.0 && self.arrival >= self.servers as f64 * self.service {
            return Err(Error::domain(
                "arrival",
                format!(
                    "M/M/N without abandonment is unstable: arrival {} >= servers * service {}",
                    self.arrival,
                    self.servers as f64 * self.service
                ),
            ));
        }
        if let Some(cap) = self.truncation {
            if cap as u64 <= self.servers {
                return Err(Error::domain(
                    "truncation",
                    format!(
                        "K = {cap} must exceed the number of servers {}",
                        self.servers
                    ),
                ));
            }
        }
        Ok(())
    }

    fn death_rate(&self, j: usize) -> f64 {
        let j = j as u64;
        let busy = j.min(self.servers) as f64;
        let waiting = j.saturating_sub(self.servers) as f64;
        busy * self.service + waiting * self.abandonment
    }

    /// Starting cap:
    /// `N + ceil(20 sqrt(arrival / max(abandonment, service)) + 20 arrival / (N service))`.
    pub fn default_truncation(&self) -> usize {
        let n = self.servers as f64;
        let spread = 20.0 * (self.arrival / self.abandonment.max(self.service)).sqrt()
            + 20.0 * self.arrival / (n * self.service);
        self.servers as usize + spread.ceil() as usize
    }
}

/// Normalised stationary probabilities over states `0..=K`.
#[derive(Debug, Clone, PartialEq)]
pub struct StationaryDistribution {
    pub probabilities: Vec<f64>,
    /// Geometric upper bound on the probability mass above `K`.
    pub tail_mass: f64,
}

impl StationaryDistribution {
    pub fn cap(&self) -> usize {
        self.probabilities.len() - 1
    }
}

fn solve(spec: &BirthDeathSpec, cap: usize) -> StationaryDistribution {
    let ln_arrival = spec.arrival.ln();
    let mut ln_unnorm = Vec::with_capacity(cap + 1);
    let mut acc = 0.0;
    ln_unnorm.push(acc);
    for j in 1..=cap {
        acc += ln_arrival - spec.death_rate(j).ln();
        ln_unnorm.push(acc);
    }
    let max = ln_unnorm.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let total: f64 = ln_unnorm.iter().map(|l| (l - max).exp()).sum();
    let ln_total = max + total.ln();
    let probabilities: Vec<f64> = ln_unnorm.iter().map(|l| (l - ln_total).exp()).collect();

    // Birth/death ratios only shrink above K, so the tail is dominated by a
    // geometric series with the first ratio.
    let ratio = spec.arrival / spec.death_rate(cap + 1);
    let tail_mass = if ratio < 1.0 {
        probabilities[cap] * ratio / (1.0 - ratio)
    } else {
        f64::INFINITY
    };
    StationaryDistribution {
        probabilities,
        tail_mass,
    }
}

/// Stationary distribution of the chain.
///
/// With an explicit cap, a tail mass above [`TAIL_LIMIT`] is an error. Without
/// one, the cap starts at [`BirthDeathSpec::default_truncation`] and doubles
/// until the tail check passes.
pub fn steady_state(spec: &BirthDeathSpec) -> Result<StationaryDistribution> {
    spec.validate()?;
    match spec.truncation {
        Some(cap) => {
            let dist = solve(spec, cap);
            if dist.tail_mass > TAIL_LIMIT {
                return Err(Error::Truncation {
                    cap,
                    tail_mass: dist.tail_mass,
                    limit: TAIL_LIMIT,
                });
            }
            Ok(dist)
        }
        None => {
            let mut cap = spec.default_truncation().max(spec.servers as usize + 1);
            loop {
                let dist = solve(spec, cap);
                if dist.tail_mass <= TAIL_LIMIT {
                    return Ok(dist);
                }
                if cap > 1 << 26 {
                    return Err(Error::Truncation {
                        cap,
                        tail_mass: dist.tail_mass,
                        limit: TAIL_LIMIT,
                    });
                }
                cap *= 2;
            }
        }
    }
}

/// Probability that an arrival has to wait: `sum_{i >= N} pi_i` (PASTA).
pub fn delay_probability_from_pi(spec: &BirthDeathSpec, dist: &StationaryDistribution) -> f64 {
    let n = spec.servers as usize;
    // Summing the complement keeps precision when the answer is close to 1
    // only if the head is small; pick whichever side is shorter in mass.
    let head: f64 = dist.probabilities.iter().take(n).sum();
    let tail: f64 = dist.probabilities.iter().skip(n).sum();
    if tail < head {
        tail
    } else {
        1.0 - head
    }
}
