//! Flag value parsers. Each returns a plain message; clap attaches the flag
//! name and maps the failure to a usage error.

use erlangc_core::Method;

/// `c:alpha`
pub fn term(s: &str) -> Result<(f64, f64), String> {
    let (c, a) = s
        .split_once(':')
        .ok_or_else(|| format!("expected coefficient:exponent, got '{s}'"))?;
    Ok((real(c)?, real(a)?))
}

pub fn real(s: &str) -> Result<f64, String> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("'{s}' is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("'{s}' is not finite"))
    }
}

pub fn method(s: &str) -> Result<Method, String> {
    Method::ALL
        .into_iter()
        .find(|m| m.name() == s)
        .ok_or_else(|| {
            let names: Vec<_> = Method::ALL.iter().map(|m| m.name()).collect();
            format!("unknown method '{s}', expected one of {}", names.join(", "))
        })
}

/// Inclusive arithmetic grid `start:stop:step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

pub fn grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [start, stop, step] = parts[..] else {
        return Err(format!("expected start:stop:step, got '{s}'"));
    };
    let g = Grid {
        start: real(start)?,
        stop: real(stop)?,
        step: real(step)?,
    };
    if g.step <= 0.0 {
        return Err(format!("step must be positive, got {}", g.step));
    }
    if g.stop < g.start {
        return Err(format!("stop {} is below start {}", g.stop, g.start));
    }
    Ok(g)
}

impl Grid {
    /// Points `start, start + step, ...` up to `stop`. When `stop - start` is
    /// a whole number of steps the points are placed by interpolation, so the
    /// end points and any grid point at zero come out exact.
    pub fn points(&self) -> Vec<f64> {
        let span = self.stop - self.start;
        let ratio = span / self.step;
        let whole = ratio.round();
        if (ratio - whole).abs() <= 1e-9 * whole.max(1.0) {
            let n = whole as usize;
            if n == 0 {
                return vec![self.start];
            }
            (0..=n)
                .map(|i| self.start + span * (i as f64 / n as f64))
                .collect()
        } else {
            (0..=ratio.floor() as usize)
                .map(|i| self.start + i as f64 * self.step)
                .collect()
        }
    }
}

/// Comma-separated list of reals; positivity is checked downstream.
#[derive(Debug, Clone, PartialEq)]
pub struct Rates(pub Vec<f64>);

pub fn lambdas(s: &str) -> Result<Rates, String> {
    s.split(',').map(real).collect::<Result<_, _>>().map(Rates)
}

/// Geometric range `lo:hi:count`, `count` points including both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometricRange {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

pub fn geometric(s: &str) -> Result<GeometricRange, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, count] = parts[..] else {
        return Err(format!("expected lo:hi:count, got '{s}'"));
    };
    let r = GeometricRange {
        lo: real(lo)?,
        hi: real(hi)?,
        count: count
            .trim()
            .parse()
            .map_err(|_| format!("count '{count}' is not a positive integer"))?,
    };
    if !(r.lo > 0.0 && r.hi >= r.lo) {
        return Err(format!("need 0 < lo <= hi, got {}:{}", r.lo, r.hi));
    }
    if r.count == 0 || (r.count == 1 && r.hi != r.lo) {
        return Err("count must be at least 2 unless lo = hi".to_string());
    }
    Ok(r)
}

impl GeometricRange {
    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.lo];
        }
        let (a, b) = (self.lo.log10(), self.hi.log10());
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| match i {
                0 => self.lo,
                _ if i == self.count - 1 => self.hi,
                _ => 10f64.powf(a + (b - a) * (i as f64 / last)),
            })
            .collect()
    }
}
