//! Interpolation of log discount factors against time.
//!
//! Every scheme is interpolating: knot values are returned unchanged.
//! Beyond the last knot the log discount continues linearly with the
//! left-hand slope at that knot (flat instantaneous forward).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InterpScheme {
    /// Monotone cubic Hermite spline on ln P with the Hyman filter.
    #[serde(rename = "LOG_DISCOUNT_MONOTONE_CUBIC")]
    LogDiscountMonotoneCubic,
    /// Linear on continuously compounded zero rates.
    #[serde(rename = "LINEAR_ZERO")]
    LinearZero,
    /// Linear on ln P (piecewise flat forwards).
    #[serde(rename = "LOG_LINEAR_DISCOUNT")]
    LogLinearDiscount,
}

impl InterpScheme {
    pub fn name(self) -> &'static str {
        match self {
            InterpScheme::LogDiscountMonotoneCubic => "LOG_DISCOUNT_MONOTONE_CUBIC",
            InterpScheme::LinearZero => "LINEAR_ZERO",
            InterpScheme::LogLinearDiscount => "LOG_LINEAR_DISCOUNT",
        }
    }

    /// Whether a knot only influences its two adjacent segments.
    pub fn is_local(self) -> bool {
        !matches!(self, InterpScheme::LogDiscountMonotoneCubic)
    }
}

impl fmt::Display for InterpScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InterpScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "cubic" | "LOG_DISCOUNT_MONOTONE_CUBIC" => Ok(InterpScheme::LogDiscountMonotoneCubic),
            "linzero" | "LINEAR_ZERO" => Ok(InterpScheme::LinearZero),
            "loglinear" | "LOG_LINEAR_DISCOUNT" => Ok(InterpScheme::LogLinearDiscount),
            other => Err(Error::InvalidCurve(format!(
                "unknown interpolation '{other}'"
            ))),
        }
    }
}

/// Precomputed interpolant through `(0, 0)` and the pillar knots.
#[derive(Debug, Clone)]
pub(crate) struct LogDiscountInterp {
    scheme: InterpScheme,
    times: Vec<f64>,
    dfs: Vec<f64>,
    logs: Vec<f64>,
    /// Hermite tangents (cubic) or zero rates (linear zero); empty otherwise.
    aux: Vec<f64>,
    end_slope: f64,
}

impl LogDiscountInterp {
    /// `times` and `dfs` exclude the reference point, which is implicit.
    pub(crate) fn new(scheme: InterpScheme, times: &[f64], dfs: &[f64]) -> Self {
        debug_assert_eq!(times.len(), dfs.len());
        debug_assert!(!times.is_empty());
        let mut t = Vec::with_capacity(times.len() + 1);
        let mut p = Vec::with_capacity(times.len() + 1);
        t.push(0.0);
        p.push(1.0);
        t.extend_from_slice(times);
        p.extend_from_slice(dfs);
        let logs: Vec<f64> = p.iter().map(|v| v.ln()).collect();
        let mut interp = LogDiscountInterp {
            scheme,
            times: t,
            dfs: p,
            logs,
            aux: Vec::new(),
            end_slope: 0.0,
        };
        interp.prepare();
        interp
    }

    /// Replaces the value of knot `i` (1-based over pillars) and rebuilds.
    pub(crate) fn set_pillar(&mut self, i: usize, df: f64) {
        self.dfs[i + 1] = df;
        self.logs[i + 1] = df.ln();
        self.prepare();
    }

    pub(crate) fn scheme(&self) -> InterpScheme {
        self.scheme
    }

    pub(crate) fn pillar_df(&self, i: usize) -> f64 {
        self.dfs[i + 1]
    }

    fn prepare(&mut self) {
        let n = self.times.len();
        match self.scheme {
            InterpScheme::LogLinearDiscount => {
                self.aux.clear();
                self.end_slope = (self.logs[n - 1] - self.logs[n - 2])
                    / (self.times[n - 1] - self.times[n - 2]);
            }
            InterpScheme::LinearZero => {
                self.aux.clear();
                self.aux.push(0.0);
                for i in 1..n {
                    self.aux.push(-self.logs[i] / self.times[i]);
                }
                self.aux[0] = self.aux[1];
                let zn = self.aux[n - 1];
                let dz = (self.aux[n - 1] - self.aux[n - 2]) / (self.times[n - 1] - self.times[n - 2]);
                self.end_slope = -(zn + dz * self.times[n - 1]);
            }
            InterpScheme::LogDiscountMonotoneCubic => {
                self.aux = hyman_tangents(&self.times, &self.logs);
                self.end_slope = self.aux[n - 1];
            }
        }
    }

    /// Segment index `i` with `times[i] <= t < times[i+1]`, or `Err(k)` for an exact knot `k`.
    #[inline]
    fn locate(&self, t: f64) -> std::result::Result<usize, usize> {
        match self
            .times
            .binary_search_by(|probe| probe.partial_cmp(&t).unwrap())
        {
            Ok(k) => Err(k),
            Err(pos) => Ok(pos.saturating_sub(1)),
        }
    }

    #[cfg(test)]
    pub(crate) fn log_df(&self, t: f64) -> f64 {
        let n = self.times.len();
        if t >= self.times[n - 1] {
            return self.logs[n - 1] + self.end_slope * (t - self.times[n - 1]);
        }
        match self.locate(t) {
            Err(k) => self.logs[k],
            Ok(i) => self.segment_value(i, t),
        }
    }

    pub(crate) fn df(&self, t: f64) -> f64 {
        let n = self.times.len();
        if t > self.times[n - 1] {
            return (self.logs[n - 1] + self.end_slope * (t - self.times[n - 1])).exp();
        }
        match self.locate(t) {
            Err(k) => self.dfs[k],
            Ok(i) => self.segment_value(i, t).exp(),
        }
    }

    fn segment_value(&self, i: usize, t: f64) -> f64 {
        let (t0, t1) = (self.times[i], self.times[i + 1]);
        let h = t1 - t0;
        match self.scheme {
            InterpScheme::LogLinearDiscount => {
                let w = (t - t0) / h;
                self.logs[i] + w * (self.logs[i + 1] - self.logs[i])
            }
            InterpScheme::LinearZero => {
                let w = (t - t0) / h;
                let z = self.aux[i] + w * (self.aux[i + 1] - self.aux[i]);
                -z * t
            }
            InterpScheme::LogDiscountMonotoneCubic => {
                let s = (t - t0) / h;
                let s2 = s * s;
                let s3 = s2 * s;
                let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
                let h10 = s3 - 2.0 * s2 + s;
                let h01 = -2.0 * s3 + 3.0 * s2;
                let h11 = s3 - s2;
                h00 * self.logs[i]
                    + h10 * h * self.aux[i]
                    + h01 * self.logs[i + 1]
                    + h11 * h * self.aux[i + 1]
            }
        }
    }
}

/// Three-point (parabolic) tangents filtered for monotonicity (Hyman 1983).
fn hyman_tangents(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let d: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
    let mut m = vec![0.0; n];
    if n == 2 {
        m[0] = d[0];
        m[1] = d[0];
        return m;
    }
    m[0] = ((2.0 * h[0] + h[1]) * d[0] - h[0] * d[1]) / (h[0] + h[1]);
    m[n - 1] = ((2.0 * h[n - 2] + h[n - 3]) * d[n - 2] - h[n - 2] * d[n - 3]) / (h[n - 2] + h[n - 3]);
    for i in 1..n - 1 {
        m[i] = (h[i] * d[i - 1] + h[i - 1] * d[i]) / (h[i - 1] + h[i]);
    }

    // endpoint filter
    m[0] = limit_end(m[0], d[0]);
    m[n - 1] = limit_end(m[n - 1], d[n - 2]);
    for i in 1..n - 1 {
        if d[i - 1] * d[i] > 0.0 {
            if m[i] * d[i] <= 0.0 {
                m[i] = 0.0;
            } else {
                let bound = 3.0 * d[i - 1].abs().min(d[i].abs());
                m[i] = m[i].signum() * m[i].abs().min(bound);
            }
        } else {
            m[i] = 0.0;
        }
    }
    m
}

fn limit_end(m: f64, d: f64) -> f64 {
    if m * d <= 0.0 {
        0.0
    } else {
        m.signum() * m.abs().min(3.0 * d.abs())
    }
}
