//! Quanto adjustments of forwarding-curve rates under the discounting
//! measure, from piecewise-constant volatility/correlation structures.

use serde::{Deserialize, Serialize};

use crate::basis::ForwardBasisCurve;
use crate::curve::curve_time;
use crate::error::{Error, Result};
use crate::timegrid::Date;

/// Integral over `[t, t_end]` of a function constant on the segments
/// `(-inf, b0), [b0, b1), ..., [b_last, inf)`.
fn segment_integral(breakpoints: &[f64], value: impl Fn(usize) -> f64, t: f64, t_end: f64) -> Result<f64> {
    if t > t_end {
        return Err(Error::TimeOrder(t, t_end));
    }
    let mut total = 0.0;
    let mut lo = t;
    let mut seg = breakpoints.partition_point(|b| *b <= t);
    while lo < t_end {
        let hi = breakpoints.get(seg).map_or(t_end, |b| b.min(t_end));
        total += value(seg) * (hi - lo);
        lo = hi;
        seg += 1;
    }
    Ok(total)
}

fn check_structure(breakpoints: &[f64], lens: &[(&str, usize)]) -> Result<()> {
    if breakpoints.iter().any(|b| !b.is_finite()) || breakpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidVolSpec("breakpoints must be finite and strictly increasing".into()));
    }
    for (name, len) in lens {
        if *len != breakpoints.len() + 1 {
            return Err(Error::InvalidVolSpec(format!(
                "{name} has {len} values for {} segments",
                breakpoints.len() + 1
            )));
        }
    }
    Ok(())
}

fn check_values(name: &str, values: &[f64], lo: f64, hi: f64) -> Result<()> {
    if let Some(v) = values.iter().find(|v| !(**v >= lo && **v <= hi)) {
        return Err(Error::InvalidVolSpec(format!("{name} value {v} outside [{lo}, {hi}]")));
    }
    Ok(())
}

/// Volatilities of the forwarding-curve forward and of the forward
/// exchange rate, and their correlation; one value per segment.
/// `breakpoints` are segment ends in years from the reference date.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolCorrSpec {
    pub breakpoints: Vec<f64>,
    pub sigma_f: Vec<f64>,
    #[serde(rename = "sigma_X")]
    pub sigma_x: Vec<f64>,
    #[serde(rename = "rho_fX")]
    pub rho_fx: Vec<f64>,
}

impl VolCorrSpec {
    pub fn new(breakpoints: Vec<f64>, sigma_f: Vec<f64>, sigma_x: Vec<f64>, rho_fx: Vec<f64>) -> Result<Self> {
        let spec = VolCorrSpec {
            breakpoints,
            sigma_f,
            sigma_x,
            rho_fx,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn flat(sigma_f: f64, sigma_x: f64, rho_fx: f64) -> Result<Self> {
        Self::new(vec![], vec![sigma_f], vec![sigma_x], vec![rho_fx])
    }

    /// No quanto effect; `sigma_f` still drives option variance.
    pub fn uncorrelated(sigma_f: f64) -> Self {
        VolCorrSpec {
            breakpoints: vec![],
            sigma_f: vec![sigma_f],
            sigma_x: vec![0.0],
            rho_fx: vec![0.0],
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_structure(
            &self.breakpoints,
            &[("sigma_f", self.sigma_f.len()), ("sigma_X", self.sigma_x.len()), ("rho_fX", self.rho_fx.len())],
        )?;
        check_values("sigma_f", &self.sigma_f, 0.0, f64::MAX)?;
        check_values("sigma_X", &self.sigma_x, 0.0, f64::MAX)?;
        check_values("rho_fX", &self.rho_fx, -1.0, 1.0)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let spec: VolCorrSpec = serde_json::from_str(s)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    /// `int_t^T1 mu_f(u) du = -int sigma_f sigma_X rho_fX du`.
    pub fn drift_integral(&self, t: f64, t1: f64) -> Result<f64> {
        let prod = |i: usize| self.sigma_f[i] * self.sigma_x[i] * self.rho_fx[i];
        Ok(-segment_integral(&self.breakpoints, prod, t, t1)?)
    }

    /// `int_t^T1 sigma_f(u)^2 du`.
    pub fn variance(&self, t: f64, t1: f64) -> Result<f64> {
        segment_integral(&self.breakpoints, |i| self.sigma_f[i] * self.sigma_f[i], t, t1)
    }
}

/// Swap-rate analogue: volatilities of the forwarding swap rate and of the
/// swap forward exchange rate, and their correlation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwapVolCorrSpec {
    pub breakpoints: Vec<f64>,
    pub nu_f: Vec<f64>,
    #[serde(rename = "nu_Y")]
    pub nu_y: Vec<f64>,
    #[serde(rename = "rho_fY")]
    pub rho_fy: Vec<f64>,
}

impl SwapVolCorrSpec {
    pub fn new(breakpoints: Vec<f64>, nu_f: Vec<f64>, nu_y: Vec<f64>, rho_fy: Vec<f64>) -> Result<Self> {
        let spec = SwapVolCorrSpec {
            breakpoints,
            nu_f,
            nu_y,
            rho_fy,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn flat(nu_f: f64, nu_y: f64, rho_fy: f64) -> Result<Self> {
        Self::new(vec![], vec![nu_f], vec![nu_y], vec![rho_fy])
    }

    pub fn uncorrelated(nu_f: f64) -> Self {
        SwapVolCorrSpec {
            breakpoints: vec![],
            nu_f: vec![nu_f],
            nu_y: vec![0.0],
            rho_fy: vec![0.0],
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_structure(
            &self.breakpoints,
            &[("nu_f", self.nu_f.len()), ("nu_Y", self.nu_y.len()), ("rho_fY", self.rho_fy.len())],
        )?;
        check_values("nu_f", &self.nu_f, 0.0, f64::MAX)?;
        check_values("nu_Y", &self.nu_y, 0.0, f64::MAX)?;
        check_values("rho_fY", &self.rho_fy, -1.0, 1.0)
    }

    pub fn drift_integral(&self, t: f64, t0: f64) -> Result<f64> {
        let prod = |i: usize| self.nu_f[i] * self.nu_y[i] * self.rho_fy[i];
        Ok(-segment_integral(&self.breakpoints, prod, t, t0)?)
    }

    /// `int_t^T0 nu_f(u)^2 du`.
    pub fn variance(&self, t: f64, t0: f64) -> Result<f64> {
        segment_integral(&self.breakpoints, |i| self.nu_f[i] * self.nu_f[i], t, t0)
    }
}

pub fn drift_integral(spec: &VolCorrSpec, t: f64, t1: f64) -> Result<f64> {
    spec.drift_integral(t, t1)
}

/// Multiplicative adjustment `QA = exp(int mu_f)`.
pub fn quanto_mult(spec: &VolCorrSpec, t: f64, t1: f64) -> Result<f64> {
    Ok(spec.drift_integral(t, t1)?.exp())
}

/// Additive adjustment `QA' = F_f (QA - 1)`.
pub fn quanto_add(spec: &VolCorrSpec, f_f: f64, t: f64, t1: f64) -> Result<f64> {
    Ok(f_f * spec.drift_integral(t, t1)?.exp_m1())
}

pub fn swap_quanto_mult(spec: &SwapVolCorrSpec, t: f64, t0: f64) -> Result<f64> {
    Ok(spec.drift_integral(t, t0)?.exp())
}

pub fn swap_quanto_add(spec: &SwapVolCorrSpec, s_f: f64, t: f64, t0: f64) -> Result<f64> {
    Ok(s_f * spec.drift_integral(t, t0)?.exp_m1())
}

/// Bootstraps a piecewise-constant forward exchange rate volatility from
/// a basis term structure.
///
/// Convention: the quanto-adjusted forwarding rate accrues like the
/// discounting one, `F_f tau_f QA = F_d tau_d`, so the target on each
/// fixing date `T1` is `QA(t0, T1) = 1 / BA(T1, T2)`. Segments run between
/// consecutive fixing dates. `sigma_f` holds one value per segment, or a
/// single flat value.
pub fn implied_sigma_x(basis: &ForwardBasisCurve, reference: Date, sigma_f: &[f64], rho: f64) -> Result<VolCorrSpec> {
    if !(rho.abs() > 0.0 && rho.abs() <= 1.0) {
        return Err(Error::InvalidVolSpec(format!("assumed correlation {rho} must be in (0, 1] in magnitude")));
    }
    let points: Vec<_> = basis.points().iter().filter(|p| p.t1 > reference).collect();
    if points.is_empty() {
        return Err(Error::InvalidVolSpec("no basis points with a fixing after the reference date".into()));
    }
    if sigma_f.len() != 1 && sigma_f.len() != points.len() {
        return Err(Error::InvalidVolSpec(format!(
            "{} sigma_f values for {} segments",
            sigma_f.len(),
            points.len()
        )));
    }
    let mut breakpoints = Vec::with_capacity(points.len());
    let mut sig_f = Vec::with_capacity(points.len());
    let mut sig_x = Vec::with_capacity(points.len());
    let mut prev_time = 0.0;
    let mut prev_integral = 0.0;
    for (k, p) in points.iter().enumerate() {
        let time = curve_time(reference, p.t1);
        if time <= prev_time {
            return Err(Error::InvalidVolSpec(format!("fixing dates not increasing at {}", p.t1)));
        }
        let ba = p.mult.ok_or(Error::DegenerateBasis(p.t1, p.t2))?;
        // -ln QA = ln BA = int sigma_f sigma_X rho
        let integral = ba.ln();
        let sf = if sigma_f.len() == 1 { sigma_f[0] } else { sigma_f[k] };
        if !(sf > 0.0) {
            return Err(Error::ZeroVolatility(k));
        }
        let mut sx = (integral - prev_integral) / (sf * rho * (time - prev_time));
        if sx.abs() < 1e-14 {
            sx = 0.0;
        }
        if sx < 0.0 {
            return Err(Error::InfeasibleSegment { segment: k, value: sx });
        }
        breakpoints.push(time);
        sig_f.push(sf);
        sig_x.push(sx);
        prev_time = time;
        prev_integral = integral;
    }
    breakpoints.pop();
    let n = sig_f.len();
    VolCorrSpec::new(breakpoints, sig_f, sig_x, vec![rho; n])
}

/// Both sides of the multiplicative and additive relations
/// `BA / QA = E[L_d] / E[L_f]` and `BA' - QA' = E[L_d] - E[L_f]`, with
/// `E[L_d] = F_d` and `E[L_f] = F_f QA` under the discounting measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelationGap {
    pub mult_lhs: f64,
    pub mult_rhs: f64,
    pub add_lhs: f64,
    pub add_rhs: f64,
}

impl RelationGap {
    pub fn mult_gap(&self) -> f64 {
        self.mult_lhs - self.mult_rhs
    }

    pub fn add_gap(&self) -> f64 {
        self.add_lhs - self.add_rhs
    }
}

/// Evaluates the quanto/basis relations at given forwards; they hold only
/// when `F_f = F_d`, so the gap is reported rather than assumed zero.
pub fn basis_quanto_relation_gap(f_f: f64, f_d: f64, tau_f: f64, tau_d: f64, qa: f64) -> Result<RelationGap> {
    if f_d == 0.0 || tau_d == 0.0 {
        return Err(Error::Domain("discounting forward and accrual must be nonzero".into()));
    }
    let ba = f_f * tau_f / (f_d * tau_d);
    let ba_add = f_d * (ba - 1.0);
    let qa_add = f_f * (qa - 1.0);
    let (e_d, e_f) = (f_d, f_f * qa);
    Ok(RelationGap {
        mult_lhs: ba / qa,
        mult_rhs: e_d / e_f,
        add_lhs: ba_add - qa_add,
        add_rhs: e_d - e_f,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::BasisPoint;
    use crate::curve::TenorLabel;

    #[test]
    fn spec_examples() {
        let s = VolCorrSpec::flat(0.2, 0.1, 1.0).unwrap();
        assert_eq!(drift_integral(&s, 0.3, 0.3).unwrap(), 0.0);
        assert!((drift_integral(&s, 0.0, 0.5).unwrap() + 0.01).abs() < 1e-16);
        assert!((quanto_mult(&s, 0.0, 0.5).unwrap() - 0.9900498).abs() < 1e-7);
        let neg = VolCorrSpec::flat(0.2, 0.1, -1.0).unwrap();
        assert!((quanto_mult(&neg, 0.0, 0.5).unwrap() - 1.0100502).abs() < 1e-7);
        let add = quanto_add(&s, 0.04, 0.0, 0.5).unwrap();
        assert!((add - 0.04 * ((-0.01f64).exp() - 1.0)).abs() < 1e-17);
        assert!((add * 1e4 + 3.98).abs() < 0.01);
        let big = VolCorrSpec::flat(0.3, 0.2, -1.0).unwrap();
        assert!((quanto_add(&big, 0.04, 0.0, 0.5).unwrap() * 1e4 - 12.18).abs() < 0.01);
        assert!(drift_integral(&s, 0.6, 0.5).is_err());
        for zero in [VolCorrSpec::flat(0.2, 0.0, 1.0).unwrap(), VolCorrSpec::flat(0.2, 0.1, 0.0).unwrap()] {
            assert_eq!(quanto_mult(&zero, 0.0, 3.0).unwrap(), 1.0);
            assert_eq!(quanto_add(&zero, 0.04, 0.0, 3.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn swap_examples() {
        let s = SwapVolCorrSpec::flat(0.15, 0.1, 0.5).unwrap();
        assert!((swap_quanto_mult(&s, 0.0, 2.0).unwrap() - 0.985112).abs() < 1e-6);
        let pw = SwapVolCorrSpec::new(vec![1.0], vec![0.1, 0.2], vec![0.1, 0.1], vec![1.0, 1.0]).unwrap();
        assert!((swap_quanto_mult(&pw, 0.0, 2.0).unwrap() - (-0.03f64).exp()).abs() < 1e-15);
        let zero = SwapVolCorrSpec::flat(0.15, 0.1, 0.0).unwrap();
        assert_eq!(swap_quanto_add(&zero, 0.03, 0.0, 2.0).unwrap(), 0.0);
        assert!(swap_quanto_add(&s, 0.03, 0.0, 2.0).unwrap() < 0.0);
        assert!(swap_quanto_mult(&s, 2.5, 2.0).is_err());
    }

    #[test]
    fn segments_split_at_breakpoints() {
        let s = VolCorrSpec::new(vec![0.5, 1.5], vec![0.2, 0.3, 0.1], vec![0.1, 0.2, 0.3], vec![1.0, -0.5, 0.5]).unwrap();
        let expected = -(0.02 * 0.5 + (-0.03) * 1.0 + 0.015 * 0.5);
        assert!((s.drift_integral(0.0, 2.0).unwrap() - expected).abs() < 1e-16);
        let expected = -(0.02 * 0.25 + (-0.03) * 0.5);
        assert!((s.drift_integral(0.25, 1.0).unwrap() - expected).abs() < 1e-16);
        assert!((s.variance(0.0, 2.0).unwrap() - (0.04 * 0.5 + 0.09 + 0.01 * 0.5)).abs() < 1e-16);
    }

    #[test]
    fn invalid_specs() {
        assert!(VolCorrSpec::flat(-0.1, 0.1, 0.5).is_err());
        assert!(VolCorrSpec::flat(0.1, 0.1, 1.5).is_err());
        assert!(VolCorrSpec::new(vec![1.0, 0.5], vec![0.1; 3], vec![0.1; 3], vec![0.0; 3]).is_err());
        assert!(VolCorrSpec::new(vec![1.0], vec![0.1; 3], vec![0.1; 2], vec![0.0; 2]).is_err());
        assert!(VolCorrSpec::from_json("{\"breakpoints\":[],\"sigma_f\":[0.2],\"sigma_X\":[0.1],\"rho_fX\":[0.3]}").is_ok());
    }

    fn basis_with(points: &[(i32, f64)]) -> (ForwardBasisCurve, Date) {
        let t0 = Date::from_ymd(2009, 2, 18).unwrap();
        let pts = points
            .iter()
            .map(|(days, ba)| BasisPoint {
                date: t0.add_days(*days),
                t1: t0.add_days(*days),
                t2: t0.add_days(*days + 91),
                mult: Some(*ba),
                add: 0.0,
            })
            .collect();
        (ForwardBasisCurve::from_points(TenorLabel::Fwd3M, TenorLabel::Discount, 3, pts), t0)
    }

    #[test]
    fn implied_sigma_x_examples() {
        let (b, t0) = basis_with(&[(0, 1.0), (365, 1.0), (730, 1.0)]);
        let s = implied_sigma_x(&b, t0, &[0.2], 1.0).unwrap();
        assert!(s.sigma_x.iter().all(|v| *v == 0.0));

        let (b, t0) = basis_with(&[(0, 1.02), (365 / 2 + 1, 0.01f64.exp())]);
        // fixing time is 183/365 years; scale target accordingly
        let t = 183.0 / 365.0;
        let (b2, _) = basis_with(&[(183, (0.2 * 0.1 * t as f64).exp())]);
        let s = implied_sigma_x(&b2, t0, &[0.2], 1.0).unwrap();
        assert!((s.sigma_x[0] - 0.1).abs() < 1e-12);
        assert!((quanto_mult(&s, 0.0, t).unwrap() * (0.2 * 0.1 * t).exp() - 1.0).abs() < 1e-14);
        assert!(implied_sigma_x(&b, t0, &[0.2], 1.0).is_ok());

        let (bad, t0) = basis_with(&[(180, 1.02), (360, 1.01)]);
        assert!(matches!(
            implied_sigma_x(&bad, t0, &[0.2], 1.0),
            Err(Error::InfeasibleSegment { segment: 1, .. })
        ));
        assert!(matches!(implied_sigma_x(&bad, t0, &[0.0], 1.0), Err(Error::ZeroVolatility(0))));
        assert!(implied_sigma_x(&bad, t0, &[0.2], 0.0).is_err());
    }

    #[test]
    fn relation_gap_vanishes_only_for_equal_forwards() {
        let g = basis_quanto_relation_gap(0.04, 0.04, 0.5, 0.5, 0.99).unwrap();
        assert!(g.mult_gap().abs() < 1e-15 && g.add_gap().abs() < 1e-15);
        let g = basis_quanto_relation_gap(0.045, 0.04, 0.5, 0.5, 0.99).unwrap();
        assert!(g.mult_gap().abs() > 1e-3 && g.add_gap().abs() > 1e-3);
    }
}
