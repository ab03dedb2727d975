//! Classic one-curve formulas, written with telescoped floating legs.
//! Kept independent of the double-curve code as a reference path.

use super::{annuity, black, FraSpec, SwapSpec};
use crate::curve::YieldCurve;
use crate::error::Result;
use crate::timegrid::Date;

/// `N (1 - P(T))`.
pub fn float_zcb(curve: &YieldCurve, t: Date, notional: f64) -> Result<f64> {
    Ok(notional * (1.0 - curve.discount(t)?))
}

/// `N [P(T1) - P(T2) (1 + K tau)]`.
pub fn fra(curve: &YieldCurve, spec: &FraSpec) -> Result<f64> {
    let tau = spec.daycount.year_fraction(spec.t1, spec.t2)?;
    let (p1, p2) = (curve.discount(spec.t1)?, curve.discount(spec.t2)?);
    Ok(spec.notional * (p1 - p2 * (1.0 + spec.strike * tau)))
}

/// `(P(T0) - P(Tn)) / A`.
pub fn par_rate(curve: &YieldCurve, spec: &SwapSpec) -> Result<f64> {
    let float = curve.discount(spec.float.start)? - curve.discount(spec.float.end)?;
    Ok(float / annuity(curve, &spec.fixed)?)
}

pub fn swap(curve: &YieldCurve, spec: &SwapSpec) -> Result<f64> {
    let float = curve.discount(spec.float.start)? - curve.discount(spec.float.end)?;
    let sign = if spec.payer { 1.0 } else { -1.0 };
    Ok(sign * spec.notional * (float - spec.strike * annuity(curve, &spec.fixed)?))
}

pub fn caplet(curve: &YieldCurve, period: &FraSpec, omega: i32, var: f64) -> Result<f64> {
    let tau = period.daycount.year_fraction(period.t1, period.t2)?;
    let (p1, p2) = (curve.discount(period.t1)?, curve.discount(period.t2)?);
    let f = (p1 - p2) / (tau * p2);
    Ok(period.notional * p2 * tau * black(f, period.strike, 0.0, var, omega)?)
}

pub fn swaption(curve: &YieldCurve, spec: &SwapSpec, strike: f64, omega: i32, var: f64) -> Result<f64> {
    let a = annuity(curve, &spec.fixed)?;
    let s = par_rate(curve, spec)?;
    Ok(spec.notional * a * black(s, strike, 0.0, var, omega)?)
}
