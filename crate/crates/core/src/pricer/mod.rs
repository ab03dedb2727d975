//! Double-curve pricing of vanilla interest-rate instruments: forwards
//! from the forwarding curve, discounting on the discounting curve, and
//! quanto-adjusted expectations under the discounting measure.

mod normal;
pub mod single_curve;

pub use normal::{norm_cdf, norm_cdf_both, norm_pdf};

use serde::{Deserialize, Serialize};

use crate::curve::YieldCurve;
use crate::error::{Error, Result};
use crate::quanto::{SwapVolCorrSpec, VolCorrSpec};
use crate::timegrid::{Date, DayCount, ScheduleSpec};

/// Year fraction on the curve clock from the reference date.
fn clock(curve: &YieldCurve, d: Date) -> f64 {
    crate::curve::curve_time(curve.reference_date(), d)
}

fn same_reference(disc: &YieldCurve, fwd: &YieldCurve) -> Result<()> {
    if disc.reference_date() != fwd.reference_date() {
        return Err(Error::InvalidCurve("curves have different reference dates".into()));
    }
    Ok(())
}

/// Treatment of the drift in the Black formula for quanto-adjusted rates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BlackConvention {
    /// Adjusted forward with zero residual drift.
    #[default]
    Martingale,
    /// Adjusted forward and the drift integral both enter `d+-`.
    PaperLiteral,
}

/// `omega [F Phi(omega d+) - K Phi(omega d-)]` with
/// `d+- = (ln(F/K) + mu +- var/2) / sqrt(var)`.
pub fn black(f: f64, k: f64, mu: f64, var: f64, omega: i32) -> Result<f64> {
    if !(f > 0.0) || !(k > 0.0) {
        return Err(Error::Domain(format!("lognormal model needs F > 0 and K > 0 (F = {f}, K = {k})")));
    }
    if !(var >= 0.0) || !mu.is_finite() {
        return Err(Error::Domain(format!("invalid variance {var} or drift {mu}")));
    }
    let w = match omega {
        1 => 1.0,
        -1 => -1.0,
        _ => return Err(Error::Domain(format!("omega must be +1 or -1, got {omega}"))),
    };
    if var == 0.0 {
        let x = (f / k).ln() + mu;
        let ind = if w * x > 0.0 {
            1.0
        } else if x == 0.0 {
            0.5
        } else {
            0.0
        };
        if mu == 0.0 {
            return Ok((w * (f - k)).max(0.0));
        }
        return Ok(w * (f - k) * ind);
    }
    let sd = var.sqrt();
    let m = (f / k).ln() + mu;
    let d_plus = (m + 0.5 * var) / sd;
    let d_minus = (m - 0.5 * var) / sd;
    Ok(w * (f * norm_cdf(w * d_plus) - k * norm_cdf(w * d_minus)))
}

/// One accrual period of a FRA or caplet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FraSpec {
    pub t1: Date,
    pub t2: Date,
    pub strike: f64,
    pub notional: f64,
    pub daycount: DayCount,
}

impl FraSpec {
    fn validate(&self, reference: Date) -> Result<()> {
        if self.t1 < reference {
            return Err(Error::BeforeReference { date: self.t1, reference });
        }
        if self.t1 >= self.t2 {
            return Err(Error::DateOrder(self.t1, self.t2));
        }
        if self.notional == 0.0 || !self.notional.is_finite() {
            return Err(Error::Domain("notional must be finite and nonzero".into()));
        }
        Ok(())
    }
}

/// Volatility/correlation inputs for the periods of a multi-period product.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "type", content = "specs")]
pub enum PeriodVolCorr {
    /// No quanto adjustment and no volatility.
    #[default]
    None,
    Uniform(VolCorrSpec),
    PerPeriod(Vec<VolCorrSpec>),
}

impl PeriodVolCorr {
    fn get(&self, i: usize, n: usize) -> Result<Option<&VolCorrSpec>> {
        match self {
            PeriodVolCorr::None => Ok(None),
            PeriodVolCorr::Uniform(s) => Ok(Some(s)),
            PeriodVolCorr::PerPeriod(v) if v.len() == n => Ok(Some(&v[i])),
            PeriodVolCorr::PerPeriod(v) => Err(Error::InvalidVolSpec(format!(
                "{} period specs for {n} periods",
                v.len()
            ))),
        }
    }

    fn qa(&self, i: usize, n: usize, fixing: f64) -> Result<f64> {
        match self.get(i, n)? {
            None => Ok(1.0),
            Some(s) => crate::quanto::quanto_mult(s, 0.0, fixing),
        }
    }
}

/// Discounted floating payment `N P_d(T) tau_f(t0, T) L_f(t0, T)`.
pub fn price_float_zcb(disc: &YieldCurve, fwd: &YieldCurve, t: Date, notional: f64) -> Result<f64> {
    same_reference(disc, fwd)?;
    if t == disc.reference_date() {
        disc.discount(t)?;
        return Ok(0.0);
    }
    Ok(notional * disc.discount(t)? * (1.0 / fwd.discount(t)? - 1.0))
}

/// Accrued forward `tau F_f(t0; T1, T2) = P_f(T1) / P_f(T2) - 1`.
fn accrued_forward(fwd: &YieldCurve, t1: Date, t2: Date) -> Result<f64> {
    Ok(fwd.discount(t1)? / fwd.discount(t2)? - 1.0)
}

/// `N P_d(T2) tau_f [F_f QA - K]`.
pub fn price_fra(disc: &YieldCurve, fwd: &YieldCurve, spec: &FraSpec, volcorr: Option<&VolCorrSpec>) -> Result<f64> {
    same_reference(disc, fwd)?;
    spec.validate(disc.reference_date())?;
    let tau = spec.daycount.year_fraction(spec.t1, spec.t2)?;
    if tau == 0.0 {
        return Err(Error::DegenerateInterval(spec.t1, spec.t2));
    }
    let qa = match volcorr {
        Some(s) => crate::quanto::quanto_mult(s, 0.0, clock(disc, spec.t1))?,
        None => 1.0,
    };
    let fwd_rate = accrued_forward(fwd, spec.t1, spec.t2)? / tau;
    Ok(spec.notional * disc.discount(spec.t2)? * tau * (fwd_rate * qa - spec.strike))
}

/// `A_d(t0, S) = sum_j P_d(S_j) tau(S_{j-1}, S_j)`.
pub fn annuity(disc: &YieldCurve, schedule: &ScheduleSpec) -> Result<f64> {
    let dates = schedule.dates()?;
    annuity_on_dates(disc, &dates, schedule.daycount)
}

fn annuity_on_dates(disc: &YieldCurve, dates: &[Date], dc: DayCount) -> Result<f64> {
    if dates.len() < 2 {
        return Err(Error::EmptySchedule);
    }
    let mut a = 0.0;
    for w in dates.windows(2) {
        a += dc.year_fraction(w[0], w[1])? * disc.discount(w[1])?;
    }
    Ok(a)
}

/// Floating-vs-fixed swap; `float.frequency` is the floating tenor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwapSpec {
    pub float: ScheduleSpec,
    pub fixed: ScheduleSpec,
    pub strike: f64,
    pub notional: f64,
    /// Pays fixed when true.
    pub payer: bool,
}

impl SwapSpec {
    /// Same start and end on both legs.
    pub fn vanilla(
        start: Date,
        end: Date,
        float_tenor: i32,
        float_dc: DayCount,
        fixed_freq: i32,
        fixed_dc: DayCount,
        strike: f64,
        notional: f64,
        payer: bool,
    ) -> SwapSpec {
        SwapSpec {
            float: ScheduleSpec::new(start, end, float_tenor, float_dc),
            fixed: ScheduleSpec::new(start, end, fixed_freq, fixed_dc),
            strike,
            notional,
            payer,
        }
    }

    pub fn start(&self) -> Date {
        self.float.start
    }

    fn validate(&self, reference: Date) -> Result<()> {
        if self.float.start != self.fixed.start {
            return Err(Error::InvalidSchedule("legs must start on the same date".into()));
        }
        if self.float.start < reference {
            return Err(Error::BeforeReference { date: self.float.start, reference });
        }
        if self.notional == 0.0 || !self.notional.is_finite() {
            return Err(Error::Domain("notional must be finite and nonzero".into()));
        }
        Ok(())
    }
}

/// `sum_i P_d(T_i) tau_f F_f,i QA_i` over the floating schedule.
fn float_leg_value(disc: &YieldCurve, fwd: &YieldCurve, float: &ScheduleSpec, volcorr: &PeriodVolCorr) -> Result<f64> {
    let dates = float.dates()?;
    let n = dates.len() - 1;
    let mut pv = 0.0;
    for (i, w) in dates.windows(2).enumerate() {
        let qa = volcorr.qa(i, n, clock(disc, w[0]))?;
        pv += disc.discount(w[1])? * accrued_forward(fwd, w[0], w[1])? * qa;
    }
    Ok(pv)
}

/// Fair swap rate: quanto-adjusted floating leg over the fixed annuity.
pub fn fair_swap_rate(disc: &YieldCurve, fwd: &YieldCurve, spec: &SwapSpec, volcorr: &PeriodVolCorr) -> Result<f64> {
    same_reference(disc, fwd)?;
    spec.validate(disc.reference_date())?;
    let a = annuity(disc, &spec.fixed)?;
    if a == 0.0 {
        return Err(Error::ZeroAnnuity);
    }
    Ok(float_leg_value(disc, fwd, &spec.float, volcorr)? / a)
}

/// Payer value `N (float leg - K A_d)`; receivers take the opposite sign.
pub fn price_swap(disc: &YieldCurve, fwd: &YieldCurve, spec: &SwapSpec, volcorr: &PeriodVolCorr) -> Result<f64> {
    same_reference(disc, fwd)?;
    spec.validate(disc.reference_date())?;
    let float = float_leg_value(disc, fwd, &spec.float, volcorr)?;
    let fixed = spec.strike * annuity(disc, &spec.fixed)?;
    let sign = if spec.payer { 1.0 } else { -1.0 };
    Ok(sign * spec.notional * (float - fixed))
}

/// `N P_d(T2) tau_f Black(F_f QA, K, mu, int sigma_f^2, omega)`.
pub fn price_caplet_floorlet(
    disc: &YieldCurve,
    fwd: &YieldCurve,
    period: &FraSpec,
    omega: i32,
    volcorr: &VolCorrSpec,
    convention: BlackConvention,
) -> Result<f64> {
    same_reference(disc, fwd)?;
    period.validate(disc.reference_date())?;
    let tau = period.daycount.year_fraction(period.t1, period.t2)?;
    if tau == 0.0 {
        return Err(Error::DegenerateInterval(period.t1, period.t2));
    }
    let fixing = clock(disc, period.t1);
    let drift = volcorr.drift_integral(0.0, fixing)?;
    let var = volcorr.variance(0.0, fixing)?;
    let f = accrued_forward(fwd, period.t1, period.t2)? / tau * drift.exp();
    let mu = match convention {
        BlackConvention::Martingale => 0.0,
        BlackConvention::PaperLiteral => drift,
    };
    Ok(period.notional * disc.discount(period.t2)? * tau * black(f, period.strike, mu, var, omega)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapletPeriod {
    pub t1: Date,
    pub t2: Date,
    pub strike: f64,
    pub omega: i32,
}

/// Strip of caplets/floorlets with per-period strikes and flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapFloorSpec {
    pub periods: Vec<CapletPeriod>,
    pub notional: f64,
    pub daycount: DayCount,
    pub volcorr: PeriodVolCorr,
}

impl CapFloorSpec {
    /// Cap (`omega = 1`) or floor (`omega = -1`) on a regular schedule.
    pub fn on_schedule(schedule: &ScheduleSpec, strike: f64, omega: i32, notional: f64, volcorr: PeriodVolCorr) -> Result<Self> {
        let dates = schedule.dates()?;
        Ok(CapFloorSpec {
            periods: dates
                .windows(2)
                .map(|w| CapletPeriod {
                    t1: w[0],
                    t2: w[1],
                    strike,
                    omega,
                })
                .collect(),
            notional,
            daycount: schedule.daycount,
            volcorr,
        })
    }
}

pub fn price_capfloor(disc: &YieldCurve, fwd: &YieldCurve, spec: &CapFloorSpec, convention: BlackConvention) -> Result<f64> {
    if spec.periods.is_empty() {
        return Err(Error::EmptySchedule);
    }
    let n = spec.periods.len();
    let zero = VolCorrSpec::uncorrelated(0.0);
    let mut total = 0.0;
    for (i, p) in spec.periods.iter().enumerate() {
        let vc = spec.volcorr.get(i, n)?.unwrap_or(&zero);
        let period = FraSpec {
            t1: p.t1,
            t2: p.t2,
            strike: p.strike,
            notional: spec.notional,
            daycount: spec.daycount,
        };
        total += price_caplet_floorlet(disc, fwd, &period, p.omega, vc, convention)?;
    }
    Ok(total)
}

/// `N A_d Black(S_f QA, K, mu, int nu_f^2, omega)` with `S_f` the
/// unadjusted dual-curve swap rate and expiry at the swap start.
pub fn price_swaption(
    disc: &YieldCurve,
    fwd: &YieldCurve,
    spec: &SwapSpec,
    strike: f64,
    omega: i32,
    volcorr: &SwapVolCorrSpec,
    convention: BlackConvention,
) -> Result<f64> {
    same_reference(disc, fwd)?;
    spec.validate(disc.reference_date())?;
    let a = annuity(disc, &spec.fixed)?;
    if a == 0.0 {
        return Err(Error::ZeroAnnuity);
    }
    let s = float_leg_value(disc, fwd, &spec.float, &PeriodVolCorr::None)? / a;
    let expiry = clock(disc, spec.start());
    let drift = volcorr.drift_integral(0.0, expiry)?;
    let var = volcorr.variance(0.0, expiry)?;
    let mu = match convention {
        BlackConvention::Martingale => 0.0,
        BlackConvention::PaperLiteral => drift,
    };
    Ok(spec.notional * a * black(s * drift.exp(), strike, mu, var, omega)?)
}
