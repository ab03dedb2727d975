//! Yield curves: discount factors, forward discounts and simple forward rates.

mod interp;
mod json;

pub use interp::InterpScheme;
pub(crate) use interp::LogDiscountInterp;
pub use json::{format_df, CurveFile, PillarRecord};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::timegrid::{Date, DayCount};

/// Internal clock used for interpolation: ACT/365F from the reference date.
pub(crate) fn curve_time(reference: Date, date: Date) -> f64 {
    reference.days_until(date) as f64 / 365.0
}

/// Role of a curve in the multi-curve set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TenorLabel {
    #[serde(rename = "discount")]
    Discount,
    #[serde(rename = "fwd_1M")]
    Fwd1M,
    #[serde(rename = "fwd_3M")]
    Fwd3M,
    #[serde(rename = "fwd_6M")]
    Fwd6M,
    #[serde(rename = "fwd_12M")]
    Fwd12M,
    #[serde(rename = "custom")]
    Custom,
}

impl TenorLabel {
    pub const FORWARDING: [TenorLabel; 4] = [
        TenorLabel::Fwd1M,
        TenorLabel::Fwd3M,
        TenorLabel::Fwd6M,
        TenorLabel::Fwd12M,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TenorLabel::Discount => "discount",
            TenorLabel::Fwd1M => "fwd_1M",
            TenorLabel::Fwd3M => "fwd_3M",
            TenorLabel::Fwd6M => "fwd_6M",
            TenorLabel::Fwd12M => "fwd_12M",
            TenorLabel::Custom => "custom",
        }
    }

    pub fn tenor_months(self) -> Option<i32> {
        match self {
            TenorLabel::Fwd1M => Some(1),
            TenorLabel::Fwd3M => Some(3),
            TenorLabel::Fwd6M => Some(6),
            TenorLabel::Fwd12M => Some(12),
            _ => None,
        }
    }

    pub fn from_tenor_months(months: i32) -> Option<TenorLabel> {
        match months {
            1 => Some(TenorLabel::Fwd1M),
            3 => Some(TenorLabel::Fwd3M),
            6 => Some(TenorLabel::Fwd6M),
            12 => Some(TenorLabel::Fwd12M),
            _ => None,
        }
    }
}

impl fmt::Display for TenorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TenorLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "discount" | "d" => Ok(TenorLabel::Discount),
            "fwd_1M" | "1M" => Ok(TenorLabel::Fwd1M),
            "fwd_3M" | "3M" => Ok(TenorLabel::Fwd3M),
            "fwd_6M" | "6M" => Ok(TenorLabel::Fwd6M),
            "fwd_12M" | "12M" => Ok(TenorLabel::Fwd12M),
            "custom" => Ok(TenorLabel::Custom),
            other => Err(Error::InvalidCurve(format!("unknown curve label '{other}'"))),
        }
    }
}

/// Anything that yields discount factors on the curve clock.
pub(crate) trait DiscountSource {
    fn df_at(&self, t: f64) -> f64;
}

impl DiscountSource for LogDiscountInterp {
    #[inline]
    fn df_at(&self, t: f64) -> f64 {
        self.df(t)
    }
}

/// A term structure of discount factors `T -> P(t0, T)`.
#[derive(Debug, Clone)]
pub struct YieldCurve {
    reference_date: Date,
    tenor_label: TenorLabel,
    daycount: DayCount,
    interpolation: InterpScheme,
    pillar_dates: Vec<Date>,
    interp: LogDiscountInterp,
}

impl YieldCurve {
    pub fn new(
        reference_date: Date,
        tenor_label: TenorLabel,
        daycount: DayCount,
        interpolation: InterpScheme,
        pillars: &[(Date, f64)],
    ) -> Result<Self> {
        if pillars.is_empty() {
            return Err(Error::InvalidCurve("no pillars".into()));
        }
        let mut prev = reference_date;
        for &(date, df) in pillars {
            if date <= prev {
                return Err(Error::InvalidCurve(format!(
                    "pillar {date} is not after {prev}"
                )));
            }
            if !(df.is_finite() && df > 0.0) {
                return Err(Error::InvalidCurve(format!(
                    "discount factor {df} at {date} is not positive"
                )));
            }
            prev = date;
        }
        let times: Vec<f64> = pillars
            .iter()
            .map(|(d, _)| curve_time(reference_date, *d))
            .collect();
        let dfs: Vec<f64> = pillars.iter().map(|(_, p)| *p).collect();
        Ok(YieldCurve {
            reference_date,
            tenor_label,
            daycount,
            interpolation,
            pillar_dates: pillars.iter().map(|(d, _)| *d).collect(),
            interp: LogDiscountInterp::new(interpolation, &times, &dfs),
        })
    }

    pub(crate) fn from_parts(
        reference_date: Date,
        tenor_label: TenorLabel,
        daycount: DayCount,
        pillar_dates: Vec<Date>,
        interp: LogDiscountInterp,
    ) -> Self {
        YieldCurve {
            reference_date,
            tenor_label,
            daycount,
            interpolation: interp.scheme(),
            pillar_dates,
            interp,
        }
    }

    pub fn reference_date(&self) -> Date {
        self.reference_date
    }

    pub fn tenor_label(&self) -> TenorLabel {
        self.tenor_label
    }

    pub fn daycount(&self) -> DayCount {
        self.daycount
    }

    pub fn interpolation(&self) -> InterpScheme {
        self.interpolation
    }

    pub fn pillar_dates(&self) -> &[Date] {
        &self.pillar_dates
    }

    pub fn last_pillar(&self) -> Date {
        *self.pillar_dates.last().unwrap()
    }

    pub fn pillars(&self) -> Vec<(Date, f64)> {
        self.pillar_dates
            .iter()
            .enumerate()
            .map(|(i, d)| (*d, self.interp.pillar_df(i)))
            .collect()
    }

    /// Same pillars under another interpolation scheme.
    pub fn with_interpolation(&self, scheme: InterpScheme) -> YieldCurve {
        YieldCurve::new(
            self.reference_date,
            self.tenor_label,
            self.daycount,
            scheme,
            &self.pillars(),
        )
        .expect("pillars already validated")
    }

    pub fn with_label(mut self, label: TenorLabel) -> YieldCurve {
        self.tenor_label = label;
        self
    }

    pub(crate) fn time(&self, date: Date) -> f64 {
        curve_time(self.reference_date, date)
    }

    fn check_date(&self, date: Date) -> Result<()> {
        if date < self.reference_date {
            return Err(Error::BeforeReference {
                date,
                reference: self.reference_date,
            });
        }
        Ok(())
    }

    /// `P(t0, T)`.
    pub fn discount(&self, date: Date) -> Result<f64> {
        self.check_date(date)?;
        if let Ok(i) = self.pillar_dates.binary_search(&date) {
            return Ok(self.interp.pillar_df(i));
        }
        Ok(self.interp.df(self.time(date)))
    }

    /// `P(t0, T1, T2) = P(t0, T2) / P(t0, T1)`.
    pub fn forward_discount(&self, t1: Date, t2: Date) -> Result<f64> {
        if t1 >= t2 {
            return Err(Error::DateOrder(t1, t2));
        }
        Ok(self.discount(t2)? / self.discount(t1)?)
    }

    /// Simply compounded forward rate `F(t0; T1, T2)`.
    pub fn simple_forward(&self, t1: Date, t2: Date, dc: DayCount) -> Result<f64> {
        if t1 > t2 {
            return Err(Error::DateOrder(t1, t2));
        }
        let tau = dc.year_fraction(t1, t2)?;
        if tau == 0.0 {
            return Err(Error::DegenerateInterval(t1, t2));
        }
        let p1 = self.discount(t1)?;
        let p2 = self.discount(t2)?;
        Ok((p1 - p2) / (tau * p2))
    }

    /// Simply compounded zero rate with `P(t0, T) = 1 / (1 + r tau)`.
    pub fn zero_rate(&self, date: Date, dc: DayCount) -> Result<f64> {
        if date <= self.reference_date {
            return Err(Error::DegenerateInterval(self.reference_date, date));
        }
        let tau = dc.year_fraction(self.reference_date, date)?;
        if tau == 0.0 {
            return Err(Error::DegenerateInterval(self.reference_date, date));
        }
        let p = self.discount(date)?;
        Ok((1.0 / p - 1.0) / tau)
    }

    /// Rolling forwards `F(t0; t, t + tenor)` for `t` from `t0` to the last
    /// pillar minus the tenor, every `stride_days` days.
    pub fn sample_forward_curve(
        &self,
        tenor_months: i32,
        dc: DayCount,
        stride_days: i32,
    ) -> Result<Vec<(Date, f64)>> {
        if tenor_months <= 0 || stride_days <= 0 {
            return Err(Error::InvalidSchedule(
                "tenor and stride must be positive".into(),
            ));
        }
        let last_start = self.last_pillar().add_months(-tenor_months);
        if last_start < self.reference_date {
            return Err(Error::InvalidSchedule(format!(
                "tenor {tenor_months}M exceeds the curve span"
            )));
        }
        let mut out = Vec::new();
        let mut t = self.reference_date;
        while t <= last_start {
            out.push((t, self.simple_forward(t, t.add_months(tenor_months), dc)?));
            t = t.add_days(stride_days);
        }
        Ok(out)
    }

    pub fn to_file(&self) -> CurveFile {
        CurveFile::from_curve(self)
    }

    pub fn to_json(&self) -> String {
        self.to_file().to_json()
    }

    pub fn from_json(s: &str) -> Result<YieldCurve> {
        CurveFile::from_json(s)?.to_curve()
    }
}

impl DiscountSource for YieldCurve {
    #[inline]
    fn df_at(&self, t: f64) -> f64 {
        self.interp.df(t)
    }
}
