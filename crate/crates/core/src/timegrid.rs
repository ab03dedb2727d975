//! Calendar arithmetic, day counts and payment schedules.
//!
//! Dates are whole calendar days. There are no holiday calendars and no
//! business-day adjustment: every schedule is a raw date grid.

use std::fmt;
use std::str::FromStr;

use chrono::{Datelike, Months, NaiveDate};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

const EPOCH_DAYS_FROM_CE: i32 = 719_163; // 1970-01-01

/// A calendar date, stored as a serial day count from 1970-01-01.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Date(NaiveDate);

impl Date {
    pub fn from_ymd(year: i32, month: u32, day: u32) -> Result<Self> {
        NaiveDate::from_ymd_opt(year, month, day)
            .map(Date)
            .ok_or_else(|| Error::InvalidDate(format!("{year:04}-{month:02}-{day:02}")))
    }

    pub fn from_serial(serial: i32) -> Result<Self> {
        NaiveDate::from_num_days_from_ce_opt(serial + EPOCH_DAYS_FROM_CE)
            .map(Date)
            .ok_or_else(|| Error::InvalidDate(format!("serial {serial}")))
    }

    /// Days since 1970-01-01.
    pub fn serial(self) -> i32 {
        self.0.num_days_from_ce() - EPOCH_DAYS_FROM_CE
    }

    pub fn year(self) -> i32 {
        self.0.year()
    }

    pub fn month(self) -> u32 {
        self.0.month()
    }

    pub fn day(self) -> u32 {
        self.0.day()
    }

    pub fn add_days(self, days: i32) -> Self {
        // serial arithmetic stays inside chrono's range for any realistic grid
        Date::from_serial(self.serial() + days).expect("date overflow")
    }

    /// Adds calendar months, clamping to the end of the target month.
    pub fn add_months(self, months: i32) -> Self {
        let shifted = if months >= 0 {
            self.0.checked_add_months(Months::new(months as u32))
        } else {
            self.0.checked_sub_months(Months::new(months.unsigned_abs()))
        };
        Date(shifted.expect("date overflow"))
    }

    /// Signed number of days from `self` to `other`.
    pub fn days_until(self, other: Date) -> i32 {
        other.serial() - self.serial()
    }
}

impl fmt::Display for Date {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.format("%Y-%m-%d"))
    }
}

impl FromStr for Date {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NaiveDate::parse_from_str(s.trim(), "%Y-%m-%d")
            .map(Date)
            .map_err(|_| Error::InvalidDate(s.to_string()))
    }
}

impl Serialize for Date {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Date {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Day-count convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DayCount {
    #[serde(rename = "ACT_360")]
    Act360,
    #[serde(rename = "ACT_365_FIXED")]
    Act365Fixed,
    /// 30/360 US, bond basis.
    #[serde(rename = "THIRTY_360")]
    Thirty360,
}

impl DayCount {
    pub fn year_fraction(self, d1: Date, d2: Date) -> Result<f64> {
        if d1 > d2 {
            return Err(Error::DateOrder(d1, d2));
        }
        Ok(self.year_fraction_unchecked(d1, d2))
    }

    pub(crate) fn year_fraction_unchecked(self, d1: Date, d2: Date) -> f64 {
        match self {
            DayCount::Act360 => d1.days_until(d2) as f64 / 360.0,
            DayCount::Act365Fixed => d1.days_until(d2) as f64 / 365.0,
            DayCount::Thirty360 => {
                let mut day1 = d1.day() as i32;
                let mut day2 = d2.day() as i32;
                if day1 == 31 {
                    day1 = 30;
                }
                if day2 == 31 && day1 == 30 {
                    day2 = 30;
                }
                let days = 360 * (d2.year() - d1.year())
                    + 30 * (d2.month() as i32 - d1.month() as i32)
                    + (day2 - day1);
                days as f64 / 360.0
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DayCount::Act360 => "ACT_360",
            DayCount::Act365Fixed => "ACT_365_FIXED",
            DayCount::Thirty360 => "THIRTY_360",
        }
    }
}

impl FromStr for DayCount {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "ACT_360" | "ACT/360" => Ok(DayCount::Act360),
            "ACT_365_FIXED" | "ACT/365" | "ACT/365F" => Ok(DayCount::Act365Fixed),
            "THIRTY_360" | "30/360" => Ok(DayCount::Thirty360),
            other => Err(Error::InvalidQuote(format!("unknown day count '{other}'"))),
        }
    }
}

/// Free-function form of [`DayCount::year_fraction`].
pub fn year_fraction(d1: Date, d2: Date, dc: DayCount) -> Result<f64> {
    dc.year_fraction(d1, d2)
}

/// Regular schedule with a short final stub when the frequency does not
/// divide the span.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduleSpec {
    pub start: Date,
    pub end: Date,
    /// Months per period.
    pub frequency: i32,
    pub daycount: DayCount,
}

impl ScheduleSpec {
    pub fn new(start: Date, end: Date, frequency: i32, daycount: DayCount) -> Self {
        ScheduleSpec {
            start,
            end,
            frequency,
            daycount,
        }
    }

    pub fn dates(&self) -> Result<Vec<Date>> {
        generate_schedule(self)
    }
}

pub fn generate_schedule(spec: &ScheduleSpec) -> Result<Vec<Date>> {
    if spec.frequency <= 0 {
        return Err(Error::InvalidSchedule(format!(
            "frequency must be positive, got {}",
            spec.frequency
        )));
    }
    if spec.start >= spec.end {
        return Err(Error::InvalidSchedule(format!(
            "start {} is not before end {}",
            spec.start, spec.end
        )));
    }
    let mut dates = vec![spec.start];
    let mut k = 1;
    loop {
        let next = spec.start.add_months(k * spec.frequency);
        if next >= spec.end {
            break;
        }
        dates.push(next);
        k += 1;
    }
    dates.push(spec.end);
    Ok(dates)
}

/// Year fractions between consecutive dates of a schedule.
pub fn accrual_fractions(dates: &[Date], dc: DayCount) -> Result<Vec<f64>> {
    dates
        .windows(2)
        .map(|w| dc.year_fraction(w[0], w[1]))
        .collect()
}
