//! JSON curve files. Discount factors travel as 15-significant-digit
//! decimal strings so that emit -> parse -> emit is the identity.

use serde::{Deserialize, Serialize};

use super::{InterpScheme, TenorLabel, YieldCurve};
use crate::error::{Error, Result};
use crate::timegrid::{Date, DayCount};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PillarRecord {
    pub date: Date,
    pub df: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveFile {
    pub reference_date: Date,
    pub tenor_label: TenorLabel,
    pub daycount: DayCount,
    pub interpolation: InterpScheme,
    pub pillars: Vec<PillarRecord>,
}

/// Positional decimal with exactly 15 significant digits.
pub fn format_df(v: f64) -> String {
    let sci = format!("{:.14e}", v.abs());
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let sign = if v < 0.0 { "-" } else { "" };
    let body = if exp < 0 {
        format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
    } else {
        let int_len = exp as usize + 1;
        if int_len >= digits.len() {
            format!("{}{}", digits, "0".repeat(int_len - digits.len()))
        } else {
            format!("{}.{}", &digits[..int_len], &digits[int_len..])
        }
    };
    format!("{sign}{body}")
}

impl CurveFile {
    pub fn from_curve(curve: &YieldCurve) -> CurveFile {
        CurveFile {
            reference_date: curve.reference_date(),
            tenor_label: curve.tenor_label(),
            daycount: curve.daycount(),
            interpolation: curve.interpolation(),
            pillars: curve
                .pillars()
                .into_iter()
                .map(|(date, df)| PillarRecord {
                    date,
                    df: format_df(df),
                })
                .collect(),
        }
    }

    pub fn to_curve(&self) -> Result<YieldCurve> {
        let mut pillars = Vec::with_capacity(self.pillars.len());
        for p in &self.pillars {
            let df: f64 = p.df.trim().parse().map_err(|_| {
                Error::Serialization(format!("bad discount factor '{}' at {}", p.df, p.date))
            })?;
            pillars.push((p.date, df));
        }
        YieldCurve::new(
            self.reference_date,
            self.tenor_label,
            self.daycount,
            self.interpolation,
            &pillars,
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("curve file serializes")
    }

    pub fn from_json(s: &str) -> Result<CurveFile> {
        Ok(serde_json::from_str(s)?)
    }
}
