//! Counterparty-risk reading of the basis: a forwarding curve seen as the
//! discount curve of a risky issuer with static recovery and survival.

use serde::{Deserialize, Serialize};

use crate::basis::{BasisPoint, ForwardBasisCurve};
use crate::curve::{curve_time, TenorLabel, YieldCurve};
use crate::error::{Error, Result};
use crate::timegrid::{DayCount, Date};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurvivalPoint {
    pub date: Date,
    pub q: f64,
}

/// Recovery `R` and survival curve `Q(t0, T)`. `Q(t0, t0) = 1` is implied;
/// between nodes `ln Q` is linear in time, beyond the last node the last
/// hazard rate is held flat.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CreditSpec {
    pub recovery: f64,
    pub survival: Vec<SurvivalPoint>,
}

impl CreditSpec {
    pub fn new(recovery: f64, survival: Vec<SurvivalPoint>) -> Result<Self> {
        let spec = CreditSpec { recovery, survival };
        spec.validate()?;
        Ok(spec)
    }

    /// No default risk.
    pub fn riskless() -> Self {
        CreditSpec {
            recovery: 1.0,
            survival: Vec::new(),
        }
    }

    /// Constant hazard rate `lambda`, nodes at the given dates.
    pub fn flat_hazard(reference: Date, recovery: f64, lambda: f64, dates: &[Date]) -> Result<Self> {
        let survival = dates
            .iter()
            .map(|&d| SurvivalPoint {
                date: d,
                q: (-lambda * curve_time(reference, d)).exp(),
            })
            .collect();
        CreditSpec::new(recovery, survival)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.recovery) {
            return Err(Error::InvalidCredit(format!("recovery {} outside [0, 1]", self.recovery)));
        }
        let mut prev_q = 1.0;
        for w in self.survival.windows(2) {
            if w[1].date <= w[0].date {
                return Err(Error::InvalidCredit(format!("survival dates not increasing at {}", w[1].date)));
            }
        }
        for p in &self.survival {
            if !(0.0..=1.0).contains(&p.q) {
                return Err(Error::InvalidCredit(format!("survival {} at {} outside [0, 1]", p.q, p.date)));
            }
            if p.q > prev_q {
                return Err(Error::InvalidCredit(format!("survival increases at {}", p.date)));
            }
            prev_q = p.q;
        }
        Ok(())
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let spec: CreditSpec = serde_json::from_str(s)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("credit spec serializes")
    }

    /// `Q(t0, T)`.
    pub fn survival(&self, reference: Date, date: Date) -> Result<f64> {
        if date < reference {
            return Err(Error::BeforeReference { date, reference });
        }
        let nodes: Vec<(f64, f64)> = std::iter::once((0.0, 1.0))
            .chain(
                self.survival
                    .iter()
                    .filter(|p| p.date > reference)
                    .map(|p| (curve_time(reference, p.date), p.q)),
            )
            .collect();
        let t = curve_time(reference, date);
        if let Some(hit) = nodes.iter().find(|n| n.0 == t) {
            return Ok(hit.1);
        }
        if nodes.len() == 1 {
            return Ok(1.0);
        }
        let i = match nodes.iter().position(|n| n.0 > t) {
            Some(i) => i,
            None => nodes.len() - 1,
        };
        let ((t1, q1), (t2, q2)) = (nodes[i - 1], nodes[i]);
        if q1 == 0.0 || q2 == 0.0 {
            // an absorbed segment: fall back to linear, zero beyond
            return Ok((q1 + (q2 - q1) * (t - t1) / (t2 - t1)).clamp(0.0, 1.0));
        }
        let w = (t - t1) / (t2 - t1);
        Ok((q1.ln() + w * (q2.ln() - q1.ln())).exp())
    }

    /// `gamma(T) = R + (1 - R) Q(t0, T)`.
    pub fn credit_factor(&self, reference: Date, date: Date) -> Result<f64> {
        let q = self.survival(reference, date)?;
        Ok(self.recovery + (1.0 - self.recovery) * q)
    }

    /// Forward credit factor on `[T1, T2]`, `gamma(T2) / gamma(T1)`.
    pub fn forward_credit_factor(&self, reference: Date, t1: Date, t2: Date) -> Result<f64> {
        if t1 >= t2 {
            return Err(Error::DateOrder(t1, t2));
        }
        let g1 = self.credit_factor(reference, t1)?;
        if g1 == 0.0 {
            return Err(Error::InvalidCredit(format!("credit factor vanishes at {t1}")));
        }
        Ok(self.credit_factor(reference, t2)? / g1)
    }
}

/// `P_f(t0, T) = P_d(t0, T) [R + (1 - R) Q(t0, T)]`.
pub fn risky_zcb(disc: &YieldCurve, credit: &CreditSpec, t: Date) -> Result<f64> {
    Ok(disc.discount(t)? * credit.credit_factor(disc.reference_date(), t)?)
}

/// Simple rate on `[T1, T2]` implied by the risky bond,
/// `(1/tau) [1 / (P_d(T1,T2) gamma(T1,T2)) - 1]`.
pub fn risky_xibor(disc: &YieldCurve, credit: &CreditSpec, t1: Date, t2: Date, dc: DayCount) -> Result<f64> {
    let tau = dc.year_fraction(t1, t2)?;
    if tau == 0.0 {
        return Err(Error::DegenerateInterval(t1, t2));
    }
    let gamma = credit.forward_credit_factor(disc.reference_date(), t1, t2)?;
    if gamma == 0.0 {
        return Err(Error::InvalidCredit(format!("credit factor vanishes on [{t1}, {t2}]")));
    }
    Ok((1.0 / (disc.forward_discount(t1, t2)? * gamma) - 1.0) / tau)
}

/// `(BA, BA')` implied by the credit model on `[T1, T2]`:
/// `BA' = (1/tau_d) (P_d1/P_d2) [1/gamma(T1,T2) - 1]` and `BA = 1 + BA'/F_d`.
pub fn credit_implied_basis(disc: &YieldCurve, credit: &CreditSpec, t1: Date, t2: Date) -> Result<(f64, f64)> {
    let tau_d = disc.daycount().year_fraction(t1, t2)?;
    if tau_d == 0.0 {
        return Err(Error::DegenerateInterval(t1, t2));
    }
    let gamma = credit.forward_credit_factor(disc.reference_date(), t1, t2)?;
    if gamma == 0.0 {
        return Err(Error::InvalidCredit(format!("credit factor vanishes on [{t1}, {t2}]")));
    }
    let growth = disc.discount(t1)? / disc.discount(t2)?;
    let add = growth * (1.0 / gamma - 1.0) / tau_d;
    let f_d = (growth - 1.0) / tau_d;
    if f_d == 0.0 {
        return Err(Error::DegenerateBasis(t1, t2));
    }
    Ok((1.0 + add / f_d, add))
}

/// Risky curve with pillars at the union of the discounting pillars and the
/// survival nodes.
pub fn risky_curve(disc: &YieldCurve, credit: &CreditSpec, label: TenorLabel) -> Result<YieldCurve> {
    let reference = disc.reference_date();
    let mut dates: Vec<Date> = disc
        .pillar_dates()
        .iter()
        .copied()
        .chain(credit.survival.iter().map(|p| p.date))
        .filter(|d| *d > reference)
        .collect();
    dates.sort();
    dates.dedup();
    let pillars = dates
        .iter()
        .map(|&d| Ok((d, risky_zcb(disc, credit, d)?)))
        .collect::<Result<Vec<_>>>()?;
    YieldCurve::new(reference, label, disc.daycount(), disc.interpolation(), &pillars)
}

/// Credit-implied basis on consecutive intervals of a grid.
pub fn credit_basis_curve(disc: &YieldCurve, credit: &CreditSpec, grid: &[Date]) -> Result<ForwardBasisCurve> {
    let points = grid
        .windows(2)
        .map(|w| {
            let (mult, add) = credit_implied_basis(disc, credit, w[0], w[1])?;
            Ok(BasisPoint {
                date: w[0],
                t1: w[0],
                t2: w[1],
                mult: Some(mult),
                add,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ForwardBasisCurve::from_points(TenorLabel::Custom, disc.tenor_label(), 0, points))
}
