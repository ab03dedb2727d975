//! Quotes pre-resolved to curve times so that repricing inside the solver
//! loop is a tight loop over discount lookups.

use super::quote::{InstrumentKind, InstrumentQuote};
use super::{QuoteConventions, SpreadLeg};
use crate::curve::{curve_time, DiscountSource};
use crate::error::{Error, Result};
use crate::timegrid::{generate_schedule, Date, ScheduleSpec};

#[derive(Debug, Clone)]
pub(crate) struct Leg {
    /// Schedule times, `n + 1` entries.
    times: Vec<f64>,
    taus: Vec<f64>,
}

impl Leg {
    fn new(reference: Date, start: Date, end: Date, months: i32, q: &InstrumentQuote) -> Result<Leg> {
        let dates = generate_schedule(&ScheduleSpec::new(start, end, months, q.leg_daycount))?;
        let mut taus = Vec::with_capacity(dates.len() - 1);
        for w in dates.windows(2) {
            taus.push(q.leg_daycount.year_fraction(w[0], w[1])?);
        }
        Ok(Leg {
            times: dates.iter().map(|d| curve_time(reference, *d)).collect(),
            taus,
        })
    }

    pub(crate) fn annuity(&self, disc: &dyn DiscountSource) -> f64 {
        self.taus
            .iter()
            .zip(&self.times[1..])
            .map(|(tau, t)| tau * disc.df_at(*t))
            .sum()
    }

    /// Value of the floating leg paying the simple forward of `fwd`.
    pub(crate) fn float_pv(&self, fwd: &dyn DiscountSource, disc: &dyn DiscountSource) -> f64 {
        let mut pv = 0.0;
        let mut p_prev = fwd.df_at(self.times[0]);
        for t in &self.times[1..] {
            let p = fwd.df_at(*t);
            pv += (p_prev / p - 1.0) * disc.df_at(*t);
            p_prev = p;
        }
        pv
    }
}

#[derive(Debug, Clone)]
enum Body {
    Simple { t1: f64, t2: f64, tau: f64 },
    Swap { fixed: Leg, float: Leg },
    Basis { built: Leg, other: Leg, spread_on_built: bool },
}

#[derive(Debug, Clone)]
pub(crate) struct CompiledQuote {
    body: Body,
    /// Quoted value in rate terms (futures net of convexity).
    target: f64,
    convexity: f64,
}

impl CompiledQuote {
    pub(crate) fn new(q: &InstrumentQuote, reference: Date, conv: &QuoteConventions) -> Result<CompiledQuote> {
        q.validate()?;
        if q.start < reference {
            return Err(Error::BeforeReference { date: q.start, reference });
        }
        let convexity = if q.kind == InstrumentKind::Futures { conv.futures_convexity } else { 0.0 };
        let body = match q.kind {
            InstrumentKind::Deposit | InstrumentKind::Fra | InstrumentKind::Futures => {
                let tau = q.leg_daycount.year_fraction(q.start, q.end)?;
                if tau == 0.0 {
                    return Err(Error::DegenerateInterval(q.start, q.end));
                }
                if 1.0 + q.quoted_rate() * tau <= 0.0 {
                    return Err(Error::QuoteCrossing(q.end));
                }
                Body::Simple {
                    t1: curve_time(reference, q.start),
                    t2: curve_time(reference, q.end),
                    tau,
                }
            }
            InstrumentKind::Swap => Body::Swap {
                fixed: Leg::new(reference, q.start, q.end, q.fixed_leg_frequency, q)?,
                float: Leg::new(reference, q.start, q.end, q.underlying_tenor, q)?,
            },
            InstrumentKind::Ois => {
                let leg = Leg::new(reference, q.start, q.end, q.fixed_leg_frequency, q)?;
                Body::Swap { fixed: leg.clone(), float: leg }
            }
            InstrumentKind::BasisSwap => {
                let second = q.second_tenor.expect("validated");
                let built_is_short = q.underlying_tenor <= second;
                Body::Basis {
                    built: Leg::new(reference, q.start, q.end, q.underlying_tenor, q)?,
                    other: Leg::new(reference, q.start, q.end, second, q)?,
                    spread_on_built: match conv.spread_leg {
                        SpreadLeg::Shorter => built_is_short,
                        SpreadLeg::Longer => !built_is_short,
                    },
                }
            }
        };
        Ok(CompiledQuote {
            body,
            target: q.quoted_rate() - convexity,
            convexity,
        })
    }

    /// Model par rate (futures: forward rate, before convexity).
    pub(crate) fn model_rate(
        &self,
        built: &dyn DiscountSource,
        other: Option<&dyn DiscountSource>,
        disc: &dyn DiscountSource,
    ) -> f64 {
        match &self.body {
            Body::Simple { t1, t2, tau } => (built.df_at(*t1) / built.df_at(*t2) - 1.0) / tau,
            Body::Swap { fixed, float } => float.float_pv(built, disc) / fixed.annuity(disc),
            Body::Basis { built: lb, other: lo, spread_on_built } => {
                let other = other.expect("companion curve resolved before pricing");
                let pv_b = lb.float_pv(built, disc);
                let pv_o = lo.float_pv(other, disc);
                if *spread_on_built {
                    (pv_o - pv_b) / lb.annuity(disc)
                } else {
                    (pv_b - pv_o) / lo.annuity(disc)
                }
            }
        }
    }

    /// Model quote minus market quote, in rate terms.
    pub(crate) fn residual(
        &self,
        built: &dyn DiscountSource,
        other: Option<&dyn DiscountSource>,
        disc: &dyn DiscountSource,
    ) -> f64 {
        self.model_rate(built, other, disc) - self.target
    }

    /// Model quote in rate terms including the convexity adjustment.
    pub(crate) fn model_quote_rate(
        &self,
        built: &dyn DiscountSource,
        other: Option<&dyn DiscountSource>,
        disc: &dyn DiscountSource,
    ) -> f64 {
        self.model_rate(built, other, disc) + self.convexity
    }

    /// Value of one unit of the quoted rate: `tau P_d(T2)` for simple
    /// instruments, the fixed annuity for swaps, the spread-leg annuity for
    /// basis swaps.
    pub(crate) fn annuity(&self, disc: &dyn DiscountSource) -> f64 {
        match &self.body {
            Body::Simple { t2, tau, .. } => tau * disc.df_at(*t2),
            Body::Swap { fixed, .. } => fixed.annuity(disc),
            Body::Basis { built, other, spread_on_built } => {
                if *spread_on_built {
                    built.annuity(disc)
                } else {
                    other.annuity(disc)
                }
            }
        }
    }
}
