//! Portfolios of vanilla instruments and positions in bootstrapping
//! instruments, valued on a curve set.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bootstrap::{market_value, reprice_with, CurveSet, InstrumentKind, InstrumentQuote, LegCurves, QuoteConventions};
use crate::curve::{TenorLabel, YieldCurve};
use crate::error::{Error, Result};
use crate::pricer::{
    fair_swap_rate, price_capfloor, price_fra, price_swap, price_swaption, BlackConvention, CapFloorSpec, FraSpec,
    PeriodVolCorr, SwapSpec,
};
use crate::quanto::{quanto_mult, SwapVolCorrSpec, VolCorrSpec};
use crate::timegrid::{Date, DayCount};

/// One portfolio line. `tenor_months` picks the forwarding curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Instrument {
    /// Floating payment `N tau L(t0, T)` paid at `T`.
    FloatZcb {
        id: String,
        tenor_months: i32,
        maturity: Date,
        notional: f64,
    },
    Fra {
        id: String,
        tenor_months: i32,
        spec: FraSpec,
        #[serde(default)]
        volcorr: Option<VolCorrSpec>,
    },
    Swap {
        id: String,
        spec: SwapSpec,
        #[serde(default)]
        volcorr: PeriodVolCorr,
    },
    CapFloor {
        id: String,
        tenor_months: i32,
        spec: CapFloorSpec,
    },
    /// Option to enter `spec` at its start; `strike` is the option strike.
    Swaption {
        id: String,
        spec: SwapSpec,
        strike: f64,
        omega: i32,
        volcorr: SwapVolCorrSpec,
    },
    /// Receives the model rate and pays the quoted rate of a bootstrapping
    /// instrument, on `notional`; worth zero on the curves it built.
    /// `curve` is the curve whose quote set holds it: the discounting
    /// curve forwards its own instruments.
    Market {
        id: String,
        curve: TenorLabel,
        quote: InstrumentQuote,
        notional: f64,
    },
}

/// Settings shared by every valuation.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PricingContext {
    pub conventions: QuoteConventions,
    pub black: BlackConvention,
}

fn leg_curves<'a>(set: &'a CurveSet, curve: TenorLabel, q: &InstrumentQuote) -> LegCurves<'a> {
    let forwarding = if curve == TenorLabel::Discount || q.kind == InstrumentKind::Ois {
        set.discount()
    } else {
        set.get(curve).unwrap_or_else(|| set.forwarding(q.underlying_tenor))
    };
    LegCurves {
        forwarding,
        discounting: set.discount(),
        second_forwarding: q.second_tenor.map(|t| set.forwarding(t)),
    }
}

impl Instrument {
    pub fn id(&self) -> &str {
        match self {
            Instrument::FloatZcb { id, .. }
            | Instrument::Fra { id, .. }
            | Instrument::Swap { id, .. }
            | Instrument::CapFloor { id, .. }
            | Instrument::Swaption { id, .. }
            | Instrument::Market { id, .. } => id,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Instrument::FloatZcb { .. } => "FLOAT_ZCB",
            Instrument::Fra { .. } => "FRA",
            Instrument::Swap { .. } => "SWAP",
            Instrument::CapFloor { .. } => "CAP_FLOOR",
            Instrument::Swaption { .. } => "SWAPTION",
            Instrument::Market { .. } => "MARKET",
        }
    }

    /// A position in a bootstrapping instrument of `curve` at its quote.
    pub fn market(id: impl Into<String>, curve: TenorLabel, quote: InstrumentQuote, notional: f64) -> Instrument {
        Instrument::Market {
            id: id.into(),
            curve,
            quote,
            notional,
        }
    }

    /// Same instrument with its notional multiplied by `k`.
    pub fn scaled(&self, k: f64) -> Instrument {
        let mut out = self.clone();
        match &mut out {
            Instrument::FloatZcb { notional, .. } | Instrument::Market { notional, .. } => *notional *= k,
            Instrument::Fra { spec, .. } => spec.notional *= k,
            Instrument::Swap { spec, .. } | Instrument::Swaption { spec, .. } => spec.notional *= k,
            Instrument::CapFloor { spec, .. } => spec.notional *= k,
        }
        out
    }

    fn forwarding<'a>(&self, set: &'a CurveSet) -> &'a YieldCurve {
        match self {
            Instrument::FloatZcb { tenor_months, .. }
            | Instrument::Fra { tenor_months, .. }
            | Instrument::CapFloor { tenor_months, .. } => set.forwarding(*tenor_months),
            Instrument::Swap { spec, .. } | Instrument::Swaption { spec, .. } => set.forwarding(spec.float.frequency),
            Instrument::Market { curve, quote, .. } => leg_curves(set, *curve, quote).forwarding,
        }
    }

    /// Present value on `set`.
    pub fn value(&self, set: &CurveSet, ctx: &PricingContext) -> Result<f64> {
        let disc = set.discount();
        let fwd = self.forwarding(set);
        match self {
            Instrument::FloatZcb { maturity, notional, .. } => {
                crate::pricer::price_float_zcb(disc, fwd, *maturity, *notional)
            }
            Instrument::Fra { spec, volcorr, .. } => price_fra(disc, fwd, spec, volcorr.as_ref()),
            Instrument::Swap { spec, volcorr, .. } => price_swap(disc, fwd, spec, volcorr),
            Instrument::CapFloor { spec, .. } => price_capfloor(disc, fwd, spec, ctx.black),
            Instrument::Swaption {
                spec,
                strike,
                omega,
                volcorr,
                ..
            } => price_swaption(disc, fwd, spec, *strike, *omega, volcorr, ctx.black),
            Instrument::Market {
                curve, quote, notional, ..
            } => Ok(notional * market_value(quote, leg_curves(set, *curve, quote), &ctx.conventions)?),
        }
    }

    /// Fair rate for linear products (the quanto-adjusted forward for
    /// FRAs, the swap rate for swaps, the model rate for market
    /// positions), premium for options.
    pub fn fair_rate_or_premium(&self, set: &CurveSet, ctx: &PricingContext) -> Result<f64> {
        let disc = set.discount();
        let fwd = self.forwarding(set);
        match self {
            Instrument::FloatZcb { maturity, .. } => {
                let r = disc.reference_date();
                if *maturity == r {
                    return Ok(0.0);
                }
                fwd.simple_forward(r, *maturity, DayCount::Act365Fixed)
            }
            Instrument::Fra { spec, volcorr, .. } => {
                let f = fwd.simple_forward(spec.t1, spec.t2, spec.daycount)?;
                let qa = match volcorr {
                    Some(s) => quanto_mult(s, 0.0, crate::curve::curve_time(disc.reference_date(), spec.t1))?,
                    None => 1.0,
                };
                Ok(f * qa)
            }
            Instrument::Swap { spec, volcorr, .. } => fair_swap_rate(disc, fwd, spec, volcorr),
            Instrument::CapFloor { .. } | Instrument::Swaption { .. } => self.value(set, ctx),
            Instrument::Market { curve, quote, .. } => {
                let mut q = quote.clone();
                q.quote = reprice_with(quote, leg_curves(set, *curve, quote), &ctx.conventions)?;
                Ok(q.quoted_rate())
            }
        }
    }
}

/// Sum of the instrument values, added in portfolio order.
pub fn portfolio_value(portfolio: &[Instrument], set: &CurveSet, ctx: &PricingContext) -> Result<f64> {
    let mut total = 0.0;
    for inst in portfolio {
        total += inst.value(set, ctx)?;
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PriceRow {
    pub instrument_id: String,
    pub kind: &'static str,
    pub pv: f64,
    pub fair_rate_or_premium: f64,
}

/// Values every instrument (in parallel); rows keep portfolio order.
pub fn price_portfolio(portfolio: &[Instrument], set: &CurveSet, ctx: &PricingContext) -> Result<Vec<PriceRow>> {
    portfolio
        .par_iter()
        .map(|inst| {
            let tag = |e: Error| Error::Domain(format!("{}: {e}", inst.id()));
            Ok(PriceRow {
                instrument_id: inst.id().to_string(),
                kind: inst.kind_name(),
                pv: inst.value(set, ctx).map_err(tag)?,
                fair_rate_or_premium: inst.fair_rate_or_premium(set, ctx).map_err(tag)?,
            })
        })
        .collect()
}

pub fn price_csv(rows: &[PriceRow]) -> String {
    let mut out = String::from("instrument_id,kind,pv,fair_rate_or_premium\n");
    for r in rows {
        out.push_str(&format!("{},{},{:.10},{:.12}\n", r.instrument_id, r.kind, r.pv, r.fair_rate_or_premium));
    }
    out
}

pub fn parse_portfolio(json: &str) -> Result<Vec<Instrument>> {
    let portfolio: Vec<Instrument> = serde_json::from_str(json)?;
    let mut ids = std::collections::BTreeSet::new();
    for inst in &portfolio {
        if !ids.insert(inst.id()) {
            return Err(Error::Serialization(format!("duplicate instrument id '{}'", inst.id())));
        }
    }
    Ok(portfolio)
}

pub fn portfolio_to_json(portfolio: &[Instrument]) -> String {
    serde_json::to_string_pretty(portfolio).expect("portfolio serializes")
}
