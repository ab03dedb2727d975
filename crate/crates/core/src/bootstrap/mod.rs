//! Sequential bootstrapping of discounting and forwarding curves.

mod compiled;
mod curveset;
mod quote;

pub use curveset::{build_curve_set, build_order, CurveSet, QuoteSets};
pub(crate) use curveset::{dependents, rebuild};
pub use quote::{parse_quotes_csv, write_quotes_csv, InstrumentKind, InstrumentQuote, QUOTE_CSV_HEADER};
pub(crate) use compiled::CompiledQuote;

use serde::{Deserialize, Serialize};

use crate::basis::ForwardBasisCurve;
use crate::curve::{curve_time, DiscountSource, InterpScheme, LogDiscountInterp, TenorLabel, YieldCurve};
use crate::error::{Error, Result};
use crate::solver::solve_bracketed;
use crate::timegrid::{Date, DayCount};

const DF_LO: f64 = 1e-8;
const DF_HI: f64 = 2.0;

/// Which leg of a basis swap carries the quoted spread.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SpreadLeg {
    Shorter,
    Longer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PillarRule {
    /// Pillar at the last payment date of each instrument.
    LastPaymentDate,
}

/// Quote interpretation shared by bootstrapping and repricing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuoteConventions {
    /// Added to the model forward to get the futures-implied rate.
    pub futures_convexity: f64,
    pub spread_leg: SpreadLeg,
}

impl Default for QuoteConventions {
    fn default() -> Self {
        QuoteConventions {
            futures_convexity: 0.0,
            spread_leg: SpreadLeg::Shorter,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapConfig {
    pub interpolation: InterpScheme,
    /// Maximum quote residual (rate terms) accepted for every instrument.
    pub tolerance: f64,
    /// Root-finder iterations per pillar, and sweeps for non-local schemes.
    pub max_iterations: usize,
    pub pillar_rule: PillarRule,
    pub conventions: QuoteConventions,
    /// Day count attached to the resulting curves.
    pub curve_daycount: DayCount,
    /// Curve reference date when no discounting curve fixes it; defaults
    /// to the earliest quote start.
    pub reference_date: Option<Date>,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        BootstrapConfig {
            interpolation: InterpScheme::LogDiscountMonotoneCubic,
            tolerance: 1e-12,
            max_iterations: 100,
            pillar_rule: PillarRule::LastPaymentDate,
            conventions: QuoteConventions::default(),
            curve_daycount: DayCount::Act360,
            reference_date: None,
        }
    }
}

impl BootstrapConfig {
    pub fn with_interpolation(mut self, scheme: InterpScheme) -> Self {
        self.interpolation = scheme;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidQuote(format!("tolerance {} must be positive", self.tolerance)));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidQuote("max_iterations must be positive".into()));
        }
        Ok(())
    }
}

/// Result of pillar selection: one quote per pillar date.
#[derive(Debug, Clone, PartialEq)]
pub struct PillarSelection {
    pub selected: Vec<InstrumentQuote>,
    /// Quotes overridden by a more liquid kind on the same date.
    pub dropped: Vec<InstrumentQuote>,
}

/// Sorts by end date and resolves pillar collisions by liquidity rank.
pub fn select_pillars(quotes: &[InstrumentQuote]) -> Result<PillarSelection> {
    let mut sorted: Vec<InstrumentQuote> = quotes.to_vec();
    for q in &sorted {
        q.validate()?;
    }
    sorted.sort_by(|a, b| a.end.cmp(&b.end));
    let mut selected: Vec<InstrumentQuote> = Vec::with_capacity(sorted.len());
    let mut dropped = Vec::new();
    for q in sorted {
        match selected.last() {
            Some(prev) if prev.end == q.end => {
                let (pa, pb) = (prev.kind.precedence(), q.kind.precedence());
                if pa == pb {
                    return Err(Error::DuplicatePillar(q.end));
                }
                if pb > pa {
                    dropped.push(selected.pop().unwrap());
                    selected.push(q);
                } else {
                    dropped.push(q);
                }
            }
            _ => selected.push(q),
        }
    }
    if selected.is_empty() {
        return Err(Error::InvalidCurve("no quotes to bootstrap".into()));
    }
    Ok(PillarSelection { selected, dropped })
}

/// Curves an instrument's legs are priced on.
#[derive(Clone, Copy)]
pub struct LegCurves<'a> {
    /// Forwards the leg with the quote's underlying tenor.
    pub forwarding: &'a YieldCurve,
    pub discounting: &'a YieldCurve,
    /// Forwards the second leg of a basis swap.
    pub second_forwarding: Option<&'a YieldCurve>,
}

fn check_span(curve: &YieldCurve, last: Date) -> Result<()> {
    if last > curve.last_pillar() {
        return Err(Error::InvalidCurve(format!(
            "{} curve ends {} before instrument end {last}",
            curve.tenor_label(),
            curve.last_pillar()
        )));
    }
    Ok(())
}

/// Model-implied par quote (in quote units) of `q`.
pub fn reprice_with(q: &InstrumentQuote, curves: LegCurves<'_>, conv: &QuoteConventions) -> Result<f64> {
    let reference = curves.discounting.reference_date();
    if curves.forwarding.reference_date() != reference {
        return Err(Error::InvalidCurve("curves have different reference dates".into()));
    }
    let compiled = CompiledQuote::new(q, reference, conv)?;
    check_span(curves.forwarding, q.end)?;
    check_span(curves.discounting, q.end)?;
    let second = match q.kind {
        InstrumentKind::BasisSwap => {
            let c = curves.second_forwarding.ok_or_else(|| {
                Error::MissingCurve(format!("fwd_{}M for {}", q.second_tenor.unwrap_or(0), q.label()))
            })?;
            check_span(c, q.end)?;
            Some(c as &dyn DiscountSource)
        }
        _ => None,
    };
    let rate = compiled.model_quote_rate(curves.forwarding, second, curves.discounting);
    Ok(q.rate_to_quote(rate))
}

/// Value per unit notional of a position entered at the quote: receives
/// the model rate, pays the quoted one, `(model - quote) * annuity`.
pub fn market_value(q: &InstrumentQuote, curves: LegCurves<'_>, conv: &QuoteConventions) -> Result<f64> {
    let reference = curves.discounting.reference_date();
    if curves.forwarding.reference_date() != reference {
        return Err(Error::InvalidCurve("curves have different reference dates".into()));
    }
    let compiled = CompiledQuote::new(q, reference, conv)?;
    check_span(curves.forwarding, q.end)?;
    check_span(curves.discounting, q.end)?;
    let second = match q.kind {
        InstrumentKind::BasisSwap => {
            let c = curves.second_forwarding.ok_or_else(|| {
                Error::MissingCurve(format!("fwd_{}M for {}", q.second_tenor.unwrap_or(0), q.label()))
            })?;
            check_span(c, q.end)?;
            Some(c as &dyn DiscountSource)
        }
        _ => None,
    };
    let residual = compiled.residual(curves.forwarding, second, curves.discounting);
    Ok(residual * compiled.annuity(curves.discounting))
}

/// Par quote with every leg forwarded on `forwarding` and discounted on
/// `discounting`; basis swaps therefore price at zero spread.
pub fn reprice(q: &InstrumentQuote, forwarding: &YieldCurve, discounting: &YieldCurve) -> Result<f64> {
    reprice_with(
        q,
        LegCurves {
            forwarding,
            discounting,
            second_forwarding: Some(forwarding),
        },
        &QuoteConventions::default(),
    )
}

fn infer_label(quotes: &[InstrumentQuote], discount: Option<&YieldCurve>) -> TenorLabel {
    if discount.is_none() {
        return TenorLabel::Discount;
    }
    quotes
        .iter()
        .find(|q| q.kind != InstrumentKind::Ois)
        .and_then(|q| TenorLabel::from_tenor_months(q.underlying_tenor))
        .unwrap_or(TenorLabel::Custom)
}

/// Bootstraps one curve. Without `discount_curve` the curve discounts on
/// itself; otherwise it is a forwarding curve priced against it.
pub fn bootstrap_curve(
    quotes: &[InstrumentQuote],
    discount_curve: Option<&YieldCurve>,
    config: &BootstrapConfig,
) -> Result<YieldCurve> {
    let label = infer_label(quotes, discount_curve);
    bootstrap_curve_with(quotes, label, discount_curve, None, config)
}

/// Full form: explicit label and companion curves for basis swaps.
pub fn bootstrap_curve_with(
    quotes: &[InstrumentQuote],
    label: TenorLabel,
    discount_curve: Option<&YieldCurve>,
    companions: Option<&CurveSet>,
    config: &BootstrapConfig,
) -> Result<YieldCurve> {
    let selection = select_pillars(quotes)?;
    bootstrap_selected(&selection.selected, label, discount_curve, companions, config, None)
}

pub(crate) fn bootstrap_selected(
    quotes: &[InstrumentQuote],
    label: TenorLabel,
    discount_curve: Option<&YieldCurve>,
    companions: Option<&CurveSet>,
    config: &BootstrapConfig,
    warm_start: Option<&YieldCurve>,
) -> Result<YieldCurve> {
    config.validate()?;
    let reference = match (discount_curve, config.reference_date) {
        (Some(d), _) => d.reference_date(),
        (None, Some(r)) => r,
        (None, None) => quotes.iter().map(|q| q.start).min().expect("non-empty selection"),
    };
    let compiled: Vec<CompiledQuote> = quotes
        .iter()
        .map(|q| CompiledQuote::new(q, reference, &config.conventions))
        .collect::<Result<_>>()?;
    let mut others: Vec<Option<&YieldCurve>> = Vec::with_capacity(quotes.len());
    for q in quotes {
        others.push(match q.kind {
            InstrumentKind::BasisSwap => {
                let tenor = q.second_tenor.expect("validated");
                let c = companions
                    .and_then(|set| set.forwarding_for_bootstrap(tenor, label))
                    .ok_or_else(|| Error::MissingCurve(format!("fwd_{tenor}M needed by {}", q.label())))?;
                if c.reference_date() != reference {
                    return Err(Error::InvalidCurve("companion curve has a different reference date".into()));
                }
                Some(c)
            }
            _ => None,
        });
    }
    let dates: Vec<Date> = quotes.iter().map(|q| q.pillar_date()).collect();
    for (q, d) in quotes.iter().zip(&dates) {
        if *d <= reference {
            return Err(Error::InvalidQuote(format!("{} ends on or before the reference date", q.label())));
        }
    }
    let times: Vec<f64> = dates.iter().map(|d| curve_time(reference, *d)).collect();
    let disc: Option<&dyn DiscountSource> = discount_curve.map(|c| c as &dyn DiscountSource);
    let problem = Problem {
        compiled: &compiled,
        others: &others,
        disc,
        times: &times,
        dates: &dates,
        config,
    };
    let interp = match warm_start {
        Some(base) if base.pillar_dates() == dates.as_slice() => {
            let dfs: Vec<f64> = base.pillars().iter().map(|p| p.1).collect();
            problem.sweep_until_converged(LogDiscountInterp::new(config.interpolation, &times, &dfs))?
        }
        _ => problem.solve()?,
    };
    Ok(YieldCurve::from_parts(reference, label, config.curve_daycount, dates, interp))
}

struct Problem<'a> {
    compiled: &'a [CompiledQuote],
    others: &'a [Option<&'a YieldCurve>],
    disc: Option<&'a dyn DiscountSource>,
    times: &'a [f64],
    dates: &'a [Date],
    config: &'a BootstrapConfig,
}

impl<'a> Problem<'a> {
    fn residual(&self, i: usize, interp: &LogDiscountInterp) -> f64 {
        let other = self.others[i].map(|c| c as &dyn DiscountSource);
        let disc = self.disc.unwrap_or(interp);
        self.compiled[i].residual(interp, other, disc)
    }

    fn ftol(&self) -> f64 {
        1e-3 * self.config.tolerance
    }

    fn unsolvable(&self, i: usize, reason: String) -> Error {
        Error::UnsolvablePillar {
            date: self.dates[i],
            reason,
        }
    }

    /// Forward sweep over growing prefixes, then refinement sweeps.
    fn solve(&self) -> Result<LogDiscountInterp> {
        let scheme = self.config.interpolation;
        let n = self.times.len();
        let mut dfs: Vec<f64> = Vec::with_capacity(n);
        for i in 0..n {
            let guess = if i == 0 {
                (-0.02 * self.times[0]).exp()
            } else {
                LogDiscountInterp::new(scheme, &self.times[..i], &dfs).df(self.times[i])
            }
            .clamp(DF_LO, DF_HI);
            dfs.push(guess);
            let mut interp = LogDiscountInterp::new(scheme, &self.times[..=i], &dfs);
            let x = solve_bracketed(
                |x| {
                    interp.set_pillar(i, x);
                    self.residual(i, &interp)
                },
                guess,
                DF_LO,
                DF_HI,
                self.ftol(),
                self.config.max_iterations,
            )
            .map_err(|e| self.unsolvable(i, e.to_string()))?;
            dfs[i] = x;
        }
        let interp = LogDiscountInterp::new(scheme, self.times, &dfs);
        if scheme.is_local() {
            self.check(&interp)?;
            Ok(interp)
        } else {
            self.sweep_until_converged(interp)
        }
    }

    fn worst(&self, interp: &LogDiscountInterp) -> (usize, f64) {
        (0..self.times.len())
            .map(|i| (i, self.residual(i, interp).abs()))
            .fold((0, 0.0), |acc, x| if x.1 > acc.1 || x.1.is_nan() { x } else { acc })
    }

    fn check(&self, interp: &LogDiscountInterp) -> Result<()> {
        let (i, r) = self.worst(interp);
        if r.is_nan() || r > self.config.tolerance {
            return Err(self.unsolvable(i, format!("residual {r:e} above tolerance")));
        }
        Ok(())
    }

    /// Re-solves each pillar on the full curve until every quote reprices;
    /// needed when a knot moves neighbouring segments.
    fn sweep_until_converged(&self, mut interp: LogDiscountInterp) -> Result<LogDiscountInterp> {
        for _ in 0..self.config.max_iterations {
            let (_, r) = self.worst(&interp);
            if r <= self.config.tolerance {
                return Ok(interp);
            }
            for i in 0..self.times.len() {
                if self.residual(i, &interp).abs() <= self.ftol() {
                    continue;
                }
                let guess = interp.pillar_df(i);
                let x = solve_bracketed(
                    |x| {
                        interp.set_pillar(i, x);
                        self.residual(i, &interp)
                    },
                    guess,
                    DF_LO,
                    DF_HI,
                    self.ftol(),
                    self.config.max_iterations,
                )
                .map_err(|e| self.unsolvable(i, e.to_string()))?;
                interp.set_pillar(i, x);
            }
        }
        self.check(&interp)?;
        Ok(interp)
    }
}

/// Direction of [`curve_from_basis`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BasisDirection {
    /// `base` is the forwarding curve; rebuild the discounting curve.
    DeriveDiscount,
    /// `base` is the discounting curve; rebuild the forwarding curve.
    DeriveForwarding,
}

/// Rebuilds a curve pillar by pillar from its companion and a
/// multiplicative basis sampled on consecutive pillar intervals
/// `[t0, T1], [T1, T2], ...`.
pub fn curve_from_basis(
    base: &YieldCurve,
    basis: &ForwardBasisCurve,
    direction: BasisDirection,
) -> Result<YieldCurve> {
    let reference = base.reference_date();
    let points = basis.points();
    if points.is_empty() {
        return Err(Error::GridMismatch("empty basis".into()));
    }
    let mut prev_date = reference;
    let mut prev_base = 1.0;
    let mut prev_out = 1.0;
    let mut pillars = Vec::with_capacity(points.len());
    for p in points {
        if p.t1 != prev_date {
            return Err(Error::GridMismatch(format!(
                "interval starting {} does not follow {prev_date}",
                p.t1
            )));
        }
        if p.t2 > base.last_pillar() {
            return Err(Error::GridMismatch(format!("{} beyond the base curve", p.t2)));
        }
        let ba = p.mult.ok_or(Error::ZeroDenominator(p.t2))?;
        let b = base.discount(p.t2)?;
        let (num, den) = match direction {
            BasisDirection::DeriveDiscount => (b * ba, prev_base - b + b * ba),
            BasisDirection::DeriveForwarding => (b, b + (prev_base - b) * ba),
        };
        if den == 0.0 || !den.is_finite() {
            return Err(Error::ZeroDenominator(p.t2));
        }
        let out = num / den * prev_out;
        pillars.push((p.t2, out));
        prev_date = p.t2;
        prev_base = b;
        prev_out = out;
    }
    let label = match direction {
        BasisDirection::DeriveDiscount => basis.disc_label,
        BasisDirection::DeriveForwarding => basis.fwd_label,
    };
    YieldCurve::new(reference, label, base.daycount(), base.interpolation(), &pillars)
}
