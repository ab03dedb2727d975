//! Delta ladders by bumping market quotes and re-bootstrapping, projection
//! of the ladder onto a set of hedging instruments, and hedge ratios.

use rayon::prelude::*;

use crate::bootstrap::{build_order, dependents, rebuild, select_pillars, BootstrapConfig, CurveSet, InstrumentQuote, QuoteSets};
use crate::curve::{curve_time, TenorLabel, YieldCurve};
use crate::error::{Error, Result};
use crate::portfolio::{portfolio_value, Instrument, PricingContext};
use crate::pricer::BlackConvention;
use crate::timegrid::Date;

/// Correctly rounded sum (Shewchuk's partials with a half-even final
/// step), so equal exact totals give equal results whatever the order.
pub fn exact_sum<I: IntoIterator<Item = f64>>(xs: I) -> f64 {
    let mut partials: Vec<f64> = Vec::new();
    for mut x in xs {
        let mut i = 0;
        for j in 0..partials.len() {
            let mut y = partials[j];
            if x.abs() < y.abs() {
                std::mem::swap(&mut x, &mut y);
            }
            let hi = x + y;
            let lo = y - (hi - x);
            if lo != 0.0 {
                partials[i] = lo;
                i += 1;
            }
            x = hi;
        }
        partials.truncate(i);
        partials.push(x);
    }
    let mut n = partials.len();
    if n == 0 {
        return 0.0;
    }
    n -= 1;
    let mut hi = partials[n];
    let mut lo = 0.0;
    while n > 0 {
        let x = hi;
        n -= 1;
        let y = partials[n];
        hi = x + y;
        lo = y - (hi - x);
        if lo != 0.0 {
            break;
        }
    }
    if n > 0 && ((lo < 0.0 && partials[n - 1] < 0.0) || (lo > 0.0 && partials[n - 1] > 0.0)) {
        let y = lo * 2.0;
        let x = hi + y;
        if y == x - hi {
            hi = x;
        }
    }
    hi
}

#[derive(Debug, Clone, PartialEq)]
pub struct RiskConfig {
    pub bootstrap: BootstrapConfig,
    /// Quote shift in rate units for the central differences.
    pub bump: f64,
    pub black: BlackConvention,
    /// Price everything off the discounting curve alone.
    pub single_curve: bool,
}

impl Default for RiskConfig {
    fn default() -> Self {
        RiskConfig {
            bootstrap: BootstrapConfig::default(),
            bump: 1e-4,
            black: BlackConvention::Martingale,
            single_curve: false,
        }
    }
}

impl RiskConfig {
    pub fn pricing(&self) -> PricingContext {
        PricingContext {
            conventions: self.bootstrap.conventions,
            black: self.black,
        }
    }
}

/// Sensitivity to one bootstrapping instrument. `curves` lists every set
/// quoting it, in build order; the first is its home curve.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderEntry {
    pub curves: Vec<TenorLabel>,
    pub quote: InstrumentQuote,
    pub market_rate: f64,
    /// Currency per unit rate; `None` when a bumped bootstrap failed.
    pub delta: Option<f64>,
    pub error: Option<String>,
}

impl LadderEntry {
    pub fn curve(&self) -> TenorLabel {
        self.curves[0]
    }

    pub fn is_shared(&self) -> bool {
        self.curves.len() > 1
    }

    /// Curve names joined with `+` for shared instruments.
    pub fn curve_name(&self) -> String {
        self.curves.iter().map(|c| c.name()).collect::<Vec<_>>().join("+")
    }

    pub fn pillar_date(&self) -> Date {
        self.quote.pillar_date()
    }

    pub fn delta_per_bp(&self) -> Option<f64> {
        self.delta.map(|d| d * 1e-4)
    }

    pub fn id(&self) -> String {
        format!("{}:{}", self.curve_name(), self.quote.label())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeltaLadder {
    pub reference: Date,
    pub bump: f64,
    pub entries: Vec<LadderEntry>,
}

impl DeltaLadder {
    /// Deltas with failed entries counted as zero.
    pub fn deltas(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.delta.unwrap_or(0.0)).collect()
    }

    pub fn total(&self) -> f64 {
        exact_sum(self.deltas())
    }

    pub fn gross(&self) -> f64 {
        exact_sum(self.deltas().into_iter().map(f64::abs))
    }

    pub fn max_abs(&self) -> f64 {
        self.deltas().into_iter().fold(0.0, |m, d| m.max(d.abs()))
    }

    pub fn failures(&self) -> impl Iterator<Item = &LadderEntry> {
        self.entries.iter().filter(|e| e.error.is_some())
    }

    /// `curve,pillar_date,instrument_kind,market_rate,delta_per_bp`; failed
    /// entries leave the delta empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("curve,pillar_date,instrument_kind,market_rate,delta_per_bp\n");
        for e in &self.entries {
            let delta = e.delta_per_bp().map(|d| format!("{d:.10}")).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{:.10},{}\n",
                e.curve_name(),
                e.pillar_date(),
                e.quote.kind,
                e.market_rate,
                delta
            ));
        }
        out
    }
}

type Scenario = std::result::Result<(CurveSet, CurveSet), Error>;

/// Base curves plus the up/down re-bootstrapped curves for every
/// bootstrapping instrument; ladders for any number of portfolios reuse
/// them.
pub struct RiskEngine {
    config: RiskConfig,
    base: CurveSet,
    instruments: Vec<(Vec<TenorLabel>, InstrumentQuote)>,
    scenarios: Vec<Scenario>,
}

/// Selected instruments of every set, each listed once.
fn ladder_instruments(sets: &QuoteSets, order: &[TenorLabel]) -> Result<Vec<(Vec<TenorLabel>, InstrumentQuote)>> {
    let mut out: Vec<(Vec<TenorLabel>, InstrumentQuote)> = Vec::new();
    for label in order {
        for q in select_pillars(&sets[label])?.selected {
            match out.iter_mut().find(|(_, seen)| *seen == q) {
                Some((curves, _)) => curves.push(*label),
                None => out.push((vec![*label], q)),
            }
        }
    }
    Ok(out)
}

fn bump_sets(sets: &QuoteSets, quote: &InstrumentQuote, shift: f64) -> QuoteSets {
    let bumped = quote.bumped(shift);
    sets.iter()
        .map(|(l, qs)| {
            let qs = qs.iter().map(|q| if q == quote { bumped.clone() } else { q.clone() }).collect();
            (*l, qs)
        })
        .collect()
}

fn finish(set: CurveSet, single_curve: bool) -> CurveSet {
    if single_curve {
        CurveSet::single_curve(set.discount().clone())
    } else {
        set
    }
}

impl RiskEngine {
    pub fn new(sets: &QuoteSets, config: RiskConfig) -> Result<RiskEngine> {
        if !(config.bump > 0.0 && config.bump.is_finite()) {
            return Err(Error::Domain(format!("bump must be positive, got {}", config.bump)));
        }
        let sets: QuoteSets = if config.single_curve {
            sets.iter().filter(|(l, _)| **l == TenorLabel::Discount).map(|(l, q)| (*l, q.clone())).collect()
        } else {
            sets.clone()
        };
        let order = build_order(&sets)?;
        let base = rebuild(&sets, &config.bootstrap, &order, None, &order)?;
        let instruments = ladder_instruments(&sets, &order)?;
        let scenarios = instruments
            .par_iter()
            .map(|(curves, q)| {
                let mut targets: Vec<TenorLabel> = Vec::new();
                for c in curves {
                    targets.extend(dependents(*c, &sets, &order));
                }
                let targets: Vec<TenorLabel> = order.iter().copied().filter(|l| targets.contains(l)).collect();
                let build = |shift: f64| {
                    rebuild(&bump_sets(&sets, q, shift), &config.bootstrap, &order, Some(&base), &targets)
                        .map(|s| finish(s, config.single_curve))
                };
                Ok((build(config.bump)?, build(-config.bump)?))
            })
            .collect();
        Ok(RiskEngine {
            base: finish(base, config.single_curve),
            config,
            instruments,
            scenarios,
        })
    }

    pub fn base(&self) -> &CurveSet {
        &self.base
    }

    pub fn config(&self) -> &RiskConfig {
        &self.config
    }

    /// Bootstrapping instruments in ladder order.
    pub fn instruments(&self) -> impl Iterator<Item = (&[TenorLabel], &InstrumentQuote)> {
        self.instruments.iter().map(|(c, q)| (c.as_slice(), q))
    }

    /// `[PV(r_i + b) - PV(r_i - b)] / 2b` for every bootstrapping
    /// instrument `i`.
    pub fn ladder(&self, portfolio: &[Instrument]) -> Result<DeltaLadder> {
        let ctx = self.config.pricing();
        portfolio_value(portfolio, &self.base, &ctx)?;
        let bump = self.config.bump;
        let entries = self
            .instruments
            .par_iter()
            .zip(self.scenarios.par_iter())
            .map(|((curves, q), scenario)| {
                let delta = scenario.as_ref().map_err(Error::clone).and_then(|(up, down)| {
                    let pv_up = portfolio_value(portfolio, up, &ctx)?;
                    let pv_down = portfolio_value(portfolio, down, &ctx)?;
                    Ok((pv_up - pv_down) / (2.0 * bump))
                });
                LadderEntry {
                    curves: curves.clone(),
                    quote: q.clone(),
                    market_rate: q.quoted_rate(),
                    error: delta.as_ref().err().map(|e| e.to_string()),
                    delta: delta.ok(),
                }
            })
            .collect();
        Ok(DeltaLadder {
            reference: self.base.reference_date(),
            bump,
            entries,
        })
    }
}

/// Ladder for one portfolio; see [`RiskEngine`] to reuse the bumped curves.
pub fn delta_ladder(portfolio: &[Instrument], sets: &QuoteSets, config: &RiskConfig) -> Result<DeltaLadder> {
    RiskEngine::new(sets, config.clone())?.ladder(portfolio)
}

/// Sensitivity to a parallel shift of one pillar's zero rate, no
/// re-bootstrapping.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroShiftEntry {
    pub curve: TenorLabel,
    pub pillar_date: Date,
    pub delta: f64,
}

fn shift_pillar(curve: &YieldCurve, k: usize, shift: f64) -> Result<YieldCurve> {
    let mut pillars = curve.pillars();
    let t = curve_time(curve.reference_date(), pillars[k].0);
    pillars[k].1 *= (-shift * t).exp();
    YieldCurve::new(curve.reference_date(), curve.tenor_label(), curve.daycount(), curve.interpolation(), &pillars)
}

/// Diagnostic ladder: each pillar's continuously compounded zero rate is
/// moved by `+-bump` on the built curves.
pub fn zero_shift_ladder(portfolio: &[Instrument], base: &CurveSet, bump: f64, ctx: &PricingContext) -> Result<Vec<ZeroShiftEntry>> {
    if !(bump > 0.0 && bump.is_finite()) {
        return Err(Error::Domain(format!("bump must be positive, got {bump}")));
    }
    let mut jobs = Vec::new();
    for curve in base.iter() {
        for k in 0..curve.pillar_dates().len() {
            jobs.push((curve, k));
        }
    }
    jobs.par_iter()
        .map(|(curve, k)| {
            let value = |shift: f64| -> Result<f64> {
                let mut set = base.clone();
                set.insert(shift_pillar(curve, *k, shift)?)?;
                portfolio_value(portfolio, &set, ctx)
            };
            Ok(ZeroShiftEntry {
                curve: curve.tenor_label(),
                pillar_date: curve.pillar_dates()[*k],
                delta: (value(bump)? - value(-bump)?) / (2.0 * bump),
            })
        })
        .collect()
}

/// A hedging instrument quoted on `curve` (priced as that curve's
/// bootstrapping instruments are).
#[derive(Debug, Clone, PartialEq)]
pub struct Hedge {
    pub id: String,
    pub curve: TenorLabel,
    pub quote: InstrumentQuote,
}

impl Hedge {
    pub fn new(id: impl Into<String>, curve: TenorLabel, quote: InstrumentQuote) -> Hedge {
        Hedge {
            id: id.into(),
            curve,
            quote,
        }
    }

    /// One unit of notional held at the quote.
    pub fn unit_position(&self) -> Instrument {
        Instrument::market(self.id.clone(), self.curve, self.quote.clone(), 1.0)
    }
}

/// The bootstrapping instruments themselves as the hedging set.
pub fn bootstrap_hedges(ladder: &DeltaLadder) -> Vec<Hedge> {
    ladder
        .entries
        .iter()
        .map(|e| Hedge::new(e.id(), e.curve(), e.quote.clone()))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MappingRule {
    /// Split between the two bracketing hedges by time weight.
    #[default]
    Linear,
    /// Everything to the hedge with the nearest maturity.
    Nearest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ProjectionOptions {
    pub rule: MappingRule,
    /// Keep going when a curve has no hedge; the mass is reported.
    pub allow_unmapped: bool,
}

/// Ladder mass assigned to hedging instruments.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    /// `Delta^H_j`, one per hedge.
    pub components: Vec<f64>,
    /// Per ladder entry, the `(hedge, mass)` pieces; they add up to the
    /// entry's delta exactly.
    pub assignments: Vec<Vec<(usize, f64)>>,
    /// Ladder entries with no hedge on their curves.
    pub unmapped: Vec<usize>,
    /// Exact sum of the ladder.
    pub total_ladder: f64,
    /// Exact sum of every assigned piece and the unmapped mass.
    pub total_projected: f64,
    pub unmapped_mass: f64,
}

impl Projection {
    pub fn is_conserved(&self) -> bool {
        self.total_ladder == self.total_projected
    }
}

/// Splits `mass` into `(lower, upper)` with `upper` carrying weight `w`;
/// the larger piece is multiplied and the smaller one subtracted, which
/// is exact, so the pieces add back to `mass` with no rounding.
fn split(mass: f64, w: f64) -> (f64, f64) {
    if w >= 0.5 {
        let upper = w * mass;
        (mass - upper, upper)
    } else {
        let lower = (1.0 - w) * mass;
        (lower, mass - lower)
    }
}

fn assign(entry: &LadderEntry, t: f64, hedges: &[Hedge], times: &[f64], rule: MappingRule) -> Option<Vec<(usize, f64)>> {
    let mass = entry.delta.unwrap_or(0.0);
    if let Some(j) = hedges.iter().position(|h| h.quote == entry.quote) {
        return Some(vec![(j, mass)]);
    }
    let curve = entry.curves.iter().find(|c| hedges.iter().any(|h| h.curve == **c))?;
    let on_curve: Vec<usize> = (0..hedges.len()).filter(|j| hedges[*j].curve == *curve).collect();
    let earliest = |a: usize, b: usize| if times[b] < times[a] { b } else { a };
    match rule {
        MappingRule::Nearest => {
            let j = on_curve
                .iter()
                .copied()
                .reduce(|a, b| if (times[b] - t).abs() < (times[a] - t).abs() { b } else { a })?;
            Some(vec![(j, mass)])
        }
        MappingRule::Linear => {
            let lower = on_curve.iter().copied().filter(|j| times[*j] <= t).reduce(|a, b| if times[b] > times[a] { b } else { a });
            let upper = on_curve.iter().copied().filter(|j| times[*j] >= t).reduce(earliest);
            match (lower, upper) {
                (Some(l), Some(u)) if times[u] > times[l] => {
                    let w = (t - times[l]) / (times[u] - times[l]);
                    let (ml, mu) = split(mass, w);
                    Some(vec![(l, ml), (u, mu)])
                }
                (Some(j), _) | (None, Some(j)) => Some(vec![(j, mass)]),
                (None, None) => None,
            }
        }
    }
}

/// Projects the ladder onto `hedges`: an instrument that is itself a hedge
/// maps to it; otherwise its mass goes to the hedges on its curve by the
/// chosen rule, using times to the pillar dates.
pub fn project_deltas(ladder: &DeltaLadder, hedges: &[Hedge], options: ProjectionOptions) -> Result<Projection> {
    if hedges.is_empty() {
        return Err(Error::Domain("empty hedging set".into()));
    }
    let times: Vec<f64> = hedges.iter().map(|h| curve_time(ladder.reference, h.quote.pillar_date())).collect();
    let mut assignments = Vec::with_capacity(ladder.entries.len());
    let mut unmapped = Vec::new();
    for (i, e) in ladder.entries.iter().enumerate() {
        let t = curve_time(ladder.reference, e.pillar_date());
        match assign(e, t, hedges, &times, options.rule) {
            Some(a) => assignments.push(a),
            None => {
                unmapped.push(i);
                assignments.push(Vec::new());
            }
        }
    }
    let deltas = ladder.deltas();
    let unmapped_mass = exact_sum(unmapped.iter().map(|i| deltas[*i]));
    if !unmapped.is_empty() && !options.allow_unmapped {
        let first = &ladder.entries[unmapped[0]];
        let curve = first.curve_name();
        let mass = exact_sum(unmapped.iter().filter(|i| ladder.entries[**i].curve_name() == curve).map(|i| deltas[*i]));
        return Err(Error::UnmappedDelta { curve, mass });
    }
    let components = (0..hedges.len())
        .map(|j| exact_sum(assignments.iter().flatten().filter(|(k, _)| *k == j).map(|(_, m)| *m)))
        .collect();
    let total_projected = exact_sum(
        assignments
            .iter()
            .flatten()
            .map(|(_, m)| *m)
            .chain(unmapped.iter().map(|i| deltas[*i])),
    );
    Ok(Projection {
        components,
        assignments,
        unmapped,
        total_ladder: exact_sum(deltas),
        total_projected,
        unmapped_mass,
    })
}

/// Own delta `delta^H_j` of each hedge: its unit-position ladder projected
/// back onto the hedging set.
pub fn own_deltas(engine: &RiskEngine, hedges: &[Hedge], options: ProjectionOptions) -> Result<Vec<f64>> {
    let options = ProjectionOptions {
        allow_unmapped: true,
        ..options
    };
    hedges
        .iter()
        .enumerate()
        .map(|(j, h)| {
            let ladder = engine.ladder(&[h.unit_position()])?;
            Ok(project_deltas(&ladder, hedges, options)?.components[j])
        })
        .collect()
}

/// `h_j = Delta^H_j / delta^H_j`.
pub fn hedge_ratios(projected: &Projection, own: &[f64], hedges: &[Hedge]) -> Result<Vec<f64>> {
    if own.len() != hedges.len() || projected.components.len() != hedges.len() {
        return Err(Error::Domain("hedge, own-delta and projection sizes differ".into()));
    }
    hedges
        .iter()
        .zip(own)
        .zip(&projected.components)
        .map(|((h, d), p)| {
            if !(d.abs() > 0.0) || !d.is_finite() {
                return Err(Error::SingularHedge(h.id.clone()));
            }
            Ok(p / d)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct HedgeLine {
    pub id: String,
    pub own_delta: f64,
    pub projected: f64,
    pub ratio: f64,
    /// Projected delta of the hedged portfolio on this hedge.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HedgeReport {
    pub ladder: DeltaLadder,
    pub projection: Projection,
    pub lines: Vec<HedgeLine>,
    /// Ladder of the portfolio minus `h_j` units of every hedge.
    pub residual_ladder: DeltaLadder,
}

impl HedgeReport {
    /// `hedge_instrument,hedge_ratio,residual_delta_per_bp`, then comment
    /// lines with the conservation check and unmapped mass.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("hedge_instrument,hedge_ratio,residual_delta_per_bp\n");
        for l in &self.lines {
            out.push_str(&format!("{},{:.12},{:.10}\n", l.id, l.ratio, l.residual * 1e-4));
        }
        let p = &self.projection;
        out.push_str(&format!(
            "# conservation,sum_delta_B_per_bp={:.10},sum_delta_H_per_bp={:.10},unmapped_per_bp={:.10},exact={}\n",
            p.total_ladder * 1e-4,
            p.total_projected * 1e-4,
            p.unmapped_mass * 1e-4,
            p.is_conserved()
        ));
        out.push_str(&format!(
            "# residual,gross_delta_per_bp={:.10},max_residual_per_bp={:.10}\n",
            self.ladder.gross() * 1e-4,
            self.residual_ladder.max_abs() * 1e-4
        ));
        out
    }
}

/// Ladder, projection, hedge ratios and the hedged residual in one go.
pub fn hedge_portfolio(engine: &RiskEngine, portfolio: &[Instrument], hedges: &[Hedge], options: ProjectionOptions) -> Result<HedgeReport> {
    let ladder = engine.ladder(portfolio)?;
    let projection = project_deltas(&ladder, hedges, options)?;
    let own = own_deltas(engine, hedges, options)?;
    let ratios = hedge_ratios(&projection, &own, hedges)?;
    let mut hedged = portfolio.to_vec();
    hedged.extend(hedges.iter().zip(&ratios).map(|(h, r)| h.unit_position().scaled(-r)));
    let residual_ladder = engine.ladder(&hedged)?;
    let residual = project_deltas(
        &residual_ladder,
        hedges,
        ProjectionOptions {
            allow_unmapped: true,
            ..options
        },
    )?;
    let lines = hedges
        .iter()
        .enumerate()
        .map(|(j, h)| HedgeLine {
            id: h.id.clone(),
            own_delta: own[j],
            projected: projection.components[j],
            ratio: ratios[j],
            residual: residual.components[j],
        })
        .collect();
    Ok(HedgeReport {
        ladder,
        projection,
        lines,
        residual_ladder,
    })
}
