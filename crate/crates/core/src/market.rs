//! Synthetic EUR-like quote sets: one discounting curve and four Euribor
//! forwarding curves, with tenor basis spreads shaped like early-2009 data.
//!
//! Quotes are priced off smooth "true" curves given by closed-form
//! instantaneous forwards, so a good bootstrap should give back smooth
//! curves and a smooth basis; any saw-tooth is an interpolation artifact.

use crate::bootstrap::{InstrumentQuote, QuoteSets};
use crate::curve::{curve_time, TenorLabel};
use crate::timegrid::{generate_schedule, DayCount, Date, ScheduleSpec};

/// Swap maturities, in years, quoted on the forwarding curves.
pub const SWAP_YEARS: [i32; 15] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 15, 20, 25, 30];

const DECAY: f64 = 0.25;
const BASE: [f64; 4] = [0.030, -0.018, 0.045, 3.0];

fn shape(years: f64) -> f64 {
    let tail = (-29.0 * DECAY).exp();
    ((-DECAY * (years - 1.0)).exp() - tail) / (1.0 - tail)
}

/// 3M vs 6M basis swap spread in bp: 80 at 1Y, decreasing to 2 at 30Y.
pub fn basis_spread_bp(years: f64) -> f64 {
    2.0 + 78.0 * shape(years)
}

/// 1M vs 3M spread in bp (term average).
pub fn spread_1m_3m_bp(years: f64) -> f64 {
    2.0 + 28.0 * shape(years)
}

/// 6M vs 12M spread in bp (term average).
pub fn spread_6m_12m_bp(years: f64) -> f64 {
    2.0 + 38.0 * shape(years)
}

/// The reference date used throughout the examples and tests.
pub fn default_reference() -> Date {
    Date::from_ymd(2009, 2, 18).expect("valid date")
}

/// Closed-form term structures behind the synthetic quotes. `ln P(t)` is
/// minus the integral of a smooth instantaneous forward: a riskless base
/// plus a tenor spread whose running integral is `T s(T)` for the term
/// spreads above.
#[derive(Debug, Clone, Copy)]
pub struct TrueCurves {
    pub reference: Date,
}

impl TrueCurves {
    pub fn new(reference: Date) -> Self {
        TrueCurves { reference }
    }

    fn base_integral(t: f64) -> f64 {
        // level, slope and hump factors
        let (b0, b1, b2, lambda) = (BASE[0], BASE[1], BASE[2], BASE[3]);
        let e = (-t / lambda).exp();
        b0 * t + b1 * lambda * (1.0 - e) + b2 * (lambda * (1.0 - e) - t * e)
    }

    fn spread_integral(label: TenorLabel, t: f64) -> f64 {
        let six = 0.004 * t + 0.013 * 1.5 * (1.0 - (-t / 1.5).exp());
        let three = six - t * basis_spread_bp(t) * 1e-4;
        match label {
            TenorLabel::Fwd6M => six,
            TenorLabel::Fwd3M => three,
            TenorLabel::Fwd1M => three - t * spread_1m_3m_bp(t) * 1e-4,
            TenorLabel::Fwd12M => six + t * spread_6m_12m_bp(t) * 1e-4,
            _ => 0.0,
        }
    }

    /// `ln P(t0, T)` on curve `label` at curve time `t`.
    pub fn log_df(&self, label: TenorLabel, t: f64) -> f64 {
        -(Self::base_integral(t) + Self::spread_integral(label, t))
    }

    pub fn discount(&self, label: TenorLabel, date: Date) -> f64 {
        self.log_df(label, curve_time(self.reference, date)).exp()
    }

    fn growth(&self, label: TenorLabel, t1: Date, t2: Date) -> f64 {
        self.discount(label, t1) / self.discount(label, t2)
    }

    /// Simple forward on `[t1, t2]`.
    pub fn forward(&self, label: TenorLabel, t1: Date, t2: Date, dc: DayCount) -> f64 {
        (self.growth(label, t1, t2) - 1.0) / dc.year_fraction_unchecked(t1, t2)
    }

    fn float_pv(&self, label: TenorLabel, start: Date, end: Date, tenor: i32) -> f64 {
        let dates = generate_schedule(&ScheduleSpec::new(start, end, tenor, DayCount::Act360)).expect("valid schedule");
        dates
            .windows(2)
            .map(|w| (self.growth(label, w[0], w[1]) - 1.0) * self.discount(TenorLabel::Discount, w[1]))
            .sum()
    }

    fn annuity(&self, start: Date, end: Date, freq: i32, dc: DayCount) -> f64 {
        let dates = generate_schedule(&ScheduleSpec::new(start, end, freq, dc)).expect("valid schedule");
        dates
            .windows(2)
            .map(|w| dc.year_fraction_unchecked(w[0], w[1]) * self.discount(TenorLabel::Discount, w[1]))
            .sum()
    }

    /// Par rate of a fixed vs floating swap.
    pub fn swap_rate(&self, label: TenorLabel, start: Date, end: Date, tenor: i32, fixed_freq: i32, dc: DayCount) -> f64 {
        self.float_pv(label, start, end, tenor) / self.annuity(start, end, fixed_freq, dc)
    }

    /// Spread on the `short` leg equating it with the `long` leg.
    pub fn basis_spread(&self, short: (TenorLabel, i32), long: (TenorLabel, i32), start: Date, end: Date, dc: DayCount) -> f64 {
        let pv_s = self.float_pv(short.0, start, end, short.1);
        let pv_l = self.float_pv(long.0, start, end, long.1);
        (pv_l - pv_s) / self.annuity(start, end, short.1, dc)
    }
}

/// Five quote sets: discount, fwd_1M, fwd_3M, fwd_6M and fwd_12M. Deposits,
/// FRAs and futures accrue ACT/360; swap fixed legs are annual 30/360.
///
/// The discounting curve follows the traditional recipe (3M deposit, a
/// futures strip, 6M swaps) and so shares instruments with the 3M and 6M
/// curves. The 3M/6M basis swaps are quoted on the spread shape exactly;
/// everything else is priced off [`TrueCurves`].
pub fn synthetic_eur(t0: Date) -> QuoteSets {
    synthetic_eur_with(t0, DiscountRecipe::Traditional)
}

/// How the synthetic discounting curve is quoted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiscountRecipe {
    /// 3M deposit, 3M futures to one year, 6M swaps beyond.
    Traditional,
    /// Overnight indexed swaps on the riskless base curve.
    Ois,
}

pub fn synthetic_eur_with(t0: Date, recipe: DiscountRecipe) -> QuoteSets {
    let truth = TrueCurves::new(t0);
    let act = DayCount::Act360;
    let thirty = DayCount::Thirty360;
    let m = |k: i32| t0.add_months(k);
    let (f1, f3, f6, f12) = (
        TenorLabel::Fwd1M,
        TenorLabel::Fwd3M,
        TenorLabel::Fwd6M,
        TenorLabel::Fwd12M,
    );
    let depo = |label, months| InstrumentQuote::deposit(t0, m(months), truth.forward(label, t0, m(months), act), months, act);
    let fra = |label, a, b| InstrumentQuote::fra(m(a), m(b), truth.forward(label, m(a), m(b), act), b - a, act);
    let fut = |a: i32| InstrumentQuote::futures(m(a), m(a + 3), truth.forward(f3, m(a), m(a + 3), act), 3, act);
    let swap = |label, tenor, y: i32| {
        InstrumentQuote::swap(t0, m(12 * y), truth.swap_rate(label, t0, m(12 * y), tenor, 12, thirty), tenor, 12, thirty)
    };

    let depo3 = depo(f3, 3);
    let strip: Vec<InstrumentQuote> = (1..=3).map(|k| fut(3 * k)).collect();

    let disc = match recipe {
        DiscountRecipe::Traditional => {
            let mut disc = vec![depo3.clone()];
            disc.extend(strip.iter().cloned());
            disc.extend(SWAP_YEARS.iter().filter(|&&y| y >= 2).map(|&y| swap(f6, 6, y)));
            disc
        }
        DiscountRecipe::Ois => {
            let ois = |months: i32| {
                let freq = months.min(12);
                let rate = truth.swap_rate(TenorLabel::Discount, t0, m(months), freq, freq, act);
                InstrumentQuote::ois(t0, m(months), rate, freq, act)
            };
            [1, 3, 6, 9].into_iter().chain(SWAP_YEARS.iter().map(|y| 12 * y)).map(ois).collect()
        }
    };

    let mut six = vec![depo(f6, 6), fra(f6, 6, 12), fra(f6, 12, 18), fra(f6, 18, 24)];
    six.extend(SWAP_YEARS.iter().filter(|&&y| y >= 3).map(|&y| swap(f6, 6, y)));

    let mut three = vec![depo3, strip[0].clone(), strip[1].clone()];
    three.extend(SWAP_YEARS.iter().map(|&y| {
        InstrumentQuote::basis_swap(t0, m(12 * y), basis_spread_bp(y as f64) * 1e-4, 3, 6, act)
    }));

    let mut one = vec![depo(f1, 1)];
    one.extend(SWAP_YEARS.iter().map(|&y| swap(f1, 1, y)));

    let mut twelve = vec![depo(f12, 12)];
    twelve.extend(SWAP_YEARS.iter().filter(|&&y| y >= 2).map(|&y| {
        let spread = truth.basis_spread((f6, 6), (f12, 12), t0, m(12 * y), act);
        InstrumentQuote::basis_swap(t0, m(12 * y), spread, 12, 6, act)
    }));

    let mut sets = QuoteSets::new();
    sets.insert(TenorLabel::Discount, disc);
    sets.insert(f1, one);
    sets.insert(f3, three);
    sets.insert(f6, six);
    sets.insert(f12, twelve);
    sets
}
