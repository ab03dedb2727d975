use std::collections::{BTreeMap, BTreeSet};

use super::{bootstrap_selected, select_pillars, BootstrapConfig, InstrumentKind, InstrumentQuote};
use crate::curve::{TenorLabel, YieldCurve};
use crate::error::{Error, Result};
use crate::timegrid::Date;

/// Quote sets keyed by the curve they calibrate.
pub type QuoteSets = BTreeMap<TenorLabel, Vec<InstrumentQuote>>;

/// One discounting curve plus any number of forwarding curves.
#[derive(Debug, Clone)]
pub struct CurveSet {
    curves: BTreeMap<TenorLabel, YieldCurve>,
    single_curve: bool,
    /// Quotes dropped by pillar selection, per curve.
    pub dropped: Vec<(TenorLabel, InstrumentQuote)>,
}

impl CurveSet {
    pub fn new(discount: YieldCurve) -> CurveSet {
        let mut curves = BTreeMap::new();
        curves.insert(TenorLabel::Discount, discount.with_label(TenorLabel::Discount));
        CurveSet {
            curves,
            single_curve: false,
            dropped: Vec::new(),
        }
    }

    /// Every tenor forwards on the discounting curve.
    pub fn single_curve(discount: YieldCurve) -> CurveSet {
        let mut set = CurveSet::new(discount);
        set.single_curve = true;
        set
    }

    pub fn is_single_curve(&self) -> bool {
        self.single_curve
    }

    pub fn insert(&mut self, curve: YieldCurve) -> Result<()> {
        if curve.reference_date() != self.reference_date() {
            return Err(Error::InvalidCurve(format!(
                "{} curve reference date {} differs from {}",
                curve.tenor_label(),
                curve.reference_date(),
                self.reference_date()
            )));
        }
        self.curves.insert(curve.tenor_label(), curve);
        Ok(())
    }

    pub fn reference_date(&self) -> Date {
        self.discount().reference_date()
    }

    pub fn discount(&self) -> &YieldCurve {
        &self.curves[&TenorLabel::Discount]
    }

    pub fn get(&self, label: TenorLabel) -> Option<&YieldCurve> {
        self.curves.get(&label)
    }

    /// Curve projecting forwards of the given tenor: its own forwarding
    /// curve when present, otherwise the discounting curve.
    pub fn forwarding(&self, tenor_months: i32) -> &YieldCurve {
        if self.single_curve {
            return self.discount();
        }
        TenorLabel::from_tenor_months(tenor_months)
            .and_then(|l| self.curves.get(&l))
            .unwrap_or_else(|| self.discount())
    }

    pub(crate) fn forwarding_for_bootstrap(&self, tenor_months: i32, building: TenorLabel) -> Option<&YieldCurve> {
        let label = TenorLabel::from_tenor_months(tenor_months);
        if label == Some(building) {
            return None;
        }
        Some(self.forwarding(tenor_months))
    }

    pub fn labels(&self) -> Vec<TenorLabel> {
        self.curves.keys().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &YieldCurve> {
        self.curves.values()
    }
}

fn basis_dependencies(label: TenorLabel, quotes: &[InstrumentQuote], sets: &QuoteSets) -> BTreeSet<TenorLabel> {
    quotes
        .iter()
        .filter(|q| q.kind == InstrumentKind::BasisSwap)
        .filter_map(|q| q.second_tenor.and_then(TenorLabel::from_tenor_months))
        .filter(|l| *l != label && sets.contains_key(l))
        .collect()
}

/// Build order: the discounting curve, then forwarding curves after the
/// companions their basis swaps refer to.
pub fn build_order(sets: &QuoteSets) -> Result<Vec<TenorLabel>> {
    if !sets.contains_key(&TenorLabel::Discount) {
        return Err(Error::MissingCurve("discount quote set".into()));
    }
    let mut order = vec![TenorLabel::Discount];
    let mut pending: BTreeMap<TenorLabel, BTreeSet<TenorLabel>> = sets
        .iter()
        .filter(|(l, _)| **l != TenorLabel::Discount)
        .map(|(l, q)| (*l, basis_dependencies(*l, q, sets)))
        .collect();
    while !pending.is_empty() {
        let ready = pending
            .iter()
            .find(|(_, deps)| deps.iter().all(|d| order.contains(d)))
            .map(|(l, _)| *l);
        match ready {
            Some(l) => {
                pending.remove(&l);
                order.push(l);
            }
            None => {
                return Err(Error::InvalidQuote(format!(
                    "cyclic basis swap dependencies among {:?}",
                    pending.keys().map(|l| l.name()).collect::<Vec<_>>()
                )))
            }
        }
    }
    Ok(order)
}

/// Curves that must be rebuilt when `label` changes (including itself).
pub(crate) fn dependents(label: TenorLabel, sets: &QuoteSets, order: &[TenorLabel]) -> Vec<TenorLabel> {
    let mut hit: BTreeSet<TenorLabel> = BTreeSet::new();
    hit.insert(label);
    for l in order {
        if hit.contains(l) {
            continue;
        }
        let depends = *l != TenorLabel::Discount
            && (label == TenorLabel::Discount
                || basis_dependencies(*l, &sets[l], sets).iter().any(|d| hit.contains(d)));
        if depends {
            hit.insert(*l);
        }
    }
    order.iter().copied().filter(|l| hit.contains(l)).collect()
}

/// Bootstraps every set: discounting curve on itself, forwarding curves
/// against it.
pub fn build_curve_set(sets: &QuoteSets, config: &BootstrapConfig) -> Result<CurveSet> {
    let order = build_order(sets)?;
    rebuild(sets, config, &order, None, &order)
}

/// Rebuilds `targets` (in build order) on top of `base`, warm-starting
/// from the base pillars.
pub(crate) fn rebuild(
    sets: &QuoteSets,
    config: &BootstrapConfig,
    order: &[TenorLabel],
    base: Option<&CurveSet>,
    targets: &[TenorLabel],
) -> Result<CurveSet> {
    let mut set: Option<CurveSet> = None;
    let mut dropped = Vec::new();
    for label in order {
        let built = if targets.contains(label) {
            let selection = select_pillars(&sets[label])?;
            dropped.extend(selection.dropped.iter().map(|q| (*label, q.clone())));
            let warm = base.and_then(|b| b.get(*label));
            match &set {
                None => bootstrap_selected(&selection.selected, *label, None, None, config, warm)?,
                Some(s) => bootstrap_selected(&selection.selected, *label, Some(s.discount()), Some(s), config, warm)?,
            }
        } else {
            base.and_then(|b| b.get(*label))
                .ok_or_else(|| Error::MissingCurve(label.name().into()))?
                .clone()
        };
        match set.as_mut() {
            None => set = Some(CurveSet::new(built)),
            Some(s) => s.insert(built)?,
        }
    }
    let mut set = set.expect("discount curve built first");
    set.dropped = dropped;
    Ok(set)
}
