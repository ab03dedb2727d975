//! Forward basis between a forwarding and a discounting curve, and the
//! forward exchange rates of the two-currency analogy.

use serde::{Deserialize, Serialize};

use crate::curve::{TenorLabel, YieldCurve};
use crate::error::{Error, Result};
use crate::pricer::annuity;
use crate::timegrid::{Date, ScheduleSpec};

/// `BA = (P_d2 / P_f2) (P_f1 - P_f2) / (P_d1 - P_d2)`.
pub fn multiplicative_basis(fwd: &YieldCurve, disc: &YieldCurve, t1: Date, t2: Date) -> Result<f64> {
    if t1 >= t2 {
        return Err(Error::DateOrder(t1, t2));
    }
    let (pf1, pf2) = (fwd.discount(t1)?, fwd.discount(t2)?);
    let (pd1, pd2) = (disc.discount(t1)?, disc.discount(t2)?);
    let den = pd1 - pd2;
    if den == 0.0 {
        return Err(Error::DegenerateBasis(t1, t2));
    }
    Ok(pd2 / pf2 * (pf1 - pf2) / den)
}

/// Same quantity as a ratio of accrued forwards `F_f tau_f / (F_d tau_d)`,
/// each with its own curve day count.
pub fn multiplicative_basis_from_forwards(fwd: &YieldCurve, disc: &YieldCurve, t1: Date, t2: Date) -> Result<f64> {
    let tau_f = fwd.daycount().year_fraction(t1, t2)?;
    let tau_d = disc.daycount().year_fraction(t1, t2)?;
    let ff = fwd.simple_forward(t1, t2, fwd.daycount())?;
    let fd = disc.simple_forward(t1, t2, disc.daycount())?;
    if fd == 0.0 {
        return Err(Error::DegenerateBasis(t1, t2));
    }
    Ok(ff * tau_f / (fd * tau_d))
}

/// `BA' = (P_f1 / P_f2 - P_d1 / P_d2) / tau_d`, with `tau_d` on the
/// discounting curve's day count.
pub fn additive_basis(fwd: &YieldCurve, disc: &YieldCurve, t1: Date, t2: Date) -> Result<f64> {
    if t1 >= t2 {
        return Err(Error::DateOrder(t1, t2));
    }
    let tau_d = disc.daycount().year_fraction(t1, t2)?;
    if tau_d == 0.0 {
        return Err(Error::DegenerateInterval(t1, t2));
    }
    let gf = fwd.discount(t1)? / fwd.discount(t2)?;
    let gd = disc.discount(t1)? / disc.discount(t2)?;
    Ok((gf - gd) / tau_d)
}

/// `X_fd(t0, T) = P_f(t0, T) / P_d(t0, T)`.
pub fn forward_exchange_rate(fwd: &YieldCurve, disc: &YieldCurve, t: Date) -> Result<f64> {
    Ok(fwd.discount(t)? / disc.discount(t)?)
}

/// `Y_fd(t0, S) = A_f(t0, S) / A_d(t0, S)`.
pub fn swap_forward_exchange_rate(fwd: &YieldCurve, disc: &YieldCurve, schedule: &ScheduleSpec) -> Result<f64> {
    let a_d = annuity(disc, schedule)?;
    if a_d == 0.0 {
        return Err(Error::ZeroAnnuity);
    }
    Ok(annuity(fwd, schedule)? / a_d)
}

/// Multiplicative basis written through forward exchange rates,
/// `BA = (X_1 P_d1 - X_2 P_d2) / (X_2 (P_d1 - P_d2))`.
pub fn basis_from_exchange_rates(fwd: &YieldCurve, disc: &YieldCurve, t1: Date, t2: Date) -> Result<f64> {
    let x1 = forward_exchange_rate(fwd, disc, t1)?;
    let x2 = forward_exchange_rate(fwd, disc, t2)?;
    let (pd1, pd2) = (disc.discount(t1)?, disc.discount(t2)?);
    if pd1 == pd2 {
        return Err(Error::DegenerateBasis(t1, t2));
    }
    Ok((x1 * pd1 - x2 * pd2) / (x2 * (pd1 - pd2)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisPoint {
    /// Sampling date (the start of the interval).
    pub date: Date,
    pub t1: Date,
    pub t2: Date,
    /// Undefined where the discounting forward vanishes.
    pub mult: Option<f64>,
    pub add: f64,
}

/// Sampled forward basis term structure between two curves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForwardBasisCurve {
    pub fwd_label: TenorLabel,
    pub disc_label: TenorLabel,
    /// Rolling tenor; 0 for a pillar-interval grid.
    pub tenor_months: i32,
    points: Vec<BasisPoint>,
}

fn basis_point(fwd: &YieldCurve, disc: &YieldCurve, t1: Date, t2: Date) -> Result<BasisPoint> {
    let mult = match multiplicative_basis(fwd, disc, t1, t2) {
        Ok(v) => Some(v),
        Err(Error::DegenerateBasis(..)) => None,
        Err(e) => return Err(e),
    };
    Ok(BasisPoint {
        date: t1,
        t1,
        t2,
        mult,
        add: additive_basis(fwd, disc, t1, t2)?,
    })
}

impl ForwardBasisCurve {
    pub fn from_points(fwd_label: TenorLabel, disc_label: TenorLabel, tenor_months: i32, points: Vec<BasisPoint>) -> Self {
        ForwardBasisCurve {
            fwd_label,
            disc_label,
            tenor_months,
            points,
        }
    }

    pub fn points(&self) -> &[BasisPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Sum of absolute day-to-day changes of the additive basis.
    pub fn additive_total_variation(&self) -> f64 {
        self.points.windows(2).map(|w| (w[1].add - w[0].add).abs()).sum()
    }

    /// CSV `date,T1,T2,BA_mult,BA_add_bp`; undefined BA is left empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("date,T1,T2,BA_mult,BA_add_bp\n");
        for p in &self.points {
            let mult = p.mult.map(|m| format!("{m:.12}")).unwrap_or_default();
            out.push_str(&format!("{},{},{},{},{:.8}\n", p.date, p.t1, p.t2, mult, p.add * 1e4));
        }
        out
    }
}

/// Rolling `[t, t + tenor]` basis for `t` stepping by `stride_days` from
/// the reference date while both curves span the window.
pub fn basis_term_structure(
    fwd: &YieldCurve,
    disc: &YieldCurve,
    tenor_months: i32,
    stride_days: i32,
) -> Result<ForwardBasisCurve> {
    if tenor_months <= 0 || stride_days <= 0 {
        return Err(Error::InvalidSchedule("tenor and stride must be positive".into()));
    }
    if fwd.reference_date() != disc.reference_date() {
        return Err(Error::InvalidCurve("curves have different reference dates".into()));
    }
    let t0 = disc.reference_date();
    let horizon = fwd.last_pillar().min(disc.last_pillar());
    if t0.add_months(tenor_months) > horizon {
        return Err(Error::InvalidSchedule(format!(
            "curves overlap for less than {tenor_months}M"
        )));
    }
    let mut points = Vec::new();
    let mut t = t0;
    while t.add_months(tenor_months) <= horizon {
        points.push(basis_point(fwd, disc, t, t.add_months(tenor_months))?);
        t = t.add_days(stride_days);
    }
    Ok(ForwardBasisCurve::from_points(fwd.tenor_label(), disc.tenor_label(), tenor_months, points))
}

/// Basis on consecutive intervals `[t0, g_0], [g_0, g_1], ...`, the grid
/// consumed by [`crate::bootstrap::curve_from_basis`].
pub fn basis_on_grid(fwd: &YieldCurve, disc: &YieldCurve, grid: &[Date]) -> Result<ForwardBasisCurve> {
    if fwd.reference_date() != disc.reference_date() {
        return Err(Error::InvalidCurve("curves have different reference dates".into()));
    }
    let mut prev = disc.reference_date();
    let mut points = Vec::with_capacity(grid.len());
    for d in grid {
        points.push(basis_point(fwd, disc, prev, *d)?);
        prev = *d;
    }
    Ok(ForwardBasisCurve::from_points(fwd.tenor_label(), disc.tenor_label(), 0, points))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::InterpScheme;
    use crate::timegrid::DayCount;

    fn t0() -> Date {
        Date::from_ymd(2009, 2, 18).unwrap()
    }

    fn two_point(label: TenorLabel, p1: f64, p2: f64) -> YieldCurve {
        YieldCurve::new(
            t0(),
            label,
            DayCount::Act360,
            InterpScheme::LogLinearDiscount,
            &[(t0().add_days(180), p1), (t0().add_days(360), p2)],
        )
        .unwrap()
    }

    #[test]
    fn numeric_example() {
        let f = two_point(TenorLabel::Fwd6M, 0.990, 0.969);
        let d = two_point(TenorLabel::Discount, 0.991, 0.972);
        let (t1, t2) = (t0().add_days(180), t0().add_days(360));
        let ba = multiplicative_basis(&f, &d, t1, t2).unwrap();
        assert!((ba - (0.972 / 0.969) * (0.021 / 0.019)).abs() < 1e-14);
        assert!((ba - 1.108685).abs() < 1e-6);
        let add = additive_basis(&f, &d, t1, t2).unwrap();
        assert!((add - 2.0 * (0.990 / 0.969 - 0.991 / 0.972)).abs() < 1e-15);
        assert!((add - 0.004249).abs() < 1e-6);
        let fd = d.simple_forward(t1, t2, DayCount::Act360).unwrap();
        assert!((add - fd * (ba - 1.0)).abs() < 1e-14);
        assert!((forward_exchange_rate(&f, &d, t2).unwrap() - 0.996913).abs() < 1e-6);
        assert!((basis_from_exchange_rates(&f, &d, t1, t2).unwrap() - ba).abs() < 1e-13);
    }

    #[test]
    fn identical_curves_are_neutral() {
        let c = two_point(TenorLabel::Discount, 0.99, 0.97);
        for k in [1, 30, 90, 200] {
            let t1 = t0().add_days(k);
            let t2 = t1.add_days(91);
            assert_eq!(multiplicative_basis(&c, &c, t1, t2).unwrap(), 1.0);
            assert_eq!(additive_basis(&c, &c, t1, t2).unwrap(), 0.0);
            assert_eq!(forward_exchange_rate(&c, &c, t1).unwrap(), 1.0);
        }
        assert_eq!(forward_exchange_rate(&c, &c, t0()).unwrap(), 1.0);
        let s = ScheduleSpec::new(t0(), t0().add_months(12), 3, DayCount::Act360);
        assert_eq!(swap_forward_exchange_rate(&c, &c, &s).unwrap(), 1.0);
        let ts = basis_term_structure(&c, &c, 3, 1).unwrap();
        assert!(ts.points().iter().all(|p| p.mult == Some(1.0) && p.add == 0.0));
    }

    #[test]
    fn flat_discounting_leaves_multiplicative_undefined() {
        let d = two_point(TenorLabel::Discount, 1.0, 1.0);
        let f = two_point(TenorLabel::Fwd6M, 0.99, 0.97);
        let (t1, t2) = (t0().add_days(180), t0().add_days(360));
        assert!(matches!(multiplicative_basis(&f, &d, t1, t2), Err(Error::DegenerateBasis(..))));
        assert!(additive_basis(&f, &d, t1, t2).unwrap() > 0.0);
        let grid = basis_on_grid(&f, &d, &[t1, t2]).unwrap();
        assert_eq!(grid.points()[1].mult, None);
        assert!(grid.to_csv().lines().nth(2).unwrap().contains(",,"));
    }

    #[test]
    fn reciprocal_under_label_exchange() {
        let f = two_point(TenorLabel::Fwd6M, 0.990, 0.969);
        let d = two_point(TenorLabel::Discount, 0.991, 0.972);
        let (t1, t2) = (t0().add_days(40), t0().add_days(300));
        let ab = multiplicative_basis(&f, &d, t1, t2).unwrap();
        let ba = multiplicative_basis(&d, &f, t1, t2).unwrap();
        assert!((ab * ba - 1.0).abs() < 1e-14);
    }

    #[test]
    fn single_period_swap_exchange_rate() {
        let f = two_point(TenorLabel::Fwd6M, 0.990, 0.969);
        let d = two_point(TenorLabel::Discount, 0.991, 0.972);
        let end = t0().add_days(360);
        let one = ScheduleSpec::new(t0(), end, 12, DayCount::Act360);
        let y = swap_forward_exchange_rate(&f, &d, &one).unwrap();
        assert!((y - forward_exchange_rate(&f, &d, end).unwrap()).abs() < 1e-15);
        let two = ScheduleSpec::new(t0(), t0().add_months(12), 6, DayCount::Act360);
        let dates = two.dates().unwrap();
        let taus: Vec<f64> = dates.windows(2).map(|w| DayCount::Act360.year_fraction(w[0], w[1]).unwrap()).collect();
        let af: f64 = (0..2).map(|j| taus[j] * f.discount(dates[j + 1]).unwrap()).sum();
        let ad: f64 = (0..2).map(|j| taus[j] * d.discount(dates[j + 1]).unwrap()).sum();
        assert!((swap_forward_exchange_rate(&f, &d, &two).unwrap() - af / ad).abs() < 1e-15);
    }

    #[test]
    fn term_structure_matches_scalar_operations() {
        let f = two_point(TenorLabel::Fwd3M, 0.990, 0.969);
        let d = two_point(TenorLabel::Discount, 0.991, 0.972);
        let ts = basis_term_structure(&f, &d, 3, 1).unwrap();
        let expected_len = t0().days_until(t0().add_days(360).add_months(-3)) + 1;
        assert_eq!(ts.len() as i32, expected_len);
        for p in ts.points().iter().step_by(17) {
            assert_eq!(p.mult.unwrap(), multiplicative_basis(&f, &d, p.t1, p.t2).unwrap());
            assert_eq!(p.add, additive_basis(&f, &d, p.t1, p.t2).unwrap());
        }
        assert!(basis_term_structure(&f, &d, 13, 1).is_err());
    }
}
