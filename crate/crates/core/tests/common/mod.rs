//! Shared fixtures for the integration tests.

#![allow(dead_code)]

use multicurve_core::portfolio::Instrument;
use multicurve_core::pricer::{CapFloorSpec, FraSpec, PeriodVolCorr, SwapSpec};
use multicurve_core::quanto::{SwapVolCorrSpec, VolCorrSpec};
use multicurve_core::timegrid::{Date, DayCount, ScheduleSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TENORS: [i32; 4] = [1, 3, 6, 12];

/// Mixed FRAs, swaps, caps/floors, swaptions and floating zero-coupon
/// payments on all four forwarding tenors, within 25 years.
pub fn random_portfolio(t0: Date, n: usize, seed: u64) -> Vec<Instrument> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let act = DayCount::Act360;
    let thirty = DayCount::Thirty360;
    (0..n)
        .map(|i| {
            let id = format!("p{i:02}");
            let tenor = TENORS[rng.gen_range(0..4)];
            let notional = rng.gen_range(1e6..1e7) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let strike = rng.gen_range(0.015..0.045);
            match i % 5 {
                0 => {
                    let start = t0.add_months(rng.gen_range(1..120));
                    Instrument::Fra {
                        id,
                        tenor_months: tenor,
                        spec: FraSpec {
                            t1: start,
                            t2: start.add_months(tenor),
                            strike,
                            notional,
                            daycount: act,
                        },
                        volcorr: None,
                    }
                }
                1 => {
                    let start = t0.add_months(rng.gen_range(0..24));
                    let end = start.add_months(12 * rng.gen_range(1..20));
                    Instrument::Swap {
                        id,
                        spec: SwapSpec::vanilla(start, end, tenor, act, 12, thirty, strike, notional, rng.gen_bool(0.5)),
                        volcorr: PeriodVolCorr::None,
                    }
                }
                2 => {
                    let tenor = [3, 6][rng.gen_range(0..2)];
                    let start = t0.add_months(tenor);
                    let end = start.add_months(12 * rng.gen_range(1..10));
                    let vc = VolCorrSpec::flat(rng.gen_range(0.15..0.35), rng.gen_range(0.05..0.15), rng.gen_range(-0.5..0.5)).unwrap();
                    let omega = if rng.gen_bool(0.5) { 1 } else { -1 };
                    Instrument::CapFloor {
                        id,
                        tenor_months: tenor,
                        spec: CapFloorSpec::on_schedule(&ScheduleSpec::new(start, end, tenor, act), strike, omega, notional, PeriodVolCorr::Uniform(vc)).unwrap(),
                    }
                }
                3 => {
                    let start = t0.add_months(12 * rng.gen_range(1..6));
                    let end = start.add_months(12 * rng.gen_range(2..11));
                    let vc = SwapVolCorrSpec::flat(rng.gen_range(0.1..0.3), rng.gen_range(0.05..0.15), rng.gen_range(-0.5..0.5)).unwrap();
                    Instrument::Swaption {
                        id,
                        spec: SwapSpec::vanilla(start, end, 6, act, 12, thirty, strike, notional, true),
                        strike,
                        omega: if rng.gen_bool(0.5) { 1 } else { -1 },
                        volcorr: vc,
                    }
                }
                _ => Instrument::FloatZcb {
                    id,
                    tenor_months: tenor,
                    maturity: t0.add_months(rng.gen_range(6..300)),
                    notional,
                },
            }
        })
        .collect()
}
