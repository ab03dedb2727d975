use std::path::Path;

use multicurve_core::basis::basis_term_structure;
use multicurve_core::bootstrap::{reprice_with, write_quotes_csv, CurveSet, LegCurves, QuoteSets};
use multicurve_core::curve::{InterpScheme, TenorLabel};
use multicurve_core::market::{default_reference, synthetic_eur_with, DiscountRecipe};
use multicurve_core::portfolio::{parse_portfolio, portfolio_to_json, price_csv, price_portfolio, Instrument, PricingContext};
use multicurve_core::pricer::{fair_swap_rate, BlackConvention, PeriodVolCorr, SwapSpec};
use multicurve_core::quanto::{quanto_add, quanto_mult, VolCorrSpec};
use multicurve_core::risk::{bootstrap_hedges, hedge_portfolio, Hedge, MappingRule, ProjectionOptions, RiskConfig, RiskEngine};
use multicurve_core::timegrid::DayCount;

use crate::inputs::{self, emit, read, write, CliError, CliResult, Provenance};
use crate::{BasisArgs, BootstrapArgs, Mapping, PriceArgs, QuantoArgs, RiskArgs, SynthArgs};

fn black(paper_literal: bool) -> BlackConvention {
    if paper_literal {
        BlackConvention::PaperLiteral
    } else {
        BlackConvention::Martingale
    }
}

fn legs<'a>(set: &'a CurveSet, label: TenorLabel, q: &multicurve_core::bootstrap::InstrumentQuote) -> CliResult<LegCurves<'a>> {
    let built = set.get(label).ok_or_else(|| CliError::input("missing_curve", label.name()))?;
    Ok(LegCurves {
        forwarding: built,
        discounting: set.discount(),
        second_forwarding: q.second_tenor.map(|t| set.forwarding(t)),
    })
}

pub fn bootstrap(args: &BootstrapArgs) -> CliResult<()> {
    let mut prov = Provenance::new("bootstrap");
    let sets = inputs::load_quotes(&args.quotes, &mut prov)?;
    let config = inputs::bootstrap_config(args.interp, args.ref_date.as_deref(), &mut prov)?;
    let set = inputs::build(&sets, &config)?;

    let mut log = prov.header();
    log.push_str("curve,instrument,quote,model_quote,residual\n");
    for (label, quotes) in &sets {
        let curve = set.get(*label).expect("every quote set is built");
        write(&args.out.join(format!("{label}.json")), &curve.to_json())?;
        let mut worst: f64 = 0.0;
        for q in quotes {
            if set.dropped.iter().any(|(l, d)| l == label && d == q) {
                continue;
            }
            let model = reprice_with(q, legs(&set, *label, q)?, &config.conventions)?;
            worst = worst.max((model - q.quote).abs());
            log.push_str(&format!("{label},{},{},{},{:.3e}\n", q.label(), q.quote, model, model - q.quote));
        }
        println!("{label}: {} pillars, max |residual| {worst:.2e}", curve.pillar_dates().len());
    }
    write(&args.out.join("residuals.csv"), &log)
}

fn rebuild_with(sets: &QuoteSets, args: &BasisArgs, scheme: InterpScheme, prov: &mut Provenance) -> CliResult<CurveSet> {
    let mut config = inputs::bootstrap_config(None, args.source.ref_date.as_deref(), prov)?;
    config.interpolation = scheme;
    inputs::build(sets, &config)
}

pub fn basis(args: &BasisArgs) -> CliResult<()> {
    let mut prov = Provenance::new("basis");
    let (set, sets) = inputs::curve_set(&args.source, &mut prov)?;
    let label: TenorLabel = args.curve.parse().map_err(|e: multicurve_core::Error| CliError::input("invalid_curve", e.to_string()))?;
    let tenor = args
        .tenor
        .or(label.tenor_months())
        .ok_or_else(|| CliError::input("usage", format!("--tenor is required for curve {label}")))?;
    prov.option("curve", label);
    prov.option("tenor", tenor);
    prov.option("step_days", args.step_days);
    let fwd = set.get(label).ok_or_else(|| CliError::input("missing_curve", format!("no {label} curve")))?;
    let ts = basis_term_structure(fwd, set.discount(), tenor, args.step_days)?;
    let scheme = fwd.interpolation();

    let mut out = String::new();
    match args.compare {
        None => {
            out.push_str(&prov.header());
            out.push_str(&ts.to_csv());
            out.push_str(&format!("# total_variation_bp,{scheme}={:.8}\n", ts.additive_total_variation() * 1e4));
        }
        Some(other) => {
            let sets = sets.ok_or_else(|| CliError::input("usage", "--compare needs --quotes"))?;
            let other: InterpScheme = other.into();
            prov.option("compare", other);
            let alt = rebuild_with(&sets, args, other, &mut prov)?;
            let alt_fwd = alt.get(label).expect("same quote sets");
            let alt_ts = basis_term_structure(alt_fwd, alt.discount(), tenor, args.step_days)?;
            if alt_ts.len() != ts.len() {
                return Err(CliError::numerical("grid_mismatch", "schemes sampled on different grids"));
            }
            out.push_str(&prov.header());
            out.push_str(&format!("date,T1,T2,BA_mult,BA_add_bp,BA_mult_{other},BA_add_bp_{other}\n"));
            let mult = |m: Option<f64>| m.map(|m| format!("{m:.12}")).unwrap_or_default();
            for (p, q) in ts.points().iter().zip(alt_ts.points()) {
                out.push_str(&format!(
                    "{},{},{},{},{:.8},{},{:.8}\n",
                    p.date,
                    p.t1,
                    p.t2,
                    mult(p.mult),
                    p.add * 1e4,
                    mult(q.mult),
                    q.add * 1e4
                ));
            }
            let (a, b) = (ts.additive_total_variation(), alt_ts.additive_total_variation());
            out.push_str(&format!("# total_variation_bp,{scheme}={:.8},{other}={:.8},ratio={:.6}\n", a * 1e4, b * 1e4, b / a));
        }
    }
    emit(args.out.as_deref(), &out)
}

fn parse_vols(s: &str) -> CliResult<Vec<(f64, f64)>> {
    s.split(',')
        .map(|pair| {
            let (f, x) = pair
                .split_once(':')
                .ok_or_else(|| CliError::input("usage", format!("volatility pair '{pair}' is not sigma_f:sigma_X")))?;
            let num = |v: &str| v.trim().parse::<f64>().map_err(|e| CliError::input("usage", format!("'{v}': {e}")));
            Ok((num(f)?, num(x)?))
        })
        .collect()
}

pub fn quanto(args: &QuantoArgs) -> CliResult<()> {
    let mut prov = Provenance::new("quanto");
    let vols = parse_vols(&args.vols)?;
    if args.rho_steps == 0 || args.rho_steps % 2 == 1 {
        return Err(CliError::input("usage", "--rho-steps must be a positive even number"));
    }
    prov.option("vols", &args.vols);
    prov.option("rho_steps", args.rho_steps);
    prov.option("forward", args.forward);
    prov.option("dt", args.dt);
    let mut out = prov.header();
    out.push_str("rho,sigma_f,sigma_X,QA_mult,QA_add_bp\n");
    let n = args.rho_steps as f64;
    for (sf, sx) in vols {
        for k in 0..=args.rho_steps {
            let rho = -1.0 + 2.0 * k as f64 / n;
            let spec = VolCorrSpec::flat(sf, sx, rho)?;
            let mult = quanto_mult(&spec, 0.0, args.dt)?;
            let add = quanto_add(&spec, args.forward, 0.0, args.dt)?;
            // `+ 0.0` folds -0 into 0 so the rho = 0 rows print unsigned
            out.push_str(&format!("{:.4},{sf},{sx},{mult:.12},{:.8}\n", rho + 0.0, add * 1e4 + 0.0));
        }
    }
    emit(args.out.as_deref(), &out)
}

pub fn price(args: &PriceArgs) -> CliResult<()> {
    let mut prov = Provenance::new("price");
    let (set, _) = inputs::curve_set(&args.source, &mut prov)?;
    let portfolio = parse_portfolio(&read(&args.portfolio, &mut prov)?).map_err(|e| CliError::at(&args.portfolio, e))?;
    prov.option("single_curve", args.single_curve);
    prov.option("paper_literal_black", args.paper_literal_black);
    let set = if args.single_curve { CurveSet::single_curve(set.discount().clone()) } else { set };
    let ctx = PricingContext {
        black: black(args.paper_literal_black),
        ..PricingContext::default()
    };
    let rows = price_portfolio(&portfolio, &set, &ctx)?;
    let total: f64 = rows.iter().map(|r| r.pv).sum();
    let mut out = prov.header();
    out.push_str(&price_csv(&rows));
    out.push_str(&format!("# total_pv,{total:.10}\n"));
    emit(args.out.as_deref(), &out)
}

fn load_hedges(path: &Path, prov: &mut Provenance) -> CliResult<Vec<Hedge>> {
    let lines = parse_portfolio(&read(path, prov)?).map_err(|e| CliError::at(path, e))?;
    lines
        .into_iter()
        .map(|i| match i {
            Instrument::Market { id, curve, quote, .. } => Ok(Hedge::new(id, curve, quote)),
            other => Err(CliError::input(
                "invalid_hedge",
                format!("{}: hedge {} must be a MARKET position, not {}", path.display(), other.id(), other.kind_name()),
            )),
        })
        .collect()
}

pub fn risk(args: &RiskArgs) -> CliResult<()> {
    let mut prov = Provenance::new("risk");
    let sets = inputs::load_quotes(&args.quotes, &mut prov)?;
    let bootstrap = inputs::bootstrap_config(args.interp, args.ref_date.as_deref(), &mut prov)?;
    let portfolio = parse_portfolio(&read(&args.portfolio, &mut prov)?).map_err(|e| CliError::at(&args.portfolio, e))?;
    if !(args.bump_bp > 0.0) {
        return Err(CliError::input("usage", "--bump-bp must be positive"));
    }
    let config = RiskConfig {
        bootstrap,
        bump: args.bump_bp * 1e-4,
        black: black(args.paper_literal_black),
        single_curve: args.single_curve,
    };
    let engine = RiskEngine::new(&sets, config)?;
    let hedges = match &args.hedges {
        Some(p) => load_hedges(p, &mut prov)?,
        None => bootstrap_hedges(&engine.ladder(&[])?),
    };
    let options = ProjectionOptions {
        rule: match args.mapping {
            Mapping::Linear => MappingRule::Linear,
            Mapping::Nearest => MappingRule::Nearest,
        },
        allow_unmapped: args.allow_unmapped,
    };
    for (name, value) in [
        ("bump_bp", args.bump_bp.to_string()),
        ("mapping", format!("{:?}", args.mapping)),
        ("allow_unmapped", args.allow_unmapped.to_string()),
        ("single_curve", args.single_curve.to_string()),
        ("paper_literal_black", args.paper_literal_black.to_string()),
    ] {
        prov.option(name, value);
    }
    let report = hedge_portfolio(&engine, &portfolio, &hedges, options)?;
    for e in report.ladder.failures() {
        inputs::warn("bump_failed", &format!("{}: {}", e.id(), e.error.as_deref().unwrap_or("")));
    }
    let p = &report.projection;
    if p.unmapped_mass != 0.0 {
        inputs::warn("unmapped_delta", &format!("{:.10} per bp left on curves without hedges", p.unmapped_mass * 1e-4));
    }
    let header = prov.header();
    write(&args.out.join("ladder.csv"), &format!("{header}{}", report.ladder.to_csv()))?;
    write(&args.out.join("hedges.csv"), &format!("{header}{}", report.to_csv()))?;
    println!(
        "ladder: {} instruments, gross {:.4} per bp; hedges: {}; max residual {:.3e} per bp; conservation exact: {}",
        report.ladder.entries.len(),
        report.ladder.gross() * 1e-4,
        hedges.len(),
        report.residual_ladder.max_abs() * 1e-4,
        p.is_conserved()
    );
    if !p.is_conserved() {
        return Err(CliError::numerical(
            "conservation",
            format!("sum of ladder {} differs from sum of projection {}", p.total_ladder, p.total_projected),
        ));
    }
    Ok(())
}

pub fn synth(args: &SynthArgs) -> CliResult<()> {
    let mut prov = Provenance::new("synth");
    let t0 = match &args.ref_date {
        Some(d) => inputs::parse_date(d)?,
        None => default_reference(),
    };
    prov.option("ref_date", t0);
    prov.option("ois", args.ois);
    let recipe = if args.ois { DiscountRecipe::Ois } else { DiscountRecipe::Traditional };
    let sets = synthetic_eur_with(t0, recipe);
    let header = prov.header();
    for (label, quotes) in &sets {
        write(&args.out.join(format!("{label}.csv")), &format!("{header}{}", write_quotes_csv(quotes)))?;
    }

    // A 5.5Y swap on the 1M index, struck at market, hedged with the 5Y
    // and 6Y 1M swaps of the quote set.
    let set = inputs::build(&sets, &Default::default())?;
    let mut leg = SwapSpec::vanilla(t0, t0.add_months(66), 1, DayCount::Act360, 12, DayCount::Thirty360, 0.0, 1e8, true);
    leg.strike = fair_swap_rate(set.discount(), set.forwarding(1), &leg, &PeriodVolCorr::None)?;
    let demo = vec![Instrument::Swap {
        id: "swap_1M_5.5Y".into(),
        spec: leg,
        volcorr: PeriodVolCorr::None,
    }];
    write(&args.out.join("demo_portfolio.json"), &portfolio_to_json(&demo))?;
    let hedges: Vec<Instrument> = [5, 6]
        .into_iter()
        .map(|y| {
            sets[&TenorLabel::Fwd1M]
                .iter()
                .find(|q| q.end == t0.add_months(12 * y))
                .map(|q| Instrument::market(format!("swap_1M_{y}Y"), TenorLabel::Fwd1M, q.clone(), 1.0))
                .ok_or_else(|| CliError::numerical("missing_hedge", format!("no {y}Y 1M swap in the synthetic set")))
        })
        .collect::<CliResult<_>>()?;
    write(&args.out.join("demo_hedges.json"), &portfolio_to_json(&hedges))?;
    println!("wrote {} quote files, demo_portfolio.json and demo_hedges.json to {}", sets.len(), args.out.display());
    Ok(())
}
