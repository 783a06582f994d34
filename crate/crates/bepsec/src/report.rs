//! Analytic-versus-Monte-Carlo outage grid.

use bepsec_core::allocation::{AdversaryModel, Combiner};
use bepsec_core::channel::FadingScenario;
use bepsec_core::outage::{max_combining_outage, outage_monte_carlo_with, sum_combining_outage, OutageRates};
use bepsec_core::special_math::Rate;

use crate::figures::{Context, STREAM_REPORT};
use crate::table::{Cell, Table};
use crate::Error;

/// One cell of the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportCell {
    pub model: AdversaryModel,
    pub adversaries: usize,
    pub interference: f64,
    pub t1: f64,
    pub analytic: f64,
    pub mc: f64,
    pub halfwidth: f64,
}

impl ReportCell {
    pub fn passed(&self) -> bool {
        (self.analytic - self.mc).abs() <= 3.0 * self.halfwidth
    }
}

pub struct Report {
    pub table: Table,
    pub cells: Vec<ReportCell>,
}

impl Report {
    pub fn failures(&self) -> usize {
        self.cells.iter().filter(|c| !c.passed()).count()
    }
}

fn model_name(m: AdversaryModel) -> &'static str {
    match m {
        AdversaryModel::Passive => "passive",
        AdversaryModel::UnknownMode => "unknown_mode",
        AdversaryModel::Cooperative => "mrc",
    }
}

/// Closed-form outage with the legitimate rate scaled by `legit_rate_scale`
/// (1 reproduces the library value; anything else is a sensitivity probe).
fn analytic(
    s: &FadingScenario,
    th: &bepsec_core::allocation::Thresholds,
    model: AdversaryModel,
    legit_rate_scale: f64,
) -> Result<f64, Error> {
    let mut rates = match model {
        AdversaryModel::UnknownMode => OutageRates::unknown_mode(s, th)?,
        _ => OutageRates::passive(s, th)?,
    };
    rates.legit = Rate::new(rates.legit.get() * legit_rate_scale)?;
    Ok(match model.combiner() {
        Combiner::Max => max_combining_outage(&rates)?,
        Combiner::Sum => sum_combining_outage(&rates)?,
    })
}

/// Scenarios of the grid: passive for every adversary count, unknown mode
/// at `I ∈ {0, σ², 5σ²}`, and MRC for two or more adversaries.
fn scenarios(ctx: &Context) -> Vec<(AdversaryModel, usize, f64)> {
    let cfg = ctx.cfg;
    let emax = cfg.max_adversaries();
    let mut out: Vec<_> = (1..=emax).map(|e| (AdversaryModel::Passive, e, 0.0)).collect();
    for k in [0.0, 1.0, 5.0] {
        out.extend((1..=emax).map(|e| (AdversaryModel::UnknownMode, e, k * cfg.sigma2)));
    }
    out.extend((2..=emax).map(|e| (AdversaryModel::Cooperative, e, 0.0)));
    out
}

pub fn run_report(ctx: &Context, legit_rate_scale: f64) -> Result<Report, Error> {
    let cfg = ctx.cfg;
    if cfg.report_t1.is_empty() {
        return Err(Error::Usage("report grid is empty: set report_t1".into()));
    }
    if !(legit_rate_scale.is_finite() && legit_rate_scale > 0.0) {
        return Err(Error::Usage(format!("rate scale must be positive, got {legit_rate_scale}")));
    }
    let mut table = ctx.table(
        "report",
        ["model", "adversaries", "interference", "t1", "analytic", "mc", "halfwidth", "deviation", "status"]
            .map(String::from)
            .to_vec(),
    );
    if legit_rate_scale != 1.0 {
        table.meta("legit_rate_scale", legit_rate_scale);
    }
    let mut cells = Vec::new();
    for (k, (model, e, interference)) in scenarios(ctx).into_iter().enumerate() {
        let s = cfg.scenario(e)?.with_interference(interference)?;
        for (i, &t1) in cfg.report_t1.iter().enumerate() {
            let th = cfg.thresholds(t1)?;
            let stream = ctx.stream(STREAM_REPORT, k as u64 * 1000 + i as u64);
            let mc = outage_monte_carlo_with(&ctx.runner, &s, &th, model, cfg.trials, &stream)?
                .monte_carlo
                .unwrap();
            let cell = ReportCell {
                model,
                adversaries: e,
                interference,
                t1,
                analytic: analytic(&s, &th, model, legit_rate_scale)?,
                mc: mc.estimate(),
                halfwidth: mc.halfwidth95(),
            };
            let deviation = (cell.analytic - cell.mc).abs() / cell.halfwidth;
            table.push(vec![
                model_name(model).into(),
                Cell::Int(e as u64),
                interference.into(),
                t1.into(),
                cell.analytic.into(),
                cell.mc.into(),
                cell.halfwidth.into(),
                deviation.into(),
                if cell.passed() { "PASS" } else { "FAIL" }.into(),
            ]);
            cells.push(cell);
        }
    }
    Ok(Report { table, cells })
}
