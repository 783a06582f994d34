//! Sweeps behind the ten figures. Every figure returns its table together
//! with the trend and agreement checks it is expected to satisfy.

use bepsec_core::allocation::{
    allocate, secrecy_rate, secrecy_rate_limit, AdversaryModel, AllocationResult, Thresholds,
};
use bepsec_core::beamforming::{beam_gains, design_beamformers, solve_power_pair};
use bepsec_core::channel::{draw_channels, ChannelDraw, FadingScenario, RandomStream};
use bepsec_core::coding::{effective_thresholds, BlockCodeParams};
use bepsec_core::modulation::bep_bpsk;
use bepsec_core::montecarlo::{Accumulator, BatchRunner, EventCount, Experiment};
use bepsec_core::outage::{outage_analytic, OutageResult};

use crate::config::Config;
use crate::runner::Threaded;
use crate::table::{Cell, Table};
use crate::Error;

/// Outcome of one expected property.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct FigureOutput {
    pub table: Table,
    pub checks: Vec<Check>,
}

impl FigureOutput {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    SecrecyRate,
    BepCurve,
    Power,
    Outage,
    CooperativePower,
    CooperativeOutage,
    Coded,
    Beamforming,
    GapSingle,
    GapArray,
}

impl Figure {
    pub const ALL: [Figure; 10] = [
        Figure::SecrecyRate,
        Figure::BepCurve,
        Figure::Power,
        Figure::Outage,
        Figure::CooperativePower,
        Figure::CooperativeOutage,
        Figure::Coded,
        Figure::Beamforming,
        Figure::GapSingle,
        Figure::GapArray,
    ];

    pub fn number(self) -> usize {
        Self::ALL.iter().position(|&f| f == self).unwrap() + 1
    }

    pub fn from_number(n: usize) -> Option<Self> {
        Self::ALL.get(n.checked_sub(1)?).copied()
    }

    pub fn name(self) -> String {
        format!("fig{}", self.number())
    }
}

// Stream families. Figures sharing a sweep share its draws.
const STREAM_PASSIVE: u64 = 3;
const STREAM_COOPERATIVE: u64 = 5;
const STREAM_CODED: u64 = 7;
const STREAM_BEAM: u64 = 8;
const STREAM_GAP_SINGLE: u64 = 9;
const STREAM_GAP_ARRAY: u64 = 10;
pub(crate) const STREAM_REPORT: u64 = 11;

/// Shared state of a run: configuration, batch runner and root stream.
pub struct Context<'a> {
    pub cfg: &'a Config,
    pub runner: Threaded,
    root: RandomStream,
}

impl<'a> Context<'a> {
    pub fn new(cfg: &'a Config) -> Self {
        Context {
            cfg,
            runner: Threaded::new(cfg.worker_count()),
            root: RandomStream::new(cfg.seed),
        }
    }

    /// Stream of sweep point `point` in family `family`.
    pub fn stream(&self, family: u64, point: u64) -> RandomStream {
        self.root.substream(family).substream(point)
    }

    pub fn table(&self, name: &str, header: Vec<String>) -> Table {
        let mut t = Table::new(header);
        t.meta("figure", name);
        t.meta("config_hash", self.cfg.hash());
        t.meta("seed", self.cfg.seed);
        t.meta("trials", self.cfg.trials);
        t
    }
}

pub fn run_figure(fig: Figure, ctx: &Context) -> Result<FigureOutput, Error> {
    match fig {
        Figure::SecrecyRate => fig1(ctx),
        Figure::BepCurve => fig2(ctx),
        Figure::Power => fig3(ctx),
        Figure::Outage => fig4(ctx),
        Figure::CooperativePower => fig5(ctx),
        Figure::CooperativeOutage => fig6(ctx),
        Figure::Coded => fig7(ctx),
        Figure::Beamforming => fig8(ctx),
        Figure::GapSingle => fig9(ctx),
        Figure::GapArray => fig10(ctx),
    }
}

fn db_to_power(sigma2: f64, db: f64) -> f64 {
    sigma2 * 10f64.powf(db / 10.0)
}

fn power_to_db(sigma2: f64, p: f64) -> f64 {
    10.0 * (p / sigma2).log10()
}

fn cols(prefix: &[&str], suffix: &str) -> Vec<String> {
    prefix.iter().map(|p| format!("{p}{suffix}")).collect()
}

fn fmt_list(items: &[String]) -> String {
    if items.is_empty() {
        "none".into()
    } else {
        items.join("; ")
    }
}

// ---------------------------------------------------------------------------
// Fixed-gain curves

fn fixed_gain_setup(cfg: &Config) -> Result<(FadingScenario, ChannelDraw, Vec<(f64, f64)>), Error> {
    let s = FadingScenario::new(cfg.sigma2, 1.0, vec![1.0])?;
    let draw = ChannelDraw::from_power_gains(cfg.curve_gain_b, &[cfg.curve_gain_e]);
    let powers = std::iter::once((f64::NEG_INFINITY, 0.0))
        .chain(cfg.power_db_grid.values().into_iter().map(|db| (db, db_to_power(cfg.sigma2, db))))
        .collect();
    Ok((s, draw, powers))
}

fn nonincreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] <= w[0])
}

fn fig1(ctx: &Context) -> Result<FigureOutput, Error> {
    let cfg = ctx.cfg;
    let (s, draw, powers) = fixed_gain_setup(cfg)?;
    let bound = secrecy_rate_limit(&draw, &s)?;
    let mut table = ctx.table(
        "fig1",
        ["power_db", "power_w", "secrecy_rate", "saturation_bound"].map(String::from).to_vec(),
    );
    let mut rates = Vec::new();
    for &(db, p) in &powers {
        let r = secrecy_rate(&draw, &s, p)?;
        rates.push(r);
        table.push(vec![db.into(), p.into(), r.into(), bound.into()]);
    }
    table.meta("gain_b", cfg.curve_gain_b);
    table.meta("gain_e", cfg.curve_gain_e);

    let within = |r: f64| {
        if bound > 0.0 {
            (r - bound).abs() <= 0.01 * bound
        } else {
            r == 0.0
        }
    };
    let mut checks = vec![Check::new("secrecy rate is zero at zero power", rates[0] == 0.0, format!("{}", rates[0]))];
    if cfg.curve_gain_b >= cfg.curve_gain_e {
        let inc = rates.windows(2).all(|w| w[1] >= w[0]);
        checks.push(Check::new("secrecy rate nondecreasing in power", inc, ""));
    }
    let at_1e4 = secrecy_rate(&draw, &s, 1e4 * cfg.sigma2)?;
    checks.push(Check::new(
        "rate at 1e4 sigma2 within 1% of saturation bound",
        within(at_1e4),
        format!("rate {at_1e4:.6}, bound {bound:.6}"),
    ));
    let last = *rates.last().unwrap();
    checks.push(Check::new(
        "last sweep point within 1% of saturation bound",
        within(last),
        format!("rate {last:.6}, bound {bound:.6}"),
    ));
    Ok(FigureOutput { table, checks })
}

fn fig2(ctx: &Context) -> Result<FigureOutput, Error> {
    let cfg = ctx.cfg;
    let (s, draw, powers) = fixed_gain_setup(cfg)?;
    let (a, b) = (draw.legit_gain(&s), draw.adversary_gain(&s, 0)?);
    let mut table = ctx.table(
        "fig2",
        ["power_db", "power_w", "bep_legit", "bep_adversary"].map(String::from).to_vec(),
    );
    let (mut legit, mut eve) = (Vec::new(), Vec::new());
    for &(db, p) in &powers {
        let bl = bep_bpsk(a * p / s.sigma2())?;
        let be = bep_bpsk(b * p / s.sigma2())?;
        legit.push(bl);
        eve.push(be);
        table.push(vec![db.into(), p.into(), bl.into(), be.into()]);
    }
    table.meta("gain_b", cfg.curve_gain_b);
    table.meta("gain_e", cfg.curve_gain_e);
    let mut checks = vec![
        Check::new("BEP is 1/2 at zero power", legit[0] == 0.5 && eve[0] == 0.5, ""),
        Check::new("legitimate BEP nonincreasing in power", nonincreasing(&legit), ""),
        Check::new("adversary BEP nonincreasing in power", nonincreasing(&eve), ""),
    ];
    if a >= b {
        let above = legit.iter().zip(&eve).all(|(l, e)| e >= l);
        checks.push(Check::new("adversary BEP at least legitimate BEP", above, ""));
    }
    Ok(FigureOutput { table, checks })
}

// ---------------------------------------------------------------------------
// Fading sweeps

/// Feasibility count and power sum of an allocator over random draws.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PowerTally {
    pub trials: u64,
    pub feasible: u64,
    pub power_sum: f64,
}

impl Accumulator for PowerTally {
    fn merge(&mut self, o: Self) {
        self.trials += o.trials;
        self.feasible += o.feasible;
        self.power_sum += o.power_sum;
    }
}

impl PowerTally {
    pub fn outage(&self) -> EventCount {
        EventCount {
            events: self.trials - self.feasible,
            trials: self.trials,
        }
    }

    /// Mean power over feasible draws.
    pub fn mean_power(&self) -> Option<f64> {
        (self.feasible > 0).then(|| self.power_sum / self.feasible as f64)
    }
}

struct AllocationTrials<'a> {
    scenario: &'a FadingScenario,
    th: Thresholds,
    model: AdversaryModel,
}

impl Experiment for AllocationTrials<'_> {
    type Acc = PowerTally;

    fn trial(&self, s: &mut RandomStream, acc: &mut PowerTally) {
        let draw = draw_channels(self.scenario, s);
        let alloc = allocate(&draw, self.scenario, &self.th, self.model).expect("single-antenna scenario");
        acc.trials += 1;
        if let AllocationResult::Feasible { power, .. } = alloc {
            acc.feasible += 1;
            acc.power_sum += power;
        }
    }
}

/// Statistics of one (scenario, threshold, model) sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub tally: PowerTally,
    pub analytic: Option<f64>,
    /// Allocation at the mean channel gains `E|h|² = 1`.
    pub power_at_mean_gains: Option<f64>,
}

impl SweepPoint {
    pub fn outage(&self) -> OutageResult {
        OutageResult {
            analytic: self.analytic,
            monte_carlo: Some(self.tally.outage()),
        }
    }
}

fn sweep_point(
    ctx: &Context,
    scenario: &FadingScenario,
    th: &Thresholds,
    model: AdversaryModel,
    stream: &RandomStream,
) -> Result<SweepPoint, Error> {
    let exp = AllocationTrials {
        scenario,
        th: *th,
        model,
    };
    let tally = ctx.runner.run(&exp, stream, ctx.cfg.trials);
    let analytic = match outage_analytic(scenario, th, model) {
        Ok(p) => Some(p),
        Err(bepsec_core::Error::DegenerateRates { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let mean_draw = ChannelDraw::from_power_gains(1.0, &vec![1.0; scenario.adversaries()]);
    let power_at_mean_gains = allocate(&mean_draw, scenario, th, model)?.power();
    Ok(SweepPoint {
        tally,
        analytic,
        power_at_mean_gains,
    })
}

/// `points[e][i]` for adversary counts `counts[e]` and `t1_grid[i]`.
fn model_sweep(
    ctx: &Context,
    family: u64,
    model: AdversaryModel,
    counts: &[usize],
    t1s: &[f64],
    interference: f64,
) -> Result<Vec<Vec<SweepPoint>>, Error> {
    let cfg = ctx.cfg;
    let model_tag = match model {
        AdversaryModel::Passive => 0,
        AdversaryModel::UnknownMode => 1,
        AdversaryModel::Cooperative => 2,
    };
    counts
        .iter()
        .map(|&e| {
            let s = cfg.scenario(e)?.with_interference(interference)?;
            t1s.iter()
                .enumerate()
                .map(|(i, &t1)| {
                    let th = cfg.thresholds(t1)?;
                    let stream = ctx.stream(family, (model_tag * 100 + e as u64) * 1000 + i as u64);
                    sweep_point(ctx, &s, &th, model, &stream)
                })
                .collect()
        })
        .collect()
}

fn strictly_decreasing_where_defined(v: &[Option<f64>]) -> (bool, usize) {
    let defined: Vec<f64> = v.iter().flatten().copied().collect();
    (defined.windows(2).all(|w| w[1] < w[0]), defined.len())
}

fn agreement_checks(label: &str, t1s: &[f64], points: &[SweepPoint]) -> Check {
    let mut bad = Vec::new();
    let mut compared = 0;
    for (t1, p) in t1s.iter().zip(points) {
        match p.outage().agrees_within(3.0) {
            Some(true) => compared += 1,
            Some(false) => {
                compared += 1;
                let o = p.outage();
                bad.push(format!(
                    "t1={t1:.4}: analytic {:.6} vs mc {:.6} +- {:.2e}",
                    o.analytic.unwrap(),
                    o.mc_estimate().unwrap(),
                    o.mc_halfwidth().unwrap()
                ));
            }
            None => {}
        }
    }
    Check::new(
        format!("analytic outage within 3 halfwidths of Monte Carlo ({label})"),
        bad.is_empty() && compared > 0,
        format!("{compared} points compared; failures: {}", fmt_list(&bad)),
    )
}

fn passive_sweep(ctx: &Context) -> Result<(Vec<f64>, Vec<usize>, Vec<Vec<SweepPoint>>), Error> {
    let t1s = ctx.cfg.t1_grid.values();
    let counts: Vec<usize> = (1..=ctx.cfg.max_adversaries()).collect();
    let points = model_sweep(ctx, STREAM_PASSIVE, AdversaryModel::Passive, &counts, &t1s, 0.0)?;
    Ok((t1s, counts, points))
}

fn power_columns(table_cols: &mut Vec<String>, tag: &str) {
    table_cols.extend(cols(
        &["power_mean_", "power_mean_db_", "power_at_mean_gains_", "feasible_fraction_"],
        tag,
    ));
}

fn power_cells(row: &mut Vec<Cell>, sigma2: f64, p: &SweepPoint) {
    let mean = p.tally.mean_power();
    row.push(Cell::opt(mean));
    row.push(Cell::opt(mean.map(|m| power_to_db(sigma2, m))));
    row.push(Cell::opt(p.power_at_mean_gains));
    row.push((p.tally.feasible as f64 / p.tally.trials as f64).into());
}

fn outage_columns(table_cols: &mut Vec<String>, tag: &str) {
    table_cols.extend(cols(&["outage_analytic_", "outage_mc_", "outage_halfwidth_"], tag));
}

fn outage_cells(row: &mut Vec<Cell>, p: &SweepPoint) {
    let o = p.outage();
    row.push(o.analytic.map_or(Cell::Missing, Cell::Num));
    row.push(o.mc_estimate().unwrap().into());
    row.push(o.mc_halfwidth().unwrap().into());
}

fn fig3(ctx: &Context) -> Result<FigureOutput, Error> {
    let (t1s, counts, points) = passive_sweep(ctx)?;
    let mut header = vec!["t1".to_string()];
    for e in &counts {
        power_columns(&mut header, &format!("e{e}"));
    }
    let mut table = ctx.table("fig3", header);
    for (i, &t1) in t1s.iter().enumerate() {
        let mut row = vec![t1.into()];
        for per_e in &points {
            power_cells(&mut row, ctx.cfg.sigma2, &per_e[i]);
        }
        table.push(row);
    }
    let checks = counts
        .iter()
        .zip(&points)
        .map(|(e, per_e)| {
            let means: Vec<Option<f64>> = per_e.iter().map(|p| p.tally.mean_power()).collect();
            let (ok, n) = strictly_decreasing_where_defined(&means);
            Check::new(
                format!("mean optimal power decreasing in t1 (E={e})"),
                ok && n >= 2,
                format!("{n} feasible points"),
            )
        })
        .collect();
    Ok(FigureOutput { table, checks })
}

fn fig4(ctx: &Context) -> Result<FigureOutput, Error> {
    let (t1s, counts, points) = passive_sweep(ctx)?;
    let mut header = vec!["t1".to_string()];
    for e in &counts {
        outage_columns(&mut header, &format!("e{e}"));
    }
    let mut table = ctx.table("fig4", header);
    for (i, &t1) in t1s.iter().enumerate() {
        let mut row = vec![t1.into()];
        for per_e in &points {
            outage_cells(&mut row, &per_e[i]);
        }
        table.push(row);
    }
    let mut checks: Vec<Check> = counts
        .iter()
        .zip(&points)
        .map(|(e, per_e)| agreement_checks(&format!("E={e}"), &t1s, per_e))
        .collect();
    if counts.len() >= 2 {
        let mut bad = Vec::new();
        for (i, t1) in t1s.iter().enumerate() {
            let col: Vec<f64> = points.iter().map(|per_e| per_e[i].analytic.unwrap()).collect();
            if !col.windows(2).all(|w| w[1] > w[0]) {
                bad.push(format!("t1={t1:.4}: {col:?}"));
            }
        }
        checks.push(Check::new(
            "outage increasing in number of adversaries",
            bad.is_empty(),
            format!("{} points; failures: {}", t1s.len(), fmt_list(&bad)),
        ));
    }
    Ok(FigureOutput { table, checks })
}

struct CooperativeSweep {
    t1s: Vec<f64>,
    counts: Vec<usize>,
    mrc: Vec<Vec<SweepPoint>>,
    unknown: Vec<Vec<SweepPoint>>,
}

fn cooperative_sweep(ctx: &Context) -> Result<CooperativeSweep, Error> {
    let cfg = ctx.cfg;
    if cfg.max_adversaries() < 2 {
        return Err(Error::Usage("cooperative sweeps need at least two adversaries".into()));
    }
    let t1s = cfg.t1_grid.values();
    let counts: Vec<usize> = (2..=cfg.max_adversaries()).collect();
    let mrc = model_sweep(ctx, STREAM_COOPERATIVE, AdversaryModel::Cooperative, &counts, &t1s, cfg.interference)?;
    let unknown = model_sweep(ctx, STREAM_COOPERATIVE, AdversaryModel::UnknownMode, &counts, &t1s, cfg.interference)?;
    Ok(CooperativeSweep {
        t1s,
        counts,
        mrc,
        unknown,
    })
}

fn pointwise_below(
    name: String,
    t1s: &[f64],
    lower: &[Option<f64>],
    upper: &[Option<f64>],
) -> Check {
    let mut bad = Vec::new();
    let mut compared = 0;
    for ((t1, l), u) in t1s.iter().zip(lower).zip(upper) {
        match (l, u) {
            (Some(l), Some(u)) => {
                compared += 1;
                if l > u {
                    bad.push(format!("t1={t1:.4}: {l:.6e} > {u:.6e}"));
                }
            }
            // Feasible against the stronger attack but not the weaker one.
            (None, Some(_)) => bad.push(format!("t1={t1:.4}: lower series undefined")),
            _ => {}
        }
    }
    Check::new(
        name,
        bad.is_empty() && compared > 0,
        format!("{compared} points compared; failures: {}", fmt_list(&bad)),
    )
}

fn fig5(ctx: &Context) -> Result<FigureOutput, Error> {
    let sw = cooperative_sweep(ctx)?;
    let mut header = vec!["t1".to_string()];
    for e in &sw.counts {
        power_columns(&mut header, &format!("mrc_e{e}"));
        power_columns(&mut header, &format!("unknown_e{e}"));
    }
    let mut table = ctx.table("fig5", header);
    table.meta("interference", ctx.cfg.interference);
    for (i, &t1) in sw.t1s.iter().enumerate() {
        let mut row = vec![t1.into()];
        for (m, u) in sw.mrc.iter().zip(&sw.unknown) {
            power_cells(&mut row, ctx.cfg.sigma2, &m[i]);
            power_cells(&mut row, ctx.cfg.sigma2, &u[i]);
        }
        table.push(row);
    }
    let checks = sw
        .counts
        .iter()
        .enumerate()
        .map(|(k, e)| {
            let mean = |v: &[SweepPoint]| v.iter().map(|p| p.tally.mean_power()).collect::<Vec<_>>();
            pointwise_below(
                format!("MRC mean power at most unknown-mode mean power (E={e})"),
                &sw.t1s,
                &mean(&sw.mrc[k]),
                &mean(&sw.unknown[k]),
            )
        })
        .collect();
    Ok(FigureOutput { table, checks })
}

fn fig6(ctx: &Context) -> Result<FigureOutput, Error> {
    let sw = cooperative_sweep(ctx)?;
    let mut header = vec!["t1".to_string()];
    for e in &sw.counts {
        outage_columns(&mut header, &format!("mrc_e{e}"));
        outage_columns(&mut header, &format!("unknown_e{e}"));
    }
    let mut table = ctx.table("fig6", header);
    table.meta("interference", ctx.cfg.interference);
    for (i, &t1) in sw.t1s.iter().enumerate() {
        let mut row = vec![t1.into()];
        for (m, u) in sw.mrc.iter().zip(&sw.unknown) {
            outage_cells(&mut row, &m[i]);
            outage_cells(&mut row, &u[i]);
        }
        table.push(row);
    }
    let mut checks = Vec::new();
    for (k, e) in sw.counts.iter().enumerate() {
        let value = |v: &[SweepPoint]| v.iter().map(|p| p.outage().value()).collect::<Vec<_>>();
        checks.push(pointwise_below(
            format!("MRC outage at most unknown-mode outage (E={e})"),
            &sw.t1s,
            &value(&sw.mrc[k]),
            &value(&sw.unknown[k]),
        ));
        checks.push(agreement_checks(&format!("MRC, E={e}"), &sw.t1s, &sw.mrc[k]));
        checks.push(agreement_checks(&format!("unknown mode, E={e}"), &sw.t1s, &sw.unknown[k]));
    }
    Ok(FigureOutput { table, checks })
}

fn fig7(ctx: &Context) -> Result<FigureOutput, Error> {
    let cfg = ctx.cfg;
    let t1s = cfg.coded_t1_grid.values();
    let counts: Vec<usize> = (1..=cfg.max_adversaries()).collect();
    let base = BlockCodeParams::new(cfg.code_n, cfg.code_t)?;

    let mut header = vec!["t1".to_string(), "coded_t1".into(), "coded_t2".into()];
    for e in &counts {
        header.extend(cols(
            &["outage_uncoded_", "outage_coded_", "outage_coded_mc_", "outage_coded_halfwidth_"],
            &format!("e{e}"),
        ));
    }
    let mut table = ctx.table("fig7", header);
    table.meta("code_n", cfg.code_n);
    table.meta("code_t", cfg.code_t);

    let mut bad = Vec::new();
    let mut mc_bad = Vec::new();
    for (i, &t1) in t1s.iter().enumerate() {
        let th = cfg.thresholds(t1)?;
        let coded = base.with_matched_targets(&th).and_then(|c| effective_thresholds(&c));
        let mut row = vec![t1.into()];
        match &coded {
            Ok(c) => row.extend([c.t1().into(), c.t2().into()]),
            Err(_) => row.extend([Cell::Infeasible, Cell::Infeasible]),
        }
        for &e in &counts {
            let s = cfg.scenario(e)?;
            let uncoded = outage_analytic(&s, &th, AdversaryModel::Passive)?;
            row.push(uncoded.into());
            match &coded {
                Ok(c) => {
                    let stream = ctx.stream(STREAM_CODED, e as u64 * 1000 + i as u64);
                    let o = sweep_point(ctx, &s, c, AdversaryModel::Passive, &stream)?.outage();
                    let a = o.analytic.unwrap();
                    row.extend([a.into(), o.mc_estimate().unwrap().into(), o.mc_halfwidth().unwrap().into()]);
                    if !(a < uncoded) {
                        bad.push(format!("E={e}, t1={t1:.4}: coded {a:.6} vs uncoded {uncoded:.6}"));
                    }
                    if o.agrees_within(3.0) == Some(false) {
                        mc_bad.push(format!("E={e}, t1={t1:.4}"));
                    }
                }
                Err(err) => {
                    row.extend([Cell::Infeasible, Cell::Infeasible, Cell::Infeasible]);
                    bad.push(format!("E={e}, t1={t1:.4}: {err}"));
                }
            }
        }
        table.push(row);
    }
    let checks = vec![
        Check::new(
            "coded outage below uncoded outage at every point",
            bad.is_empty(),
            format!("{} points; failures: {}", t1s.len(), fmt_list(&bad)),
        ),
        Check::new(
            "coded analytic outage within 3 halfwidths of Monte Carlo",
            mc_bad.is_empty(),
            format!("failures: {}", fmt_list(&mc_bad)),
        ),
    ];
    Ok(FigureOutput { table, checks })
}

// ---------------------------------------------------------------------------
// Beamforming

/// Outage count and mean powers of the beamforming design.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BeamTally {
    pub trials: u64,
    pub feasible: u64,
    pub data_sum: f64,
    pub noise_sum: f64,
}

impl Accumulator for BeamTally {
    fn merge(&mut self, o: Self) {
        self.trials += o.trials;
        self.feasible += o.feasible;
        self.data_sum += o.data_sum;
        self.noise_sum += o.noise_sum;
    }
}

impl BeamTally {
    pub fn outage(&self) -> EventCount {
        EventCount {
            events: self.trials - self.feasible,
            trials: self.trials,
        }
    }

    fn mean(&self, sum: f64) -> Option<f64> {
        (self.feasible > 0).then(|| sum / self.feasible as f64)
    }
}

struct BeamTrials<'a> {
    scenario: &'a FadingScenario,
    th: Thresholds,
}

impl Experiment for BeamTrials<'_> {
    type Acc = BeamTally;

    fn trial(&self, s: &mut RandomStream, acc: &mut BeamTally) {
        let draw = draw_channels(self.scenario, s);
        acc.trials += 1;
        if let Ok(sol) = solve_power_pair(&draw, self.scenario, &self.th) {
            if sol.feasible {
                acc.feasible += 1;
                acc.data_sum += sol.p_d;
                acc.noise_sum += sol.p_an;
            }
        }
    }
}

fn fig8(ctx: &Context) -> Result<FigureOutput, Error> {
    let cfg = ctx.cfg;
    let t1s = cfg.t1_grid.values();
    let counts: Vec<usize> = (1..=cfg.max_adversaries()).collect();
    let mut header = vec!["t1".to_string()];
    for e in &counts {
        header.extend(cols(
            &[
                "outage_beamformed_mc_",
                "outage_beamformed_halfwidth_",
                "outage_single_antenna_",
                "power_data_mean_",
                "power_noise_mean_",
                "power_total_mean_db_",
            ],
            &format!("e{e}"),
        ));
    }
    let mut table = ctx.table("fig8", header);
    table.meta("antennas", cfg.antennas);

    let mut rows: Vec<Vec<Cell>> = t1s.iter().map(|&t| vec![t.into()]).collect();
    let mut bad = Vec::new();
    for &e in &counts {
        let single = cfg.scenario(e)?;
        let array = single.clone().with_antennas(cfg.antennas)?;
        for (i, &t1) in t1s.iter().enumerate() {
            let th = cfg.thresholds(t1)?;
            let exp = BeamTrials {
                scenario: &array,
                th,
            };
            let stream = ctx.stream(STREAM_BEAM, e as u64 * 1000 + i as u64);
            let tally = ctx.runner.run(&exp, &stream, cfg.trials);
            let bf = tally.outage();
            let reference = outage_analytic(&single, &th, AdversaryModel::Passive)?;
            if !(bf.estimate() < reference) {
                bad.push(format!("E={e}, t1={t1:.4}: {:.6} vs {reference:.6}", bf.estimate()));
            }
            let pd = tally.mean(tally.data_sum);
            let pan = tally.mean(tally.noise_sum);
            let total = pd.zip(pan).map(|(d, n)| power_to_db(cfg.sigma2, d + n));
            rows[i].extend([
                bf.estimate().into(),
                bf.halfwidth95().into(),
                reference.into(),
                Cell::opt(pd),
                Cell::opt(pan),
                Cell::opt(total),
            ]);
        }
    }
    for r in rows {
        table.push(r);
    }
    let checks = vec![Check::new(
        "beamformed outage below single-antenna outage at every point",
        bad.is_empty(),
        format!("{} points per adversary count; failures: {}", t1s.len(), fmt_list(&bad)),
    )];
    Ok(FigureOutput { table, checks })
}

// ---------------------------------------------------------------------------
// Power gap against the secrecy-rate design

/// Draws meeting the secrecy-rate target at full power, with the summed
/// legitimate BEP over those draws.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SecrecyTally {
    pub trials: u64,
    pub secure: u64,
    pub bep_sum: f64,
}

impl Accumulator for SecrecyTally {
    fn merge(&mut self, o: Self) {
        self.trials += o.trials;
        self.secure += o.secure;
        self.bep_sum += o.bep_sum;
    }
}

impl SecrecyTally {
    fn mean_bep(&self) -> Option<f64> {
        (self.secure > 0).then(|| self.bep_sum / self.secure as f64)
    }
}

/// Effective legitimate gain and strongest adversary gain of a draw under
/// the transmitter's data beam (MRT for arrays, the scalar gain otherwise).
fn data_beam_gains(draw: &ChannelDraw, s: &FadingScenario) -> Option<(f64, f64)> {
    if s.antennas() == 1 {
        let b = draw.adversary_gains(s).ok()?;
        Some((draw.legit_gain(s), b.into_iter().fold(0.0, f64::max)))
    } else {
        let bf = design_beamformers(&draw.h_b, &draw.h_e).ok()?;
        let g = beam_gains(draw, s, &bf);
        Some((g.legit, g.data.into_iter().fold(0.0, f64::max)))
    }
}

struct SecrecyTrials<'a> {
    scenario: &'a FadingScenario,
    power: f64,
    r_min: f64,
}

impl Experiment for SecrecyTrials<'_> {
    type Acc = SecrecyTally;

    fn trial(&self, s: &mut RandomStream, acc: &mut SecrecyTally) {
        let draw = draw_channels(self.scenario, s);
        acc.trials += 1;
        let Some((a, b)) = data_beam_gains(&draw, self.scenario) else {
            return;
        };
        let s2 = self.scenario.sigma2();
        let snr_b = a * self.power / s2;
        let rate = (1.0 + snr_b).log2() - (1.0 + b * self.power / s2).log2();
        if rate >= self.r_min {
            acc.secure += 1;
            acc.bep_sum += bep_bpsk(snr_b).expect("finite snr");
        }
    }
}

/// Proposed design: minimum total power over feasible draws.
fn proposed_tally(ctx: &Context, s: &FadingScenario, th: &Thresholds, stream: &RandomStream) -> PowerTally {
    if s.antennas() == 1 {
        let exp = AllocationTrials {
            scenario: s,
            th: *th,
            model: AdversaryModel::Passive,
        };
        ctx.runner.run(&exp, stream, ctx.cfg.trials)
    } else {
        let t = ctx.runner.run(&BeamTrials { scenario: s, th: *th }, stream, ctx.cfg.trials);
        PowerTally {
            trials: t.trials,
            feasible: t.feasible,
            power_sum: t.data_sum + t.noise_sum,
        }
    }
}

/// Power (dB) at which a curve of `(power_db, bep)` points crosses `target`,
/// linearly interpolated in `(dB, log10 BEP)`. Points are in increasing
/// power order; the first crossing counts.
pub fn crossing_db(curve: &[(f64, f64)], target: f64) -> Option<f64> {
    let lt = target.log10();
    for w in curve.windows(2) {
        let ((x0, y0), (x1, y1)) = (w[0], w[1]);
        let (l0, l1) = (y0.log10(), y1.log10());
        if l0 == lt {
            return Some(x0);
        }
        if (l0 - lt) * (l1 - lt) < 0.0 || l1 == lt {
            return Some(x0 + (lt - l0) * (x1 - x0) / (l1 - l0));
        }
    }
    None
}

/// Both curves of a power-gap figure.
#[derive(Debug, Clone)]
pub struct GapCurves {
    /// `(power_db, bep)` of the proposed design, increasing power.
    pub proposed: Vec<(f64, f64)>,
    /// `(power_db, bep)` of the secrecy-rate design, increasing power.
    pub baseline: Vec<(f64, f64)>,
    pub proposed_db: Option<f64>,
    pub baseline_db: Option<f64>,
}

impl GapCurves {
    pub fn gap_db(&self) -> Option<f64> {
        Some(self.baseline_db? - self.proposed_db?)
    }
}

fn gap_figure(ctx: &Context, name: &str, family: u64, antennas: usize) -> Result<(FigureOutput, GapCurves), Error> {
    let cfg = ctx.cfg;
    let s = cfg.scenario(1)?.with_antennas(antennas)?;
    let mut table = ctx.table(
        name,
        ["series", "target", "power_db", "power_w", "bep_legit", "feasible_fraction"]
            .map(String::from)
            .to_vec(),
    );
    table.meta("antennas", antennas);
    table.meta("adversaries", 1);
    table.meta("r_min", cfg.r_min);

    let mut proposed = Vec::new();
    for (i, t1) in cfg.bep_grid.values().into_iter().enumerate() {
        let th = cfg.thresholds(t1)?;
        let tally = proposed_tally(ctx, &s, &th, &ctx.stream(family, i as u64));
        let frac = tally.feasible as f64 / tally.trials as f64;
        match tally.mean_power() {
            Some(p) => {
                let db = power_to_db(cfg.sigma2, p);
                proposed.push((db, t1));
                table.push(vec!["proposed".into(), t1.into(), db.into(), p.into(), t1.into(), frac.into()]);
            }
            None => table.push(vec![
                "proposed".into(),
                t1.into(),
                Cell::Infeasible,
                Cell::Infeasible,
                t1.into(),
                frac.into(),
            ]),
        }
    }
    proposed.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut baseline = Vec::new();
    for (i, db) in cfg.baseline_power_db_grid.values().into_iter().enumerate() {
        let p = db_to_power(cfg.sigma2, db);
        let exp = SecrecyTrials {
            scenario: &s,
            power: p,
            r_min: cfg.r_min,
        };
        let tally = ctx.runner.run(&exp, &ctx.stream(family, 10_000 + i as u64), cfg.trials);
        let frac = tally.secure as f64 / tally.trials as f64;
        let bep = tally.mean_bep();
        if let Some(b) = bep {
            baseline.push((db, b));
        }
        table.push(vec![
            "baseline".into(),
            cfg.r_min.into(),
            db.into(),
            p.into(),
            Cell::opt(bep),
            frac.into(),
        ]);
    }

    let curves = GapCurves {
        proposed_db: crossing_db(&proposed, cfg.gap_bep),
        baseline_db: crossing_db(&baseline, cfg.gap_bep),
        proposed,
        baseline,
    };
    let show = |v: Option<f64>| v.map_or("not reached".to_string(), |x| format!("{x:.3} dB"));
    table.meta("gap_bep", cfg.gap_bep);
    table.meta("proposed_db_at_gap_bep", show(curves.proposed_db));
    table.meta("baseline_db_at_gap_bep", show(curves.baseline_db));
    table.meta("gap_db", show(curves.gap_db()));
    let gap = curves.gap_db();
    let checks = vec![Check::new(
        "power gap to secrecy-rate design at least 5 dB",
        gap.is_some_and(|g| g >= 5.0),
        format!(
            "at BEP {}: proposed {}, baseline {}, gap {}",
            cfg.gap_bep,
            show(curves.proposed_db),
            show(curves.baseline_db),
            show(gap)
        ),
    )];
    Ok((FigureOutput { table, checks }, curves))
}

pub fn fig9_curves(ctx: &Context) -> Result<(FigureOutput, GapCurves), Error> {
    gap_figure(ctx, "fig9", STREAM_GAP_SINGLE, 1)
}

pub fn fig10_curves(ctx: &Context) -> Result<(FigureOutput, GapCurves), Error> {
    gap_figure(ctx, "fig10", STREAM_GAP_ARRAY, ctx.cfg.antennas)
}

fn fig9(ctx: &Context) -> Result<FigureOutput, Error> {
    Ok(fig9_curves(ctx)?.0)
}

fn fig10(ctx: &Context) -> Result<FigureOutput, Error> {
    Ok(fig10_curves(ctx)?.0)
}
