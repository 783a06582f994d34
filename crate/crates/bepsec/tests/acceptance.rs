//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit status
//! when any criterion fails.

use std::process::{Command, ExitCode};
use std::time::Instant;

use bepsec::config::Config;
use bepsec::figures::{fig10_curves, fig9_curves, run_figure, Context, Figure, FigureOutput};
use bepsec::runner::Threaded;
use bepsec_core::allocation::{
    allocate_bpsk_single, allocate_chernoff, allocate_mrc, allocate_multi_eve, allocate_qpsk_single,
    allocate_unknown_mode, received_beps, AdversaryModel, AllocationResult, BepKind, Thresholds,
};
use bepsec_core::beamforming::solve_power_pair;
use bepsec_core::channel::{draw_channels, ChannelDraw, FadingScenario, RandomStream};
use bepsec_core::coding::{block_fail_monte_carlo_with, block_fail_prob, BlockCodeParams};
use bepsec_core::outage::{
    mrc_outage_three, mrc_outage_two, outage_analytic, outage_monte_carlo_with, outage_multi_analytic,
    outage_single_analytic, OutageRates, OutageResult,
};

const TRIALS: u64 = 1_000_000;
const T2: f64 = 0.05;
/// Trials per sweep point for the figure-level criteria.
const SWEEP_TRIALS: u64 = 200_000;

type Outcome = Result<String, String>;

struct Harness {
    runner: Threaded,
}

fn uniform_in(s: &mut RandomStream, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * s.uniform()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

impl Harness {
    fn mc(&self, s: &FadingScenario, th: &Thresholds, model: AdversaryModel, stream: &RandomStream) -> OutageResult {
        let mut r = outage_monte_carlo_with(&self.runner, s, th, model, TRIALS, stream).unwrap();
        r.analytic = Some(outage_analytic(s, th, model).unwrap());
        r
    }

    /// Tracks the worst deviation in halfwidths over a set of comparisons.
    fn agree(&self, label: &str, r: &OutageResult, worst: &mut f64) -> Result<(), String> {
        let (a, m, hw) = (r.analytic.unwrap(), r.mc_estimate().unwrap(), r.mc_halfwidth().unwrap());
        let dev = (a - m).abs() / hw;
        *worst = worst.max(dev);
        ensure(dev <= 3.0, || format!("{label}: analytic {a:.6} vs mc {m:.6} +- {hw:.2e}"))
    }

    fn c1(&self) -> Outcome {
        let mut params = RandomStream::new(1);
        let mut worst = 0.0_f64;
        for k in 0..10 {
            let ab = uniform_in(&mut params, 0.5, 2.0);
            let ae = uniform_in(&mut params, 0.5, 2.0);
            let t1 = uniform_in(&mut params, 0.005, 0.2);
            let s = FadingScenario::new(0.01, ab, vec![ae]).unwrap();
            let th = Thresholds::new(t1, T2).unwrap();
            let mut r = self.mc(&s, &th, AdversaryModel::Passive, &RandomStream::new(100 + k));
            r.analytic = Some(outage_single_analytic(&s, &th).unwrap());
            self.agree(&format!("set {k} (ab={ab:.3}, ae={ae:.3}, t1={t1:.4})"), &r, &mut worst)?;
        }
        Ok(format!("10 sets at 1e6 trials, worst deviation {worst:.2} halfwidths"))
    }

    fn c2(&self) -> Outcome {
        let mut params = RandomStream::new(2);
        let mut worst = 0.0_f64;
        let mut cases = 0;
        for e in [2usize, 3] {
            for k in 0..5 {
                // Distinct losses: spread them over disjoint sub-intervals.
                let ae: Vec<f64> = (0..e)
                    .map(|i| {
                        let w = 1.5 / e as f64;
                        uniform_in(&mut params, 0.5 + i as f64 * w, 0.5 + (i as f64 + 0.9) * w)
                    })
                    .collect();
                let ab = uniform_in(&mut params, 0.5, 2.0);
                let t1 = uniform_in(&mut params, 0.005, 0.2);
                let s = FadingScenario::new(0.01, ab, ae.clone()).unwrap();
                let th = Thresholds::new(t1, T2).unwrap();
                let r = self.mc(&s, &th, AdversaryModel::Passive, &RandomStream::new(200 + 10 * e as u64 + k));
                self.agree(&format!("E={e}, ae={ae:.3?}, t1={t1:.4}"), &r, &mut worst)?;
                cases += 1;
            }
        }
        let mut max_diff = 0.0_f64;
        for k in 0..100 {
            let mut p = RandomStream::new(1000 + k);
            let s = FadingScenario::new(0.01, uniform_in(&mut p, 0.5, 2.0), vec![uniform_in(&mut p, 0.5, 2.0)]).unwrap();
            let th = Thresholds::new(uniform_in(&mut p, 0.005, 0.2), T2).unwrap();
            max_diff = max_diff.max((outage_multi_analytic(&s, &th).unwrap() - outage_single_analytic(&s, &th).unwrap()).abs());
        }
        ensure(max_diff <= 1e-12, || format!("E=1 general form differs from single form by {max_diff:.2e}"))?;
        Ok(format!(
            "{cases} sets at 1e6 trials, worst deviation {worst:.2} halfwidths; E=1 reduction max diff {max_diff:.1e}"
        ))
    }

    fn c3(&self) -> Outcome {
        let sigma2 = 0.01;
        let ae = [1.0, 0.9, 0.8];
        let mut worst = 0.0_f64;
        let mut max_diff = 0.0_f64;
        let mut cases = 0;
        for (ki, k) in [0.0, 1.0, 5.0].into_iter().enumerate() {
            for e in 1..=3 {
                for (ti, t1) in [0.01, 0.05, 0.1].into_iter().enumerate() {
                    let s = FadingScenario::new(sigma2, 1.0, ae[..e].to_vec())
                        .unwrap()
                        .with_interference(k * sigma2)
                        .unwrap();
                    let th = Thresholds::new(t1, T2).unwrap();
                    let stream = RandomStream::new(300 + (ki * 100 + e * 10 + ti) as u64);
                    let r = self.mc(&s, &th, AdversaryModel::UnknownMode, &stream);
                    self.agree(&format!("I={k}σ², E={e}, t1={t1}"), &r, &mut worst)?;
                    cases += 1;
                    if k == 0.0 {
                        let passive = outage_multi_analytic(&s, &th).unwrap();
                        max_diff = max_diff.max((r.analytic.unwrap() - passive).abs());
                    }
                }
            }
        }
        ensure(max_diff <= 1e-12, || format!("I=0 differs from passive by {max_diff:.2e}"))?;
        Ok(format!(
            "{cases} cells at 1e6 trials, worst deviation {worst:.2} halfwidths; I=0 vs passive max diff {max_diff:.1e}"
        ))
    }

    fn c4(&self) -> Outcome {
        let mut params = RandomStream::new(4);
        let mut worst = 0.0_f64;
        let mut max_diff = 0.0_f64;
        for e in [2usize, 3] {
            for k in 0..5 {
                let w = 1.5 / e as f64;
                let ae: Vec<f64> = (0..e)
                    .map(|i| uniform_in(&mut params, 0.5 + i as f64 * w, 0.5 + (i as f64 + 0.9) * w))
                    .collect();
                let t1 = uniform_in(&mut params, 0.005, 0.2);
                let s = FadingScenario::new(0.01, 1.0, ae.clone()).unwrap();
                let th = Thresholds::new(t1, T2).unwrap();
                let general = outage_analytic(&s, &th, AdversaryModel::Cooperative).unwrap();
                let rates = OutageRates::passive(&s, &th).unwrap();
                let l: Vec<f64> = rates.adversaries.iter().map(|r| r.get()).collect();
                let ly = rates.legit.get();
                let dedicated = if e == 2 {
                    mrc_outage_two(l[0], l[1], ly)
                } else {
                    mrc_outage_three(l[0], l[1], l[2], ly)
                };
                max_diff = max_diff.max((general - dedicated).abs());
                let r = self.mc(&s, &th, AdversaryModel::Cooperative, &RandomStream::new(400 + 10 * e as u64 + k));
                self.agree(&format!("E={e}, ae={ae:.3?}, t1={t1:.4}"), &r, &mut worst)?;
            }
        }
        ensure(max_diff <= 1e-12, || format!("general vs dedicated differ by {max_diff:.2e}"))?;
        Ok(format!(
            "10 sets at 1e6 trials, worst deviation {worst:.2} halfwidths; general vs dedicated max diff {max_diff:.1e}"
        ))
    }

    fn c5(&self) -> Outcome {
        type Alloc = fn(&ChannelDraw, &FadingScenario, &Thresholds) -> AllocationResult;
        let qpsk: Alloc = |d, s, t| allocate_qpsk_single(d, s, t).unwrap().allocation;
        let cases: [(&str, usize, f64, AdversaryModel, BepKind, Alloc); 6] = [
            ("bpsk single", 1, 0.0, AdversaryModel::Passive, BepKind::Bpsk, |d, s, t| {
                allocate_bpsk_single(d, s, t).unwrap()
            }),
            ("bpsk multi", 3, 0.0, AdversaryModel::Passive, BepKind::Bpsk, |d, s, t| {
                allocate_multi_eve(d, s, t).unwrap()
            }),
            ("unknown mode", 3, 1.0, AdversaryModel::UnknownMode, BepKind::Bpsk, |d, s, t| {
                allocate_unknown_mode(d, s, t).unwrap()
            }),
            ("mrc", 3, 0.0, AdversaryModel::Cooperative, BepKind::Bpsk, |d, s, t| allocate_mrc(d, s, t).unwrap()),
            ("qpsk", 1, 0.0, AdversaryModel::Passive, BepKind::QpskApprox, qpsk),
            ("chernoff", 1, 0.0, AdversaryModel::Passive, BepKind::Chernoff, |d, s, t| {
                allocate_chernoff(d, s, t).unwrap()
            }),
        ];
        let sigma2 = 0.01;
        for (ci, (name, e, ifactor, model, kind, alloc)) in cases.into_iter().enumerate() {
            let mut rng = RandomStream::new(500 + ci as u64);
            let ab = uniform_in(&mut rng, 0.5, 2.0);
            let ae: Vec<f64> = (0..e).map(|_| uniform_in(&mut rng, 0.5, 2.0)).collect();
            let s = FadingScenario::new(sigma2, ab, ae).unwrap().with_interference(ifactor * sigma2).unwrap();
            let (mut feasible, mut draws) = (0, 0u64);
            while feasible < 10_000 {
                draws += 1;
                ensure(draws < 10_000_000, || format!("{name}: too few feasible draws"))?;
                let t1 = uniform_in(&mut rng, 0.005, 0.2);
                let th = Thresholds::new(t1, T2).unwrap();
                let d = draw_channels(&s, &mut rng);
                let Some(p) = alloc(&d, &s, &th).power() else { continue };
                feasible += 1;
                let at = received_beps(&d, &s, model, kind, p).unwrap();
                ensure(at.satisfies(&th, 1e-9), || format!("{name}: BEPs {at:?} at p={p} miss t1={t1}"))?;
                let below = received_beps(&d, &s, model, kind, p * (1.0 - 1e-6)).unwrap();
                ensure(below.legitimate > t1, || format!("{name}: p not minimal at t1={t1}"))?;
            }
        }
        Ok("6 allocators x 1e4 feasible draws: thresholds met within 1e-9, p(1-1e-6) violates t1".into())
    }

    fn c6(&self) -> Outcome {
        let th = Thresholds::new(0.01, T2).unwrap();
        let f = th.factors();
        let sigma2 = 0.01;
        let h = 1e-4;
        let mut rng = RandomStream::new(6);
        let mut max_leak = 0.0_f64;
        let mut min_margin = f64::INFINITY;
        for k in 0..100 {
            let e = 1 + k % 3;
            let s = FadingScenario::new(sigma2, 1.0, [1.0, 0.9, 0.8][..e].to_vec())
                .unwrap()
                .with_antennas(4)
                .unwrap();
            let d = draw_channels(&s, &mut rng);
            let sol = solve_power_pair(&d, &s, &th).unwrap();
            let leak = d
                .h_b
                .iter()
                .zip(&sol.beams.w_an)
                .fold((0.0, 0.0), |(re, im), (x, w)| (re + x.re * w.re + x.im * w.im, im + x.re * w.im - x.im * w.re));
            max_leak = max_leak.max(leak.0.hypot(leak.1));
            let g = &sol.gains;
            let feasible = |pd: f64, pan: f64| {
                g.legit * pd >= sigma2 * f.q1_sq * (1.0 - 1e-12)
                    && g.data.iter().zip(&g.noise).all(|(&gd, &gn)| gd * pd <= f.q2_sq * (sigma2 + gn * pan) * (1.0 + 1e-12))
            };
            ensure(sol.feasible && feasible(sol.p_d, sol.p_an), || format!("draw {k}: solution infeasible"))?;
            // Brute-force the lattice: for each p_d, the smallest feasible p_an.
            let total = sol.total_power();
            let mut best = f64::INFINITY;
            let limit = (total / h).ceil() as usize + 1;
            for i in 0..=limit {
                let pd = i as f64 * h;
                for j in 0..=limit {
                    let pan = j as f64 * h;
                    if pd + pan >= best {
                        break;
                    }
                    if feasible(pd, pan) {
                        best = pd + pan;
                        break;
                    }
                }
            }
            ensure(best >= total * (1.0 - 1e-12), || format!("draw {k}: grid {best} beats {total}"))?;
            min_margin = min_margin.min(best - total);
        }
        ensure(max_leak < 1e-10, || format!("null-space leakage {max_leak:.2e}"))?;
        Ok(format!("100 draws (M=4, E=1..3): grid never better (min margin {min_margin:.2e}); max leakage {max_leak:.1e}"))
    }

    fn c7(&self) -> Outcome {
        let cfg = Config::default();
        let out = run_figure(Figure::SecrecyRate, &Context::new(&cfg)).map_err(|e| e.to_string())?;
        let c = out.check("rate at 1e4 sigma2 within 1% of saturation bound").unwrap();
        ensure(c.passed, || c.detail.clone())?;
        Ok(c.detail.clone())
    }

    fn c8(&self) -> Outcome {
        let mut cfg = Config::default();
        cfg.trials = SWEEP_TRIALS;
        let ctx = Context::new(&cfg);
        let mut n = 0;
        for fig in [
            Figure::Power,
            Figure::Outage,
            Figure::CooperativePower,
            Figure::CooperativeOutage,
            Figure::Coded,
            Figure::Beamforming,
        ] {
            let out: FigureOutput = run_figure(fig, &ctx).map_err(|e| e.to_string())?;
            ensure(out.table.rows().len() >= 10, || format!("{} sweep has fewer than 10 points", fig.name()))?;
            for c in out.checks.iter().filter(|c| !c.name.contains("halfwidths")) {
                ensure(c.passed, || format!("{}: {} ({})", fig.name(), c.name, c.detail))?;
                n += 1;
            }
        }
        Ok(format!("{n} trend checks over figs 3-8 at {SWEEP_TRIALS} trials per point"))
    }

    fn c9(&self) -> Outcome {
        let mut cfg = Config::default();
        cfg.trials = SWEEP_TRIALS;
        let ctx = Context::new(&cfg);
        let mut lines = Vec::new();
        let mut ok = true;
        for (name, res) in [("fig9", fig9_curves(&ctx)), ("fig10", fig10_curves(&ctx))] {
            let (_, curves) = res.map_err(|e| e.to_string())?;
            let at = |target: f64| {
                let p = bepsec::figures::crossing_db(&curves.proposed, target);
                let b = bepsec::figures::crossing_db(&curves.baseline, target);
                match (p, b) {
                    (Some(p), Some(b)) => format!("{target:.0e}: {p:.2}/{b:.2} dB gap {:.2}", b - p),
                    _ => format!("{target:.0e}: not reached"),
                }
            };
            let gap = curves.gap_db();
            ok &= gap.is_some_and(|g| g >= 5.0);
            lines.push(format!(
                "{name} gap {} [proposed/baseline at BEP {}; {}; {}; {}]",
                gap.map_or("n/a".into(), |g| format!("{g:.2} dB")),
                at(1e-3),
                at(1e-2),
                at(1e-4),
                at(1e-5)
            ));
        }
        let detail = lines.join("; ");
        if ok {
            Ok(detail)
        } else {
            Err(format!("measured gap below 5 dB: {detail}"))
        }
    }

    fn c10(&self) -> Outcome {
        let mut worst = 0.0_f64;
        let mut k = 0;
        for (n, t) in [(7u32, 1u32), (63, 1), (15, 2)] {
            let code = BlockCodeParams::new(n, t).unwrap();
            for p in [0.01, 0.05, 0.1] {
                let exact = block_fail_prob(p, &code).unwrap();
                let mc = block_fail_monte_carlo_with(&self.runner, p, &code, 10_000_000, &RandomStream::new(1000 + k))
                    .unwrap();
                k += 1;
                let dev = (mc.estimate() - exact).abs() / mc.std_error();
                worst = worst.max(dev);
                ensure(dev <= 3.0, || format!("(n={n}, t={t}, p={p}): {exact:.6} vs {:.6}", mc.estimate()))?;
            }
        }
        Ok(format!("9 cases at 1e7 blocks, worst deviation {worst:.2} standard errors"))
    }

    fn c11(&self) -> Outcome {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let bin = env!("CARGO_BIN_EXE_bepsec");
        let run = |args: &[&str], file: &str| -> Result<Vec<u8>, String> {
            let path = dir.path().join(file);
            let status = Command::new(bin)
                .args(args)
                .arg("--out")
                .arg(&path)
                .stderr(std::process::Stdio::null())
                .status()
                .map_err(|e| e.to_string())?;
            ensure(status.success(), || format!("{args:?} exited with {status}"))?;
            std::fs::read(&path).map_err(|e| e.to_string())
        };
        let mut checked = Vec::new();
        for fig in ["fig1", "fig4", "fig7"] {
            let args = [fig, "--seed", "77", "--trials", "40000"];
            let a = run(&[&args[..], &["--workers", "1"]].concat(), &format!("{fig}-a.csv"))?;
            let b = run(&[&args[..], &["--workers", "1"]].concat(), &format!("{fig}-b.csv"))?;
            let c = run(&[&args[..], &["--workers", "8"]].concat(), &format!("{fig}-c.csv"))?;
            ensure(a == b, || format!("{fig}: repeated runs differ"))?;
            ensure(a == c, || format!("{fig}: 1 vs 8 workers differ"))?;
            checked.push(format!("{fig} ({} bytes)", a.len()));
        }
        Ok(format!("byte-identical across repeats and 1 vs 8 workers: {}", checked.join(", ")))
    }
}

fn main() -> ExitCode {
    let h = Harness {
        runner: Threaded::new(std::thread::available_parallelism().map_or(1, |n| n.get())),
    };
    let criteria: [(&str, fn(&Harness) -> Outcome); 11] = [
        ("single-adversary outage vs Monte Carlo", Harness::c1),
        ("multi-adversary outage vs Monte Carlo", Harness::c2),
        ("unknown-mode outage vs Monte Carlo", Harness::c3),
        ("MRC outage vs Monte Carlo and dedicated forms", Harness::c4),
        ("allocator thresholds and minimality", Harness::c5),
        ("beamforming power pair vs grid search", Harness::c6),
        ("secrecy-rate saturation", Harness::c7),
        ("trend claims", Harness::c8),
        ("power gap at BEP 1e-3", Harness::c9),
        ("block failure vs bit-flip Monte Carlo", Harness::c10),
        ("determinism", Harness::c11),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f(&h);
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
