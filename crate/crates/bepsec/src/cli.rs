//! Command-line front end.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::config::Config;
use crate::figures::{run_figure, Context, Figure};
use crate::report::run_report;
use crate::table::Table;
use crate::Error;

/// Exit status when a check or the report grid fails.
pub const EXIT_CHECK_FAILED: u8 = 1;
/// Exit status for invalid configuration or usage.
pub const EXIT_INVALID: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "bepsec", version, about = "BEP-driven secure power allocation experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// TOML configuration file; missing keys take their defaults.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Overrides the configured Monte Carlo trials per sweep point.
    #[arg(long, global = true)]
    pub trials: Option<u64>,
    /// Output CSV path (stdout when absent).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads (0 = all cores). Does not change results.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Secrecy rate versus transmit power at fixed gains.
    Fig1,
    /// Legitimate and adversary BEP versus transmit power at fixed gains.
    Fig2,
    /// Mean optimal power versus t1 for one to E passive adversaries.
    Fig3,
    /// Outage versus t1 for one to E passive adversaries.
    Fig4,
    /// Mean optimal power, MRC versus unknown-mode adversaries.
    Fig5,
    /// Outage, MRC versus unknown-mode adversaries.
    Fig6,
    /// Coded versus uncoded outage.
    Fig7,
    /// Beamformed versus single-antenna outage.
    Fig8,
    /// Power gap to the secrecy-rate design, single antenna.
    Fig9,
    /// Power gap to the secrecy-rate design, antenna array.
    Fig10,
    /// Analytic versus Monte Carlo outage over the validation grid.
    Report {
        /// Scales the legitimate rate in the closed forms, to confirm the
        /// grid detects a wrong formula.
        #[arg(long, default_value_t = 1.0)]
        perturb_legit_rate: f64,
    },
}

impl Command {
    fn figure(&self) -> Option<Figure> {
        let n = match self {
            Command::Fig1 => 1,
            Command::Fig2 => 2,
            Command::Fig3 => 3,
            Command::Fig4 => 4,
            Command::Fig5 => 5,
            Command::Fig6 => 6,
            Command::Fig7 => 7,
            Command::Fig8 => 8,
            Command::Fig9 => 9,
            Command::Fig10 => 10,
            Command::Report { .. } => return None,
        };
        Figure::from_number(n)
    }
}

fn load_config(cli: &Cli) -> Result<Config, Error> {
    let mut cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(t) = cli.trials {
        cfg.trials = t;
    }
    if let Some(w) = cli.workers {
        cfg.workers = w;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn write_table(table: &Table, out: Option<&PathBuf>) -> Result<(), Error> {
    match out {
        Some(path) => {
            let mut f = BufWriter::new(File::create(path)?);
            table.write_to(&mut f)?;
            f.flush()?;
        }
        None => table.write_to(io::stdout().lock())?,
    }
    Ok(())
}

/// Runs a parsed command; returns whether every check passed.
pub fn execute(cli: &Cli) -> Result<bool, Error> {
    let cfg = load_config(cli)?;
    let ctx = Context::new(&cfg);
    if let Some(fig) = cli.command.figure() {
        let output = run_figure(fig, &ctx)?;
        write_table(&output.table, cli.out.as_ref())?;
        for c in &output.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            eprintln!("{status} {}: {} ({})", fig.name(), c.name, c.detail);
        }
        return Ok(output.passed());
    }
    let Command::Report { perturb_legit_rate } = cli.command else {
        unreachable!()
    };
    let report = run_report(&ctx, perturb_legit_rate)?;
    write_table(&report.table, cli.out.as_ref())?;
    eprintln!(
        "report: {} of {} cells within 3 halfwidths",
        report.cells.len() - report.failures(),
        report.cells.len()
    );
    Ok(report.failures() == 0)
}

pub fn main_with(args: impl IntoIterator<Item = std::ffi::OsString>) -> ExitCode {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INVALID } else { 0 });
        }
    };
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_CHECK_FAILED),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INVALID)
        }
    }
}
