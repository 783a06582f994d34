//! Experiment configuration: one TOML file, every key optional, unknown keys
//! rejected.

use std::fmt::Write as _;
use std::path::Path;

use bepsec_core::allocation::Thresholds;
use bepsec_core::channel::{path_loss_from_db, FadingScenario};
use bepsec_core::coding::BlockCodeParams;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Configuration problems detected before any run.
#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid value for `{key}`: {reason}")]
    Invalid { key: &'static str, reason: String },
}

fn invalid(key: &'static str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        key,
        reason: reason.into(),
    }
}

/// Spacing of a sweep grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
}

/// `points` values from `start` to `stop` inclusive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    #[serde(default = "Grid::default_spacing")]
    pub spacing: Spacing,
}

impl Grid {
    fn default_spacing() -> Spacing {
        Spacing::Linear
    }

    pub fn new(start: f64, stop: f64, points: usize, spacing: Spacing) -> Self {
        Grid {
            start,
            stop,
            points,
            spacing,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        if n == 1 {
            return vec![self.start];
        }
        (0..n)
            .map(|i| {
                let f = i as f64 / (n - 1) as f64;
                if i == n - 1 {
                    return self.stop;
                }
                match self.spacing {
                    Spacing::Linear => self.start + f * (self.stop - self.start),
                    Spacing::Log => (self.start.ln() + f * (self.stop.ln() - self.start.ln())).exp(),
                }
            })
            .collect()
    }

    fn check(&self, key: &'static str, lo: f64, hi: f64) -> Result<(), ConfigError> {
        if self.points == 0 {
            return Err(invalid(key, "grid has no points"));
        }
        for v in [self.start, self.stop] {
            if !(v.is_finite() && v >= lo && v <= hi) {
                return Err(invalid(key, format!("{v} outside [{lo}, {hi}]")));
            }
        }
        if self.spacing == Spacing::Log && (self.start <= 0.0 || self.stop <= 0.0) {
            return Err(invalid(key, "log spacing needs positive end points"));
        }
        Ok(())
    }
}

/// All experiment parameters. Defaults follow the simulation table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    pub seed: u64,
    pub trials: u64,
    /// Worker threads; 0 uses the available parallelism. Results do not
    /// depend on it, so it is left out of the config hash.
    #[serde(skip_serializing)]
    pub workers: usize,

    pub sigma2: f64,
    pub alpha_b: f64,
    /// Adversary path losses (linear amplitude). Sweeps over `E` use the
    /// first `E` entries.
    pub alpha_e: Vec<f64>,
    /// Alternative to `alpha_e`, as power attenuation in dB.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_e_db: Option<Vec<f64>>,
    /// Jamming power seen by the legitimate receiver in unknown mode.
    pub interference: f64,
    pub antennas: usize,

    pub t2: f64,
    pub t1_grid: Grid,
    pub coded_t1_grid: Grid,
    pub code_n: u32,
    pub code_t: u32,

    /// Transmit power grid in dB relative to `sigma2` for the secrecy-rate
    /// and BEP-vs-power curves.
    pub power_db_grid: Grid,
    /// Fixed channel power gains used for those curves.
    pub curve_gain_b: f64,
    pub curve_gain_e: f64,

    pub r_min: f64,
    /// Legitimate BEP targets traced by the proposed allocator in the power
    /// comparison.
    pub bep_grid: Grid,
    /// Transmit budgets (dB relative to `sigma2`) for the secrecy-rate design
    /// in the power comparison.
    pub baseline_power_db_grid: Grid,
    /// Legitimate BEP at which the power gap is measured.
    pub gap_bep: f64,

    /// Legitimate thresholds of the analytic-vs-Monte-Carlo report grid.
    pub report_t1: Vec<f64>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            seed: 20_240_917,
            trials: 1_000_000,
            workers: 0,
            sigma2: 0.01,
            alpha_b: 1.0,
            alpha_e: vec![1.0, 0.9, 0.8],
            alpha_e_db: None,
            interference: 0.01,
            antennas: 4,
            t2: 0.05,
            t1_grid: Grid::new(0.005, 0.2, 12, Spacing::Log),
            coded_t1_grid: Grid::new(0.001, 0.025, 10, Spacing::Log),
            code_n: 63,
            code_t: 1,
            power_db_grid: Grid::new(-10.0, 50.0, 31, Spacing::Linear),
            curve_gain_b: 1.0,
            curve_gain_e: 0.5,
            r_min: 2.0,
            bep_grid: Grid::new(1e-1, 1e-5, 17, Spacing::Log),
            baseline_power_db_grid: Grid::new(-5.0, 40.0, 46, Spacing::Linear),
            gap_bep: 1e-3,
            report_t1: vec![0.01, 0.05, 0.1],
        }
    }
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let table: toml::Table = text.parse()?;
        if table.contains_key("alpha_e") && table.contains_key("alpha_e_db") {
            return Err(invalid("alpha_e_db", "give either alpha_e or alpha_e_db"));
        }
        let mut cfg: Config = table.try_into()?;
        if let Some(db) = cfg.alpha_e_db.take() {
            cfg.alpha_e = db.into_iter().map(path_loss_from_db).collect();
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.trials == 0 {
            return Err(invalid("trials", "must be positive"));
        }
        self.scenario(self.alpha_e.len())
            .map_err(|e| invalid("scenario", e.to_string()))?;
        if self.antennas < 2 {
            return Err(invalid("antennas", "beamforming needs at least 2"));
        }
        Thresholds::new(0.25, self.t2).map_err(|_| invalid("t2", "must lie in (0, 0.5)"))?;
        self.t1_grid.check("t1_grid", f64::MIN_POSITIVE, 0.5 - 1e-12)?;
        self.coded_t1_grid.check("coded_t1_grid", f64::MIN_POSITIVE, 0.5 - 1e-12)?;
        self.bep_grid.check("bep_grid", f64::MIN_POSITIVE, 0.5 - 1e-12)?;
        self.power_db_grid.check("power_db_grid", -200.0, 200.0)?;
        self.baseline_power_db_grid.check("baseline_power_db_grid", -200.0, 200.0)?;
        for (t1, key) in self
            .t1_grid
            .values()
            .into_iter()
            .map(|t| (t, "t1_grid"))
            .chain(self.coded_t1_grid.values().into_iter().map(|t| (t, "coded_t1_grid")))
            .chain(self.bep_grid.values().into_iter().map(|t| (t, "bep_grid")))
        {
            if !(t1 > 0.0 && t1 < 0.5) {
                return Err(invalid(key, format!("threshold {t1} outside (0, 0.5)")));
            }
        }
        BlockCodeParams::new(self.code_n, self.code_t)
            .map_err(|e| invalid("code_n/code_t", e.to_string()))?;
        if !(self.interference.is_finite() && self.interference >= 0.0) {
            return Err(invalid("interference", "must be finite and non-negative"));
        }
        for (key, v) in [("curve_gain_b", self.curve_gain_b), ("curve_gain_e", self.curve_gain_e), ("r_min", self.r_min)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(key, "must be finite and positive"));
            }
        }
        if !(self.gap_bep > 0.0 && self.gap_bep < 0.5) {
            return Err(invalid("gap_bep", "must lie in (0, 0.5)"));
        }
        for &t1 in &self.report_t1 {
            if !(t1 > 0.0 && t1 < 0.5) {
                return Err(invalid("report_t1", format!("threshold {t1} outside (0, 0.5)")));
            }
        }
        Ok(())
    }

    /// Single-antenna scenario with the first `adversaries` path losses.
    pub fn scenario(&self, adversaries: usize) -> bepsec_core::Result<FadingScenario> {
        let full = FadingScenario::new(self.sigma2, self.alpha_b, self.alpha_e.clone())?;
        full.with_adversary_count(adversaries)
    }

    pub fn max_adversaries(&self) -> usize {
        self.alpha_e.len()
    }

    pub fn thresholds(&self, t1: f64) -> bepsec_core::Result<Thresholds> {
        Thresholds::new(t1, self.t2)
    }

    pub fn code(&self) -> BlockCodeParams {
        BlockCodeParams::new(self.code_n, self.code_t).expect("validated")
    }

    /// Canonical TOML rendering of the resolved configuration.
    pub fn canonical(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// First 16 hex digits of the SHA-256 of [`Config::canonical`].
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.canonical().as_bytes());
        let mut out = String::with_capacity(16);
        for b in &digest[..8] {
            write!(out, "{b:02x}").unwrap();
        }
        out
    }

    pub fn worker_count(&self) -> usize {
        if self.workers > 0 {
            self.workers
        } else {
            std::thread::available_parallelism().map_or(1, |n| n.get())
        }
    }
}
