//! Rayleigh-fading scenario description and channel realizations.
//!
//! Path losses are linear amplitude factors: a user with path loss `α` and
//! fading coefficient `h` receives power `α²|h|²P`.

mod stream;

pub use stream::RandomStream;

use alloc::vec::Vec;
use num_complex::Complex64;

use crate::error::{domain, Error};
use crate::Result;

/// Converts a path loss in dB to the linear amplitude factor `α`, with
/// `α² = 10^(-dB/10)`.
pub fn path_loss_from_db(db: f64) -> f64 {
    libm::pow(10.0, -db / 20.0)
}

/// Static parameters of one transmitter, one legitimate receiver and `E`
/// adversaries.
#[derive(Debug, Clone, PartialEq)]
pub struct FadingScenario {
    sigma2: f64,
    alpha_b: f64,
    alpha_e: Vec<f64>,
    interference: f64,
    antennas: usize,
}

fn positive(what: &'static str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(domain(what, v))
    }
}

impl FadingScenario {
    /// Single-antenna scenario without interference.
    pub fn new(sigma2: f64, alpha_b: f64, alpha_e: Vec<f64>) -> Result<Self> {
        positive("sigma2", sigma2)?;
        positive("alpha_b", alpha_b)?;
        if alpha_e.is_empty() {
            return Err(Error::Empty("alpha_e"));
        }
        for &a in &alpha_e {
            positive("alpha_e", a)?;
        }
        Ok(FadingScenario {
            sigma2,
            alpha_b,
            alpha_e,
            interference: 0.0,
            antennas: 1,
        })
    }

    /// Sets the interference power seen by the legitimate receiver when the
    /// adversaries' modes are unknown.
    pub fn with_interference(mut self, interference: f64) -> Result<Self> {
        if !(interference.is_finite() && interference >= 0.0) {
            return Err(domain("interference", interference));
        }
        self.interference = interference;
        Ok(self)
    }

    /// Sets the number of transmit antennas.
    pub fn with_antennas(mut self, antennas: usize) -> Result<Self> {
        if antennas == 0 {
            return Err(domain("antennas", 0.0));
        }
        self.antennas = antennas;
        Ok(self)
    }

    /// Same scenario restricted to the first `count` adversaries.
    pub fn with_adversary_count(&self, count: usize) -> Result<Self> {
        if count == 0 || count > self.alpha_e.len() {
            return Err(Error::AdversaryIndex {
                index: count,
                count: self.alpha_e.len(),
            });
        }
        let mut s = self.clone();
        s.alpha_e.truncate(count);
        Ok(s)
    }

    /// Noise power `σ²`.
    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    /// Legitimate path loss `α_B`.
    pub fn alpha_b(&self) -> f64 {
        self.alpha_b
    }

    /// Adversary path losses `α_e`.
    pub fn alpha_e(&self) -> &[f64] {
        &self.alpha_e
    }

    /// Interference power `I`.
    pub fn interference(&self) -> f64 {
        self.interference
    }

    /// Number of transmit antennas `M`.
    pub fn antennas(&self) -> usize {
        self.antennas
    }

    /// Number of adversaries `E`.
    pub fn adversaries(&self) -> usize {
        self.alpha_e.len()
    }

    pub(crate) fn require_single_antenna(&self) -> Result<()> {
        if self.antennas == 1 {
            Ok(())
        } else {
            Err(Error::Misuse("operation is defined for a single-antenna transmitter"))
        }
    }
}

/// One realization of every channel in a scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelDraw {
    /// Legitimate channel, one entry per transmit antenna.
    pub h_b: Vec<Complex64>,
    /// Adversary channels, one vector per adversary.
    pub h_e: Vec<Vec<Complex64>>,
}

impl ChannelDraw {
    /// Single-antenna draw from explicit coefficients.
    pub fn scalar(h_b: Complex64, h_e: &[Complex64]) -> Self {
        ChannelDraw {
            h_b: alloc::vec![h_b],
            h_e: h_e.iter().map(|&h| alloc::vec![h]).collect(),
        }
    }

    /// Single-antenna draw whose coefficients have the given power gains
    /// `|h|²` and zero phase.
    pub fn from_power_gains(gain_b: f64, gains_e: &[f64]) -> Self {
        let real = |g: f64| Complex64::new(libm::sqrt(g), 0.0);
        ChannelDraw {
            h_b: alloc::vec![real(gain_b)],
            h_e: gains_e.iter().map(|&g| alloc::vec![real(g)]).collect(),
        }
    }

    /// Effective legitimate power gain `α_B²‖h_B‖²`.
    pub fn legit_gain(&self, scenario: &FadingScenario) -> f64 {
        scenario.alpha_b * scenario.alpha_b * norm_sqr(&self.h_b)
    }

    /// Effective power gain `α_e²‖h_e‖²` of adversary `e`.
    pub fn adversary_gain(&self, scenario: &FadingScenario, e: usize) -> Result<f64> {
        let h = self.h_e.get(e).ok_or(Error::AdversaryIndex {
            index: e,
            count: self.h_e.len(),
        })?;
        let a = scenario
            .alpha_e
            .get(e)
            .ok_or(Error::AdversaryIndex {
                index: e,
                count: scenario.alpha_e.len(),
            })?;
        Ok(a * a * norm_sqr(h))
    }

    /// Effective power gains of all adversaries.
    pub fn adversary_gains(&self, scenario: &FadingScenario) -> Result<Vec<f64>> {
        if self.h_e.len() != scenario.adversaries() {
            return Err(Error::Misuse("draw and scenario disagree on adversary count"));
        }
        (0..self.h_e.len())
            .map(|e| self.adversary_gain(scenario, e))
            .collect()
    }
}

pub(crate) fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|h| h.norm_sqr()).sum()
}

/// Draws every channel coefficient i.i.d. `CN(0, 1)`.
pub fn draw_channels(scenario: &FadingScenario, stream: &mut RandomStream) -> ChannelDraw {
    let m = scenario.antennas;
    let mut vector = || (0..m).map(|_| stream.complex_gaussian()).collect::<Vec<_>>();
    let h_b = vector();
    let h_e = (0..scenario.adversaries()).map(|_| vector()).collect();
    ChannelDraw { h_b, h_e }
}

/// A receiver in the scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Receiver {
    /// The legitimate user.
    Legitimate,
    /// Adversary with the given index.
    Adversary(usize),
}

/// Received SNR of a single-antenna link at transmit power `power`.
///
/// The legitimate receiver's noise floor includes the scenario's interference
/// power; adversaries see `σ²` only.
pub fn snr_of(
    draw: &ChannelDraw,
    scenario: &FadingScenario,
    power: f64,
    who: Receiver,
) -> Result<f64> {
    if !(power >= 0.0) {
        return Err(domain("power", power));
    }
    match who {
        Receiver::Legitimate => {
            Ok(draw.legit_gain(scenario) * power / (scenario.sigma2 + scenario.interference))
        }
        Receiver::Adversary(e) => Ok(draw.adversary_gain(scenario, e)? * power / scenario.sigma2),
    }
}
