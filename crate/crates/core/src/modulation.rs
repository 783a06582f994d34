//! Per-realization error probabilities for coherent detection in AWGN.
//!
//! Power and energy per symbol are treated as the same quantity, so the SNR
//! argument is simply `gain * P / noise`.

use crate::error::domain;
use crate::special_math::{chernoff_q, q_finite};
use crate::Result;

fn check_snr(snr: f64) -> Result<()> {
    if snr.is_nan() || snr < 0.0 {
        Err(domain("snr", snr))
    } else {
        Ok(())
    }
}

/// BPSK bit error probability `Q(√snr)`.
pub fn bep_bpsk(snr: f64) -> Result<f64> {
    check_snr(snr)?;
    Ok(q_finite(libm::sqrt(snr)))
}

/// QPSK symbol error probability `2Q(√(snr/2)) − Q(√(snr/2))²`.
pub fn sep_qpsk(snr: f64) -> Result<f64> {
    check_snr(snr)?;
    let q = q_finite(libm::sqrt(0.5 * snr));
    Ok(2.0 * q - q * q)
}

/// QPSK bit error probability under Gray mapping.
///
/// With `approx == false` this is `SEP / 2`; with `approx == true` the
/// second-order term is dropped, leaving `Q(√(snr/2))`.
pub fn bep_qpsk(snr: f64, approx: bool) -> Result<f64> {
    check_snr(snr)?;
    let q = q_finite(libm::sqrt(0.5 * snr));
    Ok(if approx { q } else { q - 0.5 * q * q })
}

/// Union-style upper bound `Q(d_min / 2σ)` on the symbol error probability.
pub fn sep_min_distance_bound(d_min: f64, sigma: f64) -> Result<f64> {
    if !(d_min > 0.0) || d_min.is_nan() {
        return Err(domain("d_min", d_min));
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(domain("sigma", sigma));
    }
    if d_min.is_infinite() {
        return Ok(0.0);
    }
    Ok(q_finite(d_min / (2.0 * sigma)))
}

/// Chernoff-bounded BPSK bit error probability `exp(−snr/2) / 2`.
pub fn bep_chernoff_bpsk(snr: f64) -> Result<f64> {
    check_snr(snr)?;
    chernoff_q(libm::sqrt(snr))
}

/// Error-probability model selectable at run time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ErrorModel {
    /// Exact BPSK.
    BpskExact,
    /// Exact Gray-mapped QPSK bit error probability.
    QpskExact,
    /// QPSK with the second-order term dropped.
    QpskApprox,
    /// Minimum-distance bound for a constellation whose minimum distance is
    /// `d_min` at unit transmit power (so `d_min = 2` reproduces BPSK).
    MinDistance {
        /// Minimum Euclidean distance at unit power.
        d_min: f64,
    },
    /// Chernoff bound applied to BPSK.
    ChernoffBpsk,
}

impl ErrorModel {
    /// Error probability at the given SNR.
    pub fn error_probability(&self, snr: f64) -> Result<f64> {
        match *self {
            ErrorModel::BpskExact => bep_bpsk(snr),
            ErrorModel::QpskExact => bep_qpsk(snr, false),
            ErrorModel::QpskApprox => bep_qpsk(snr, true),
            ErrorModel::MinDistance { d_min } => {
                check_snr(snr)?;
                if !(d_min > 0.0) {
                    return Err(domain("d_min", d_min));
                }
                Ok(q_finite(0.5 * d_min * libm::sqrt(snr)))
            }
            ErrorModel::ChernoffBpsk => bep_chernoff_bpsk(snr),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special_math::q_inv;

    #[test]
    fn zero_snr_values() {
        assert_eq!(bep_bpsk(0.0).unwrap(), 0.5);
        assert_eq!(sep_qpsk(0.0).unwrap(), 0.75);
        assert_eq!(bep_qpsk(0.0, false).unwrap(), 0.375);
        assert_eq!(bep_qpsk(0.0, true).unwrap(), 0.5);
    }

    #[test]
    fn negative_snr_rejected() {
        assert!(bep_bpsk(-1.0).is_err());
        assert!(sep_qpsk(-1e-9).is_err());
        assert!(bep_qpsk(f64::NAN, true).is_err());
    }

    #[test]
    fn bpsk_at_inverse_threshold() {
        let x = q_inv(0.05).unwrap();
        assert!((x * x - 2.7055).abs() < 1e-4);
        assert!((bep_bpsk(x * x).unwrap() - 0.05).abs() < 1e-6);
    }

    #[test]
    fn vanishing_tail() {
        assert!(sep_qpsk(1e4).unwrap() < 1e-300);
        assert_eq!(sep_min_distance_bound(f64::INFINITY, 1.0).unwrap(), 0.0);
        assert!(sep_min_distance_bound(1e3, 1.0).unwrap() < 1e-100);
    }

    #[test]
    fn min_distance_matches_threshold_and_bpsk() {
        let sigma = 0.3;
        let d = 2.0 * sigma * q_inv(0.05).unwrap();
        assert!((sep_min_distance_bound(d, sigma).unwrap() - 0.05).abs() < 1e-12);

        let (p, s2) = (0.04_f64, 0.01_f64);
        let bound = sep_min_distance_bound(2.0 * p.sqrt(), s2.sqrt()).unwrap();
        assert!((bound - bep_bpsk(p / s2).unwrap()).abs() < 1e-15);
        let model = ErrorModel::MinDistance { d_min: 2.0 };
        assert!((model.error_probability(p / s2).unwrap() - bound).abs() < 1e-15);
    }

    #[test]
    fn min_distance_rejects_nonpositive() {
        assert!(sep_min_distance_bound(0.0, 1.0).is_err());
        assert!(sep_min_distance_bound(1.0, 0.0).is_err());
    }
}
