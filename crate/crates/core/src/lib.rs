//! Power allocation for physical-layer security driven by bit error
//! probability (BEP) thresholds instead of a secrecy-rate target.
//!
//! The legitimate receiver must see a BEP no larger than `t1` while every
//! adversary must see a BEP no smaller than `t2`. For Rayleigh fading the
//! minimum transmit power, its feasibility condition and the resulting
//! outage probability all have closed forms; this crate implements them for
//! a single adversary, several passive adversaries, adversaries of unknown
//! mode and MRC-cooperating adversaries, together with null-space artificial
//! noise beamforming and a block-code threshold transformation.
//!
//! Every analytic outage has a Monte Carlo counterpart driven by a
//! counter-based splittable random stream, so results are reproducible
//! regardless of how trials are scheduled.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]
#![deny(missing_docs)]

extern crate alloc;

mod error;
pub use error::Error;

pub mod allocation;
pub mod beamforming;
pub mod channel;
pub mod coding;
pub mod modulation;
pub mod montecarlo;
pub mod outage;
pub mod special_math;

/// Result alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;
