//! Simulation and analysis toolkit for GNSS signal authentication by
//! wiretap coding and artificial noise (AN).
//!
//! The satellite superimposes on the navigation signal an orthogonal,
//! synchronous authentication signal corrupted by AN. The AN samples are
//! later revealed over an authenticated side channel so that the legitimate
//! receiver can cancel them, while an attacker observing the signal live
//! cannot. The modules cover waveform synthesis, the AN quantizer, a Monte
//! Carlo model of both protocol phases, secrecy-capacity and
//! finite-blocklength analysis, and attack-success metrics.

pub mod attacks;
pub mod capacity;
pub mod checks;
pub mod config;
pub mod curve;
pub mod error;
pub mod experiments;
pub mod fbl;
pub mod modulation;
pub mod numeric;
pub mod protocol_sim;
pub mod quantizer;
pub mod scene;
pub mod special;
pub mod waveforms;

pub use error::{Error, Result};
pub use curve::BoundCurve;
pub use modulation::Modulation;
pub use scene::ChannelScene;

/// Decibels to linear power; `-inf` dB maps to zero.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Linear power to decibels.
pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}
