//! Eavesdropper calculators.
//!
//! Alice decodes with the SFG receiver, Eve with a classical heterodyne
//! receiver on the same link geometry.

use num_complex::Complex64;
use rand::Rng;

use super::bounds::bound_at_snr;
use super::AnalyticsError;
use crate::link::{AlphabetKind, ChannelParams};
use crate::receivers::{HeterodyneReceiver, ReceiverKind};

/// Ratio of Alice's (SFG) to Eve's (heterodyne) BPSK error exponent.
pub fn eve_exponent_ratio() -> f64 {
    let alice = bound_at_snr(ReceiverKind::Sfg, AlphabetKind::Bpsk, 1.0);
    let eve = bound_at_snr(ReceiverKind::Heterodyne, AlphabetKind::Bpsk, 1.0);
    match (alice, eve) {
        (Ok(a), Ok(e)) => a.exponent / e.exponent,
        _ => unreachable!("BPSK bounds exist for both receivers"),
    }
}

/// Exponent multiplier when a divider keeps `fraction_kept` of the return
/// power (the effective `η` scales by the same factor).
pub fn power_divider_penalty(fraction_kept: f64) -> Result<f64, AnalyticsError> {
    if !(fraction_kept > 0.0 && fraction_kept <= 1.0) {
        return Err(AnalyticsError::FractionOutOfRange(fraction_kept));
    }
    Ok(fraction_kept)
}

/// Per-codeword phase offset applied by the transmitter, unknown to Eve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhaseDefense {
    Fixed(f64),
    Uniform,
    /// `0` or `π` with equal probability.
    Binary,
}

impl PhaseDefense {
    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            PhaseDefense::Fixed(theta) => theta,
            PhaseDefense::Uniform => rng.random_range(0.0..std::f64::consts::TAU),
            PhaseDefense::Binary => {
                if rng.random_bool(0.5) {
                    std::f64::consts::PI
                } else {
                    0.0
                }
            }
        }
    }
}

pub const EVE_MIN_TRIALS: u64 = 10_000;

/// Monte Carlo BER of a heterodyne Eve decoding BPSK when every codeword
/// carries a phase offset drawn from `defense`. Heterodyne detection is
/// phase covariant, so an offset `θ` rotates the outcome by `e^{-iθ}`.
pub fn eve_random_phase_ber<R: Rng>(
    eta: f64,
    n_s: f64,
    m: u64,
    n_z: f64,
    trials: u64,
    defense: PhaseDefense,
    rng: &mut R,
) -> Result<f64, AnalyticsError> {
    if trials < EVE_MIN_TRIALS {
        return Err(AnalyticsError::TooFewTrials {
            min: EVE_MIN_TRIALS,
            got: trials,
        });
    }
    let cp = ChannelParams::new(eta, 0.0, n_z, m, n_s)?;
    let alphabet = crate::link::Alphabet::bpsk(eta)?;
    let rx = HeterodyneReceiver::new(&cp, &alphabet)?;
    let mut errors = 0u64;
    for _ in 0..trials {
        let bit = rng.random_range(0..2usize);
        let theta = defense.draw(rng);
        let env = rx.envelope(bit, rng) * Complex64::from_polar(1.0, -theta);
        if crate::receivers::heterodyne_decide_index(env, &alphabet) != bit {
            errors += 1;
        }
    }
    Ok(errors as f64 / trials as f64)
}
