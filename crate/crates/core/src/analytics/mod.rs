//! Closed-form bounds, exponent gains, the complementary error function, the
//! number-basis Chernoff/Helstrom oracles and the eavesdropper calculators.

mod bounds;
mod erfc;
mod fock;
mod security;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gaussian::GaussianError;
use crate::link::{AlphabetKind, LinkError};
use crate::receivers::{ReceiverError, ReceiverKind};

pub use bounds::{
    bound_at_snr, classical_bound_at, classical_ep_lower_bound, exponent_gain_db, pa_bound_at,
    pa_ep_upper_bound, sfg_bound_at, sfg_ep_upper_bound,
};
pub use erfc::{erfc, ln_erfc};
pub use fock::{
    chernoff_exponent_oracle, gaussian_to_fock, helstrom_oracle, FockOperator, MAX_FOCK_CUTOFF,
};
pub use security::{
    eve_exponent_ratio, eve_random_phase_ber, power_divider_penalty, PhaseDefense, EVE_MIN_TRIALS,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalyticsError {
    #[error("thermal background must be positive, got {0}")]
    NonPositiveNoise(f64),
    #[error("at least one mode pair is required")]
    NoModePairs,
    #[error("source brightness must be non-negative, got {0}")]
    NegativeBrightness(f64),
    #[error("alphabet has coincident symbols")]
    DegenerateAlphabet,
    #[error("{receiver:?} receiver has no bound for {alphabet:?} alphabets")]
    Unsupported {
        receiver: ReceiverKind,
        alphabet: AlphabetKind,
    },
    #[error("exponent gain needs positive exponents")]
    ZeroExponent,
    #[error("number-basis conversion supports at most 2 modes, got {0}")]
    TooManyModes(usize),
    #[error("Fock cutoff {0} exceeds the supported maximum")]
    CutoffTooLarge(usize),
    #[error("covariance plus vacuum is singular")]
    SingularCovariance,
    #[error("operator dimensions differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("operator is not Hermitian (deviation {0})")]
    NotHermitian(f64),
    #[error("operator has negative eigenvalue {0}")]
    NotPositive(f64),
    #[error("kept fraction must lie in (0, 1], got {0}")]
    FractionOutOfRange(f64),
    #[error("need at least {min} trials, got {got}")]
    TooFewTrials { min: u64, got: u64 },
    #[error(transparent)]
    Link(#[from] LinkError),
    #[error(transparent)]
    Gaussian(#[from] GaussianError),
    #[error(transparent)]
    Receiver(#[from] ReceiverError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Lower,
    Upper,
}

/// An error-probability bound: `value ≈ prefactor · e^{-exponent · d² N_S M/N_Z}`
/// (the classical bound uses `erfc` rather than the bare exponential).
/// `value` is clamped to 1; `exponent` is not.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpBound {
    pub value: f64,
    pub exponent: f64,
    pub prefactor: f64,
    pub kind: BoundKind,
}
