//! Decision procedures for the classical heterodyne receiver, the
//! parametric-amplifier (PA) receiver and the sum-frequency-generation (SFG)
//! receiver.
//!
//! Every receiver assumes the channel phase `cp.phi` is known and compensated
//! (the heterodyne envelope is de-rotated, the PA/SFG idler reference is
//! locked to it), so decisions only depend on the symbol phases.
//!
//! Ties between equidistant hypotheses always resolve to the lowest alphabet
//! index.

mod heterodyne;
mod pa;
mod sfg;

use rand::RngCore;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gaussian::GaussianError;
use crate::link::{Alphabet, AlphabetKind, ChannelParams, LinkError};

pub use heterodyne::{
    heterodyne_decide, heterodyne_decide_index, heterodyne_envelope, HeterodyneReceiver,
};
pub use pa::{
    pa_decide, pa_decide_index, pa_sample, pa_statistic_moments, PaMoments, PaReceiver,
    VarianceModel, PA_MIN_MODES,
};
pub use sfg::{
    sfg_bookkeeping, sfg_decide_qpsk, sfg_decide_zero_photon, sfg_nulling_params,
    sfg_residual_correlation, SfgBinaryReceiver, SfgBookkeeping, SfgCycle, SfgQpskReceiver,
    QPSK_TEST_ORDER,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReceiverError {
    #[error("source brightness must be positive, got {0}")]
    NonPositiveBrightness(f64),
    #[error("no heterodyne samples supplied")]
    NoSamples,
    #[error("the PA receiver gives no gain for {0:?}: its symbols are not aligned on one axis")]
    PaUnsupported(AlphabetKind),
    #[error("need at least {min} mode pairs for the averaged statistic, got {got}")]
    TooFewModes { min: u64, got: u64 },
    #[error("{receiver} needs a {expected}-symbol alphabet, got {got}")]
    AlphabetSize {
        receiver: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("{receiver} does not support {kind:?} alphabets")]
    AlphabetKind {
        receiver: &'static str,
        kind: AlphabetKind,
    },
    #[error("symbol is not a member of the alphabet")]
    UnknownSymbol,
    #[error("tap tau must be positive, got {0}")]
    NonPositiveTau(f64),
    #[error("tau(1+N_Z) = {0} must be below 1 for the cycle recursion to decay")]
    TapTooLarge(f64),
    #[error("capture rule needs {0} cycles, above the supported maximum")]
    TooManyCycles(usize),
    #[error("capture epsilon must lie in (0, 1), got {0}")]
    BadCaptureEps(f64),
    #[error("exact PA variance needs a zero-mean state")]
    DisplacedState,
    #[error("hypothesis correlation cannot be nulled (2|C|/N = {0} >= 1)")]
    CannotNull(f64),
    #[error(transparent)]
    Link(#[from] LinkError),
    #[error(transparent)]
    Gaussian(#[from] GaussianError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReceiverKind {
    Heterodyne,
    Pa,
    Sfg,
}

impl ReceiverKind {
    pub fn name(&self) -> &'static str {
        match self {
            ReceiverKind::Heterodyne => "heterodyne",
            ReceiverKind::Pa => "pa",
            ReceiverKind::Sfg => "sfg",
        }
    }

    /// Whether this receiver can decode `alphabet` at all.
    pub fn supports(&self, alphabet: AlphabetKind) -> bool {
        match self {
            ReceiverKind::Heterodyne => true,
            ReceiverKind::Pa => matches!(alphabet, AlphabetKind::Pam | AlphabetKind::Bpsk),
            ReceiverKind::Sfg => !matches!(alphabet, AlphabetKind::Custom),
        }
    }
}

/// Receiver choice plus tunables. `None` fields take their regime defaults,
/// resolved against the channel:
/// `ε² = √(N_S/N_Z · 1/N_Z)` (geometric middle of the PA window) and
/// `τ = 0.01/N_Z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReceiverSpec {
    pub kind: ReceiverKind,
    pub pa_epsilon_sq: Option<f64>,
    pub sfg_tau: Option<f64>,
    pub sfg_capture_eps: f64,
    pub include_thermal_residual: bool,
}

impl ReceiverSpec {
    pub fn new(kind: ReceiverKind) -> Self {
        Self {
            kind,
            pa_epsilon_sq: None,
            sfg_tau: None,
            sfg_capture_eps: 1e-3,
            include_thermal_residual: false,
        }
    }

    pub fn epsilon_sq(&self, cp: &ChannelParams) -> f64 {
        self.pa_epsilon_sq
            .unwrap_or_else(|| (cp.n_s / cp.n_z / cp.n_z).sqrt())
    }

    pub fn tau(&self, cp: &ChannelParams) -> f64 {
        self.sfg_tau.unwrap_or(0.01 / cp.n_z)
    }

    /// PA gain `G = 1 + ε²`.
    pub fn pa_gain(&self, cp: &ChannelParams) -> f64 {
        1.0 + self.epsilon_sq(cp)
    }

    /// Soft regime checks: `N_S/N_Z < ε² < 1/N_Z` for PA, `τ N_Z ≤ 0.1` for SFG.
    pub fn validity(&self, cp: &ChannelParams) -> Vec<SpecWarning> {
        let mut out = Vec::new();
        match self.kind {
            ReceiverKind::Pa => {
                let e2 = self.epsilon_sq(cp);
                if !(cp.n_s / cp.n_z < e2 && e2 < 1.0 / cp.n_z) {
                    out.push(SpecWarning::EpsilonOutsideWindow);
                }
            }
            ReceiverKind::Sfg => {
                if self.tau(cp) * cp.n_z > 0.1 {
                    out.push(SpecWarning::TapTooStrong);
                }
            }
            ReceiverKind::Heterodyne => {}
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpecWarning {
    EpsilonOutsideWindow,
    TapTooStrong,
}

/// A receiver prepared for one channel and alphabet, deciding repeated trials.
pub trait SymbolReceiver: Send + Sync {
    /// Alphabet index declared when symbol `true_index` was sent.
    fn decide_index(&self, true_index: usize, rng: &mut dyn RngCore) -> usize;

    fn alphabet_len(&self) -> usize;
}

/// Receiver of `spec.kind` prepared for `cp` and `alphabet`. SFG uses the
/// zero-photon test for binary alphabets and the sequential test for QPSK.
pub fn prepare_receiver(
    spec: &ReceiverSpec,
    cp: &ChannelParams,
    alphabet: &Alphabet,
) -> Result<Box<dyn SymbolReceiver>, ReceiverError> {
    Ok(match spec.kind {
        ReceiverKind::Heterodyne => Box::new(HeterodyneReceiver::new(cp, alphabet)?),
        ReceiverKind::Pa => Box::new(PaReceiver::new(cp, alphabet, VarianceModel::Approximate)?),
        ReceiverKind::Sfg if alphabet.kind() == AlphabetKind::Qpsk => {
            Box::new(SfgQpskReceiver::new(cp, alphabet, spec)?)
        }
        ReceiverKind::Sfg => Box::new(SfgBinaryReceiver::new(cp, alphabet, spec)?),
    })
}

pub(crate) fn nearest_index(values: impl Iterator<Item = f64>) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, d) in values.enumerate() {
        if d < best_d {
            best = i;
            best_d = d;
        }
    }
    best
}
