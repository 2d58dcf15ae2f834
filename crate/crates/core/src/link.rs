//! Backscatter link: modulation alphabets, the physical link budget and the
//! channel that maps a tag symbol onto the received return/idler state.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gaussian::{GaussianError, GaussianState, ModeIndex};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K.
pub const BOLTZMANN: f64 = 1.380_649e-23;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinkError {
    #[error("symbol amplitude must lie in [0, 1], got {0}")]
    AmplitudeOutOfRange(f64),
    #[error("symbol phase must be finite, got {0}")]
    NonFinitePhase(f64),
    #[error("transmissivity {0} outside the allowed range")]
    EtaOutOfRange(f64),
    #[error("PAM levels must satisfy 0 <= eta1 < eta2 <= 1, got ({0}, {1})")]
    BadPamLevels(f64, f64),
    #[error("alphabet has no symbols")]
    EmptyAlphabet,
    #[error("alphabet symbols {0} and {1} coincide")]
    DuplicateSymbol(usize, usize),
    #[error("need at least two symbols to define a distance, got {0}")]
    TooFewSymbols(usize),
    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("{name} must be non-negative, got {value}")]
    Negative { name: &'static str, value: f64 },
    #[error("bandwidth-time product {0} gives fewer than one mode pair")]
    NoModePairs(f64),
    #[error(transparent)]
    Gaussian(#[from] GaussianError),
}

/// A tag symbol `(√η, φ)`: reflection amplitude and phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Symbol {
    amplitude: f64,
    phase: f64,
}

impl Symbol {
    /// Phase is wrapped into `[0, 2π)`.
    pub fn new(amplitude: f64, phase: f64) -> Result<Self, LinkError> {
        if !(0.0..=1.0).contains(&amplitude) {
            return Err(LinkError::AmplitudeOutOfRange(amplitude));
        }
        if !phase.is_finite() {
            return Err(LinkError::NonFinitePhase(phase));
        }
        Ok(Self {
            amplitude,
            phase: wrap_phase(phase),
        })
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    /// Power reflection `η = amplitude²`.
    pub fn eta(&self) -> f64 {
        self.amplitude * self.amplitude
    }

    /// Constellation point `√η e^{-iφ}`.
    pub fn point(&self) -> Complex64 {
        Complex64::from_polar(self.amplitude, -self.phase)
    }

    /// Same symbol with `delta` added to its phase.
    pub fn rotated(&self, delta: f64) -> Symbol {
        Symbol {
            amplitude: self.amplitude,
            phase: wrap_phase(self.phase + delta),
        }
    }
}

pub(crate) fn wrap_phase(phi: f64) -> f64 {
    let w = phi.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if w >= TAU {
        0.0
    } else {
        w
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlphabetKind {
    Pam,
    Bpsk,
    Qpsk,
    Custom,
}

impl AlphabetKind {
    /// `d²_min / η` for the alphabets swept at a nominal `η` (PAM as on-off keying).
    pub fn distance_per_eta(&self) -> Option<f64> {
        match self {
            AlphabetKind::Pam => Some(1.0),
            AlphabetKind::Bpsk => Some(4.0),
            AlphabetKind::Qpsk => Some(2.0),
            AlphabetKind::Custom => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            AlphabetKind::Pam => "pam",
            AlphabetKind::Bpsk => "bpsk",
            AlphabetKind::Qpsk => "qpsk",
            AlphabetKind::Custom => "custom",
        }
    }
}

/// Ordered set of equiprobable symbols.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Alphabet {
    kind: AlphabetKind,
    symbols: Vec<Symbol>,
}

impl Alphabet {
    /// `{(√η₁, 0), (√η₂, 0)}`; `η₁ = 0` is on-off keying.
    pub fn pam(eta1: f64, eta2: f64) -> Result<Self, LinkError> {
        if !(0.0 <= eta1 && eta1 < eta2 && eta2 <= 1.0) {
            return Err(LinkError::BadPamLevels(eta1, eta2));
        }
        Ok(Self {
            kind: AlphabetKind::Pam,
            symbols: vec![
                Symbol::new(eta1.sqrt(), 0.0)?,
                Symbol::new(eta2.sqrt(), 0.0)?,
            ],
        })
    }

    /// `{(√η, 0), (√η, π)}`.
    pub fn bpsk(eta: f64) -> Result<Self, LinkError> {
        if !(eta > 0.0 && eta <= 1.0) {
            return Err(LinkError::EtaOutOfRange(eta));
        }
        Ok(Self::psk(AlphabetKind::Bpsk, eta, 2))
    }

    /// `{(√η, 0), (√η, π/2), (√η, π), (√η, 3π/2)}`.
    pub fn qpsk(eta: f64) -> Result<Self, LinkError> {
        if !(eta > 0.0 && eta <= 1.0) {
            return Err(LinkError::EtaOutOfRange(eta));
        }
        Ok(Self::psk(AlphabetKind::Qpsk, eta, 4))
    }

    pub fn custom(symbols: Vec<Symbol>) -> Result<Self, LinkError> {
        if symbols.is_empty() {
            return Err(LinkError::EmptyAlphabet);
        }
        for i in 0..symbols.len() {
            for j in 0..i {
                if (symbols[i].point() - symbols[j].point()).norm() == 0.0 {
                    return Err(LinkError::DuplicateSymbol(j, i));
                }
            }
        }
        Ok(Self {
            kind: AlphabetKind::Custom,
            symbols,
        })
    }

    fn psk(kind: AlphabetKind, eta: f64, n: usize) -> Self {
        let amp = eta.sqrt();
        let symbols = (0..n)
            .map(|k| Symbol {
                amplitude: amp,
                phase: k as f64 * TAU / n as f64,
            })
            .collect();
        Self { kind, symbols }
    }

    /// Alphabet of `kind` at nominal transmissivity `eta`, allowing the
    /// uninformative `eta = 0` point of a sweep (all symbols then coincide).
    /// PAM is on-off keying.
    pub(crate) fn sweep_point(kind: AlphabetKind, eta: f64) -> Result<Self, LinkError> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(LinkError::EtaOutOfRange(eta));
        }
        Ok(match kind {
            AlphabetKind::Pam => Self {
                kind,
                symbols: vec![Symbol::new(0.0, 0.0)?, Symbol::new(eta.sqrt(), 0.0)?],
            },
            AlphabetKind::Bpsk => Self::psk(kind, eta, 2),
            AlphabetKind::Qpsk => Self::psk(kind, eta, 4),
            AlphabetKind::Custom => return Err(LinkError::EmptyAlphabet),
        })
    }

    pub fn kind(&self) -> AlphabetKind {
        self.kind
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// `min_{k≠k̃} |√η_k e^{-iφ_k} - √η_k̃ e^{-iφ_k̃}|²`.
    pub fn min_squared_distance(&self) -> Result<f64, LinkError> {
        if self.symbols.len() < 2 {
            return Err(LinkError::TooFewSymbols(self.symbols.len()));
        }
        let mut best = f64::INFINITY;
        for i in 0..self.symbols.len() {
            for j in 0..i {
                best = best.min(self.squared_distance(i, j));
            }
        }
        Ok(best)
    }

    /// `d²` between symbols `i` and `j`.
    pub fn squared_distance(&self, i: usize, j: usize) -> f64 {
        (self.symbols[i].point() - self.symbols[j].point()).norm_sqr()
    }

    /// Every symbol phase shifted by `delta`.
    pub fn rotated(&self, delta: f64) -> Alphabet {
        Alphabet {
            kind: self.kind,
            symbols: self.symbols.iter().map(|s| s.rotated(delta)).collect(),
        }
    }
}

/// Effective channel seen by the receiver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    /// Round-trip transmissivity.
    pub eta: f64,
    /// Channel phase in radians, added to every symbol phase.
    pub phi: f64,
    /// Thermal background photons per mode.
    pub n_z: f64,
    /// Signal-idler mode pairs per symbol.
    pub m: u64,
    /// Source brightness (photons per signal mode).
    pub n_s: f64,
}

/// Reasons a parameter set leaves the `η ≪ 1, N_S ≪ 1, N_Z ≫ 1` regime where
/// the receiver closed forms hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegimeWarning {
    LargeTransmissivity,
    BrightSource,
    ColdBackground,
}

impl ChannelParams {
    pub fn new(eta: f64, phi: f64, n_z: f64, m: u64, n_s: f64) -> Result<Self, LinkError> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(LinkError::EtaOutOfRange(eta));
        }
        if !phi.is_finite() {
            return Err(LinkError::NonFinitePhase(phi));
        }
        if !(n_z >= 0.0) {
            return Err(LinkError::Negative {
                name: "N_Z",
                value: n_z,
            });
        }
        if !(n_s >= 0.0) {
            return Err(LinkError::Negative {
                name: "N_S",
                value: n_s,
            });
        }
        if m < 1 {
            return Err(LinkError::NoModePairs(m as f64));
        }
        Ok(Self {
            eta,
            phi,
            n_z,
            m,
            n_s,
        })
    }

    pub fn regime_warnings(&self) -> Vec<RegimeWarning> {
        let mut w = Vec::new();
        if self.eta > 0.1 {
            w.push(RegimeWarning::LargeTransmissivity);
        }
        if self.n_s > 0.1 {
            w.push(RegimeWarning::BrightSource);
        }
        if self.n_z < 10.0 {
            w.push(RegimeWarning::ColdBackground);
        }
        w
    }

    pub fn in_asymptotic_regime(&self) -> bool {
        self.regime_warnings().is_empty()
    }

    /// Signal-to-noise composite `η N_S M / N_Z`.
    pub fn snr(&self) -> f64 {
        self.eta * self.n_s * self.m as f64 / self.n_z
    }
}

/// Physical link description.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkBudget {
    pub g_t: f64,
    pub g_r: f64,
    /// Carrier angular frequency, rad/s.
    pub omega: f64,
    pub r_t: f64,
    pub r_r: f64,
    /// Quantum radar cross section, m².
    pub sigma_q: f64,
    /// Background temperature, K.
    pub temperature: f64,
    /// Phase-matching bandwidth, Hz.
    pub bandwidth: f64,
    /// Tag symbol duration, s.
    pub symbol_duration: f64,
    /// Phase imprinted by the tag, rad.
    pub tag_phase: f64,
}

/// Round-trip transmissivity with its validity flag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RttReport {
    pub eta: f64,
    /// True when the budget gives `η > 1`; the value is reported unclamped.
    pub exceeds_unity: bool,
}

fn positive(name: &'static str, value: f64) -> Result<f64, LinkError> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(LinkError::NonPositive { name, value })
    }
}

/// `η = G_r G_t c² σ_Q / (16π ω² R_t² R_r²)`, evaluated as printed.
///
/// Note this is not the conventional monostatic radar equation, which carries a
/// `(4π)³` denominator; the printed form keeps the bistatic link budget in
/// terms of the angular carrier frequency.
pub fn rtt_from_link_budget(lb: &LinkBudget) -> Result<RttReport, LinkError> {
    let g_t = positive("G_t", lb.g_t)?;
    let g_r = positive("G_r", lb.g_r)?;
    let omega = positive("omega", lb.omega)?;
    let r_t = positive("R_t", lb.r_t)?;
    let r_r = positive("R_r", lb.r_r)?;
    let sigma = positive("sigma_Q", lb.sigma_q)?;
    let c = SPEED_OF_LIGHT;
    let eta = g_r * g_t * c * c * sigma / (16.0 * PI * omega * omega * r_t * r_t * r_r * r_r);
    Ok(RttReport {
        eta,
        exceeds_unity: eta > 1.0,
    })
}

/// Planck occupancy `1/(e^{ħω/k_BT} - 1)`.
pub fn thermal_occupancy(omega: f64, temperature: f64) -> Result<f64, LinkError> {
    let omega = positive("omega", omega)?;
    let temperature = positive("T", temperature)?;
    let x = HBAR * omega / (BOLTZMANN * temperature);
    if x < 1e-6 {
        Ok(1.0 / x - 0.5 + x / 12.0)
    } else {
        Ok(1.0 / x.exp_m1())
    }
}

/// `M = ⌊W T_s⌋`, at least one.
pub fn mode_pairs(bandwidth: f64, symbol_duration: f64) -> Result<u64, LinkError> {
    let w = positive("W", bandwidth)?;
    let t = positive("T_s", symbol_duration)?;
    let product = w * t;
    // products like 1e6 * 1e-3 land a few ulps below the integer
    let nearest = product.round();
    let m = if (product - nearest).abs() <= 1e-9 * nearest.max(1.0) {
        nearest
    } else {
        product.floor()
    };
    if m < 1.0 {
        return Err(LinkError::NoModePairs(product));
    }
    Ok(m as u64)
}

/// How the propagation phase is computed from the path length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PhaseConvention {
    /// `ωR/c + φ_tag`: the carrier phase accumulated over the path.
    #[default]
    Wavenumber,
    /// `2πR/c + φ_tag` taken literally (only dimensionally a phase for ω = 2π rad/s).
    Printed,
}

/// Channel phase for total path `r` (metres), wrapped into `[0, 2π)`.
pub fn channel_phase(
    r: f64,
    tag_phase: f64,
    omega: f64,
    convention: PhaseConvention,
) -> Result<f64, LinkError> {
    if !(r >= 0.0) {
        return Err(LinkError::Negative {
            name: "R",
            value: r,
        });
    }
    let path = match convention {
        PhaseConvention::Wavenumber => omega * r / SPEED_OF_LIGHT,
        PhaseConvention::Printed => TAU * r / SPEED_OF_LIGHT,
    };
    Ok(wrap_phase(path + tag_phase))
}

/// Both phase conventions side by side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseReport {
    pub wavenumber: f64,
    pub printed: f64,
    pub conventions_differ: bool,
}

pub fn channel_phase_report(r: f64, tag_phase: f64, omega: f64) -> Result<PhaseReport, LinkError> {
    let wavenumber = channel_phase(r, tag_phase, omega, PhaseConvention::Wavenumber)?;
    let printed = channel_phase(r, tag_phase, omega, PhaseConvention::Printed)?;
    Ok(PhaseReport {
        wavenumber,
        printed,
        conventions_differ: wavenumber != printed,
    })
}

impl LinkBudget {
    pub fn rtt(&self) -> Result<RttReport, LinkError> {
        rtt_from_link_budget(self)
    }

    pub fn thermal_occupancy(&self) -> Result<f64, LinkError> {
        thermal_occupancy(self.omega, self.temperature)
    }

    pub fn mode_pairs(&self) -> Result<u64, LinkError> {
        mode_pairs(self.bandwidth, self.symbol_duration)
    }

    pub fn phase(&self) -> Result<PhaseReport, LinkError> {
        channel_phase_report(self.r_t + self.r_r, self.tag_phase, self.omega)
    }
}

/// Index of the return mode in [`apply_channel`] output.
pub const RETURN: ModeIndex = ModeIndex(0);
/// Index of the retained idler in [`apply_channel`] output.
pub const IDLER: ModeIndex = ModeIndex(1);

/// Entangled probe: TMSS source, beam splitter against the thermal bath with
/// `η = amplitude²` and phase `symbol.phase + cp.phi`, lost port traced out.
/// Returns the joint (return, idler) state.
pub fn apply_channel(cp: &ChannelParams, symbol: &Symbol) -> Result<GaussianState, LinkError> {
    let source = GaussianState::tmss(cp.n_s)?;
    let joint = source.tensor(&GaussianState::thermal(cp.n_z)?);
    let out = joint.apply_beam_splitter(0, 2, symbol.eta(), symbol.phase() + cp.phi)?;
    Ok(out.partial_trace(&[ModeIndex(0), ModeIndex(1)])?)
}

/// Classical probe: coherent carrier `|√N_S⟩` through the same beam splitter;
/// returns the single received mode.
pub fn apply_channel_classical(
    cp: &ChannelParams,
    symbol: &Symbol,
) -> Result<GaussianState, LinkError> {
    let carrier = GaussianState::coherent(Complex64::new(cp.n_s.sqrt(), 0.0));
    let joint = carrier.tensor(&GaussianState::thermal(cp.n_z)?);
    let out = joint.apply_beam_splitter(0, 1, symbol.eta(), symbol.phase() + cp.phi)?;
    Ok(out.partial_trace(&[ModeIndex(0)])?)
}
