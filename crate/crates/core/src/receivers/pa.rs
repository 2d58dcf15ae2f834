use num_complex::Complex64;
use rand::{Rng, RngCore};
use rand_distr::StandardNormal;

use super::{nearest_index, ReceiverError, SymbolReceiver};
use crate::gaussian::GaussianState;
use crate::link::{apply_channel, Alphabet, AlphabetKind, ChannelParams, Symbol, IDLER, RETURN};

/// Minimum number of copies for the Gaussian approximation of the averaged
/// statistic.
pub const PA_MIN_MODES: u64 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VarianceModel {
    /// `Var Ô_PA ≈ N_Z`, valid for `η ≪ 1, N_S ≪ 1, N_Z ≫ 1`.
    #[default]
    Approximate,
    /// Full fourth moment of the joint Gaussian state.
    Exact,
}

/// Single-copy moments of `Ô_PA = â_I â_R + â_I† â_R†`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PaMoments {
    pub mean: f64,
    pub variance: f64,
}

impl PaMoments {
    /// One draw of the `m`-copy average, `Normal(mean, variance/m)`.
    pub fn sample_mean<R: Rng + ?Sized>(&self, m: u64, rng: &mut R) -> f64 {
        let z: f64 = rng.sample(StandardNormal);
        self.mean + (self.variance / m as f64).sqrt() * z
    }
}

/// Joint (return, idler) state with the idler reference rotated so that the
/// channel phase drops out of `⟨â_R â_I⟩`.
fn compensated_state(cp: &ChannelParams, symbol: &Symbol) -> Result<GaussianState, ReceiverError> {
    let st = apply_channel(cp, symbol)?;
    Ok(st.apply_phase_shift(IDLER, -cp.phi)?)
}

fn self_correlation(st: &GaussianState, mode: usize) -> Complex64 {
    let v = st.cov();
    let (x, p) = (2 * mode, 2 * mode + 1);
    Complex64::new((v[(x, x)] - v[(p, p)]) / 2.0, v[(x, p)])
}

/// Mean `2 Re⟨â_R â_I⟩ = 2√(η N_S(N_S+1)) cos φ` and the chosen variance.
///
/// The exact variance is the Wick expansion for a zero-mean state,
/// `2 Re C² + 2 Re(⟨â_R²⟩⟨â_I²⟩) + 2|⟨â_R†â_I⟩|² + 2 n_R n_I + n_R + n_I + 1`
/// with `C = ⟨â_R â_I⟩`.
pub fn pa_statistic_moments(
    cp: &ChannelParams,
    symbol: &Symbol,
    model: VarianceModel,
) -> Result<PaMoments, ReceiverError> {
    let st = compensated_state(cp, symbol)?;
    let c = st.phase_sensitive_correlation(RETURN, IDLER)?;
    let mean = 2.0 * c.re;
    let variance = match model {
        VarianceModel::Approximate => cp.n_z,
        VarianceModel::Exact => {
            if st.mean().amax() != 0.0 {
                return Err(ReceiverError::DisplacedState);
            }
            let n_r = st.mean_photon_number(RETURN)?;
            let n_i = st.mean_photon_number(IDLER)?;
            let n_ri = st.number_correlation(RETURN, IDLER)?;
            let m_rr = self_correlation(&st, RETURN.0);
            let m_ii = self_correlation(&st, IDLER.0);
            2.0 * (c * c).re
                + 2.0 * (m_rr * m_ii).re
                + 2.0 * n_ri.norm_sqr()
                + 2.0 * n_r * n_i
                + n_r
                + n_i
                + 1.0
        }
    };
    Ok(PaMoments { mean, variance })
}

/// One realization of the `m`-copy averaged statistic (approximate variance).
pub fn pa_sample<R: Rng + ?Sized>(
    cp: &ChannelParams,
    symbol: &Symbol,
    m: u64,
    rng: &mut R,
) -> Result<f64, ReceiverError> {
    if m < PA_MIN_MODES {
        return Err(ReceiverError::TooFewModes {
            min: PA_MIN_MODES,
            got: m,
        });
    }
    Ok(pa_statistic_moments(cp, symbol, VarianceModel::Approximate)?.sample_mean(m, rng))
}

fn pa_levels(alphabet: &Alphabet, n_s: f64) -> Result<Vec<f64>, ReceiverError> {
    match alphabet.kind() {
        AlphabetKind::Pam | AlphabetKind::Bpsk => {}
        kind => return Err(ReceiverError::PaUnsupported(kind)),
    }
    let scale = 2.0 * (n_s * (n_s + 1.0)).sqrt();
    Ok(alphabet
        .symbols()
        .iter()
        .map(|s| scale * s.amplitude() * s.phase().cos())
        .collect())
}

/// Nearest level `2√(η_k N_S(N_S+1)) cos φ_k`.
pub fn pa_decide_index(
    statistic: f64,
    alphabet: &Alphabet,
    cp: &ChannelParams,
) -> Result<usize, ReceiverError> {
    let levels = pa_levels(alphabet, cp.n_s)?;
    Ok(nearest_index(levels.iter().map(|l| (statistic - l).abs())))
}

pub fn pa_decide(
    statistic: f64,
    alphabet: &Alphabet,
    cp: &ChannelParams,
) -> Result<Symbol, ReceiverError> {
    Ok(alphabet.symbols()[pa_decide_index(statistic, alphabet, cp)?])
}

/// PA receiver prepared for Monte Carlo.
#[derive(Debug, Clone)]
pub struct PaReceiver {
    moments: Vec<PaMoments>,
    levels: Vec<f64>,
    m: u64,
}

impl PaReceiver {
    pub fn new(
        cp: &ChannelParams,
        alphabet: &Alphabet,
        model: VarianceModel,
    ) -> Result<Self, ReceiverError> {
        let levels = pa_levels(alphabet, cp.n_s)?;
        if cp.m < PA_MIN_MODES {
            return Err(ReceiverError::TooFewModes {
                min: PA_MIN_MODES,
                got: cp.m,
            });
        }
        let moments = alphabet
            .symbols()
            .iter()
            .map(|s| pa_statistic_moments(cp, s, model))
            .collect::<Result<_, _>>()?;
        Ok(Self {
            moments,
            levels,
            m: cp.m,
        })
    }

    pub fn moments(&self) -> &[PaMoments] {
        &self.moments
    }
}

impl SymbolReceiver for PaReceiver {
    fn decide_index(&self, true_index: usize, rng: &mut dyn RngCore) -> usize {
        let stat = self.moments[true_index].sample_mean(self.m, rng);
        nearest_index(self.levels.iter().map(|l| (stat - l).abs()))
    }

    fn alphabet_len(&self) -> usize {
        self.levels.len()
    }
}
