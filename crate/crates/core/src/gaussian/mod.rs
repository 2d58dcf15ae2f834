//! First- and second-moment simulation of multimode Gaussian bosonic states.
//!
//! Quadratures use the vacuum-variance-1/2 convention, `x = (a + a†)/√2` and
//! `p = -i(a - a†)/√2`, so a single-mode vacuum has covariance `diag(1/2, 1/2)`.
//! Phase-space vectors are interleaved per mode: `(x₁, p₁, x₂, p₂, …)`.
//!
//! States are immutable values. Every transformation returns a new state whose
//! covariance is re-symmetrized, so floating-point drift never accumulates
//! into an asymmetric matrix.

mod sampling;
mod symplectic;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use thiserror::Error;

pub use sampling::HeterodyneLaw;

/// Minimum allowed symplectic eigenvalue, `1/2` minus a numerical slack.
pub const UNCERTAINTY_FLOOR: f64 = 0.5 - 1e-9;

const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GaussianError {
    #[error("a state needs at least one mode")]
    NoModes,
    #[error("mode {index} out of range for a {n_modes}-mode state")]
    ModeOutOfRange { index: usize, n_modes: usize },
    #[error("operation needs two distinct modes, got {0} twice")]
    SameMode(usize),
    #[error("occupancy must be non-negative, got {0}")]
    NegativeOccupancy(f64),
    #[error("transmissivity must lie in [0, 1], got {0}")]
    TransmissivityOutOfRange(f64),
    #[error("amplifier gain must be >= 1, got {0}")]
    GainBelowOne(f64),
    #[error("partial trace needs a non-empty list of kept modes")]
    EmptyKeep,
    #[error("mode {0} listed twice in the kept modes")]
    DuplicateKeep(usize),
    #[error("mean has length {mean} but covariance is {rows}x{cols}")]
    ShapeMismatch {
        mean: usize,
        rows: usize,
        cols: usize,
    },
    #[error("covariance is not symmetric (max relative asymmetry {0:e})")]
    Asymmetric(f64),
    #[error("state violates the uncertainty principle (min symplectic eigenvalue {0})")]
    Unphysical(f64),
}

/// Position of one mode inside a [`GaussianState`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModeIndex(pub usize);

impl From<usize> for ModeIndex {
    fn from(i: usize) -> Self {
        ModeIndex(i)
    }
}

/// A Gaussian state of `n_modes` bosonic modes, described by its mean vector
/// and covariance matrix `V_ij = ½⟨{Δr_i, Δr_j}⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    n_modes: usize,
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

impl GaussianState {
    /// `n`-mode vacuum: zero mean, covariance `I/2`.
    pub fn vacuum(n: usize) -> Result<Self, GaussianError> {
        if n < 1 {
            return Err(GaussianError::NoModes);
        }
        Ok(Self {
            n_modes: n,
            mean: DVector::zeros(2 * n),
            cov: DMatrix::identity(2 * n, 2 * n) * 0.5,
        })
    }

    /// Single-mode coherent state `|α⟩` with mean photon number `|α|²`.
    pub fn coherent(alpha: Complex64) -> Self {
        let s2 = std::f64::consts::SQRT_2;
        Self {
            n_modes: 1,
            mean: DVector::from_vec(vec![s2 * alpha.re, s2 * alpha.im]),
            cov: DMatrix::identity(2, 2) * 0.5,
        }
    }

    /// Single-mode thermal state with mean occupancy `n`.
    pub fn thermal(n: f64) -> Result<Self, GaussianError> {
        if !(n >= 0.0) {
            return Err(GaussianError::NegativeOccupancy(n));
        }
        Ok(Self {
            n_modes: 1,
            mean: DVector::zeros(2),
            cov: DMatrix::identity(2, 2) * (n + 0.5),
        })
    }

    /// Two-mode squeezed vacuum, signal in mode 0 and idler in mode 1, each
    /// with occupancy `n_s` and `⟨a_S a_I⟩ = √(n_s(n_s+1))`.
    pub fn tmss(n_s: f64) -> Result<Self, GaussianError> {
        if !(n_s >= 0.0) {
            return Err(GaussianError::NegativeOccupancy(n_s));
        }
        let d = n_s + 0.5;
        let c = (n_s * (n_s + 1.0)).sqrt();
        #[rustfmt::skip]
        let cov = DMatrix::from_row_slice(4, 4, &[
            d,   0.0, c,   0.0,
            0.0, d,   0.0, -c,
            c,   0.0, d,   0.0,
            0.0, -c,  0.0, d,
        ]);
        Ok(Self {
            n_modes: 2,
            mean: DVector::zeros(4),
            cov,
        })
    }

    /// Builds a state from explicit moments, checking symmetry and the
    /// uncertainty principle.
    pub fn from_moments(mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self, GaussianError> {
        let dim = mean.len();
        if dim == 0 {
            return Err(GaussianError::NoModes);
        }
        if !dim.is_multiple_of(2) || cov.nrows() != dim || cov.ncols() != dim {
            return Err(GaussianError::ShapeMismatch {
                mean: dim,
                rows: cov.nrows(),
                cols: cov.ncols(),
            });
        }
        let scale = cov.amax().max(f64::MIN_POSITIVE);
        let asym = (&cov - cov.transpose()).amax() / scale;
        if asym > SYMMETRY_TOL {
            return Err(GaussianError::Asymmetric(asym));
        }
        let state = Self {
            n_modes: dim / 2,
            mean,
            cov: symmetrized(cov),
        };
        let nu = state.min_symplectic_eigenvalue();
        if nu < UNCERTAINTY_FLOOR {
            return Err(GaussianError::Unphysical(nu));
        }
        Ok(state)
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    /// Joint state of `self` followed by `other`; mode indices of `other` are
    /// shifted by `self.n_modes()`.
    pub fn tensor(&self, other: &GaussianState) -> GaussianState {
        let d1 = 2 * self.n_modes;
        let d2 = 2 * other.n_modes;
        let mut mean = DVector::zeros(d1 + d2);
        mean.rows_mut(0, d1).copy_from(&self.mean);
        mean.rows_mut(d1, d2).copy_from(&other.mean);
        let mut cov = DMatrix::zeros(d1 + d2, d1 + d2);
        cov.view_mut((0, 0), (d1, d1)).copy_from(&self.cov);
        cov.view_mut((d1, d1), (d2, d2)).copy_from(&other.cov);
        GaussianState {
            n_modes: self.n_modes + other.n_modes,
            mean,
            cov,
        }
    }

    fn check_mode(&self, mode: ModeIndex) -> Result<usize, GaussianError> {
        if mode.0 < self.n_modes {
            Ok(mode.0)
        } else {
            Err(GaussianError::ModeOutOfRange {
                index: mode.0,
                n_modes: self.n_modes,
            })
        }
    }

    fn check_pair(&self, a: ModeIndex, b: ModeIndex) -> Result<(usize, usize), GaussianError> {
        let a = self.check_mode(a)?;
        let b = self.check_mode(b)?;
        if a == b {
            return Err(GaussianError::SameMode(a));
        }
        Ok((a, b))
    }

    /// Conjugates the moments by a real symplectic matrix.
    fn transformed(&self, s: &DMatrix<f64>) -> GaussianState {
        GaussianState {
            n_modes: self.n_modes,
            mean: s * &self.mean,
            cov: symmetrized(s * &self.cov * s.transpose()),
        }
    }

    /// Beam splitter `a ← √η e^{-iφ} a + √(1-η) b`, `b ← -√η e^{iφ} b + √(1-η) a`.
    pub fn apply_beam_splitter(
        &self,
        mode_a: impl Into<ModeIndex>,
        mode_b: impl Into<ModeIndex>,
        eta: f64,
        phi: f64,
    ) -> Result<GaussianState, GaussianError> {
        let (a, b) = self.check_pair(mode_a.into(), mode_b.into())?;
        if !(0.0..=1.0).contains(&eta) {
            return Err(GaussianError::TransmissivityOutOfRange(eta));
        }
        let s = symplectic::beam_splitter(self.n_modes, a, b, eta, phi);
        Ok(self.transformed(&s))
    }

    /// Two-mode squeezer `a ← √G a + √(G-1) e^{iθ} b†`, `b ← √G b + √(G-1) e^{iθ} a†`.
    pub fn apply_two_mode_squeeze(
        &self,
        mode_a: impl Into<ModeIndex>,
        mode_b: impl Into<ModeIndex>,
        gain: f64,
        theta: f64,
    ) -> Result<GaussianState, GaussianError> {
        let (a, b) = self.check_pair(mode_a.into(), mode_b.into())?;
        if !(gain >= 1.0) {
            return Err(GaussianError::GainBelowOne(gain));
        }
        let s = symplectic::two_mode_squeezer(
            self.n_modes,
            a,
            b,
            gain.sqrt(),
            (gain - 1.0).sqrt(),
            theta,
        );
        Ok(self.transformed(&s))
    }

    /// Same squeezer parametrized by `r ≥ 0` (`G = cosh² r`); keeps full
    /// precision in `sinh r` when `G - 1` is below rounding.
    pub fn apply_two_mode_squeeze_r(
        &self,
        mode_a: impl Into<ModeIndex>,
        mode_b: impl Into<ModeIndex>,
        r: f64,
        theta: f64,
    ) -> Result<GaussianState, GaussianError> {
        let (a, b) = self.check_pair(mode_a.into(), mode_b.into())?;
        if !(r >= 0.0 && r.is_finite()) {
            return Err(GaussianError::GainBelowOne(r.cosh().powi(2)));
        }
        let s = symplectic::two_mode_squeezer(self.n_modes, a, b, r.cosh(), r.sinh(), theta);
        Ok(self.transformed(&s))
    }

    /// Phase rotation `a ← e^{-iφ} a` on one mode.
    pub fn apply_phase_shift(
        &self,
        mode: impl Into<ModeIndex>,
        phi: f64,
    ) -> Result<GaussianState, GaussianError> {
        let m = self.check_mode(mode.into())?;
        let s = symplectic::phase_shift(self.n_modes, m, phi);
        Ok(self.transformed(&s))
    }

    /// Reduced state on `keep`, in the order given.
    pub fn partial_trace(&self, keep: &[ModeIndex]) -> Result<GaussianState, GaussianError> {
        if keep.is_empty() {
            return Err(GaussianError::EmptyKeep);
        }
        let mut idx = Vec::with_capacity(2 * keep.len());
        for (i, &m) in keep.iter().enumerate() {
            let m = self.check_mode(m)?;
            if keep[..i].iter().any(|k| k.0 == m) {
                return Err(GaussianError::DuplicateKeep(m));
            }
            idx.push(2 * m);
            idx.push(2 * m + 1);
        }
        let dim = idx.len();
        let mean = DVector::from_fn(dim, |i, _| self.mean[idx[i]]);
        let cov = DMatrix::from_fn(dim, dim, |i, j| self.cov[(idx[i], idx[j])]);
        Ok(GaussianState {
            n_modes: keep.len(),
            mean,
            cov,
        })
    }

    /// `⟨a†a⟩ = (V_xx + V_pp + x̄² + p̄² - 1)/2`.
    pub fn mean_photon_number(&self, mode: impl Into<ModeIndex>) -> Result<f64, GaussianError> {
        let m = self.check_mode(mode.into())?;
        let (x, p) = (2 * m, 2 * m + 1);
        Ok(
            (self.cov[(x, x)] + self.cov[(p, p)] + self.mean[x].powi(2) + self.mean[p].powi(2)
                - 1.0)
                / 2.0,
        )
    }

    /// `⟨a⟩ = (x̄ + i p̄)/√2`.
    pub fn mean_amplitude(&self, mode: impl Into<ModeIndex>) -> Result<Complex64, GaussianError> {
        let m = self.check_mode(mode.into())?;
        Ok(Complex64::new(self.mean[2 * m], self.mean[2 * m + 1]) / std::f64::consts::SQRT_2)
    }

    /// Phase-sensitive correlation `⟨a_a a_b⟩` between two distinct modes,
    /// displacement included.
    pub fn phase_sensitive_correlation(
        &self,
        mode_a: impl Into<ModeIndex>,
        mode_b: impl Into<ModeIndex>,
    ) -> Result<Complex64, GaussianError> {
        let (a, b) = self.check_pair(mode_a.into(), mode_b.into())?;
        let m = |i: usize, j: usize| self.cov[(i, j)] + self.mean[i] * self.mean[j];
        let (xa, pa, xb, pb) = (2 * a, 2 * a + 1, 2 * b, 2 * b + 1);
        Ok(Complex64::new(
            (m(xa, xb) - m(pa, pb)) / 2.0,
            (m(xa, pb) + m(pa, xb)) / 2.0,
        ))
    }

    /// Phase-insensitive correlation `⟨a_a† a_b⟩` (central part plus
    /// displacement); for `a == b` this is the mean photon number.
    pub fn number_correlation(
        &self,
        mode_a: impl Into<ModeIndex>,
        mode_b: impl Into<ModeIndex>,
    ) -> Result<Complex64, GaussianError> {
        let a = self.check_mode(mode_a.into())?;
        let b = self.check_mode(mode_b.into())?;
        let m = |i: usize, j: usize| self.cov[(i, j)] + self.mean[i] * self.mean[j];
        let (xa, pa, xb, pb) = (2 * a, 2 * a + 1, 2 * b, 2 * b + 1);
        let vac = if a == b { 0.5 } else { 0.0 };
        Ok(Complex64::new(
            (m(xa, xb) + m(pa, pb)) / 2.0 - vac,
            (m(xa, pb) - m(pa, xb)) / 2.0,
        ))
    }

    /// Symplectic eigenvalues in ascending order (one per mode).
    pub fn symplectic_eigenvalues(&self) -> Vec<f64> {
        symplectic::symplectic_eigenvalues(&self.cov)
    }

    pub fn min_symplectic_eigenvalue(&self) -> f64 {
        self.symplectic_eigenvalues()
            .into_iter()
            .fold(f64::INFINITY, f64::min)
    }

    /// True when every symplectic eigenvalue is at least [`UNCERTAINTY_FLOOR`].
    pub fn is_physical(&self) -> bool {
        self.min_symplectic_eigenvalue() >= UNCERTAINTY_FLOOR
    }

    /// Smallest eigenvalue of the covariance matrix itself.
    pub fn min_cov_eigenvalue(&self) -> f64 {
        SymmetricEigen::new(self.cov.clone()).eigenvalues.min()
    }
}

pub(crate) fn symmetrized(m: DMatrix<f64>) -> DMatrix<f64> {
    (&m + m.transpose()) * 0.5
}
