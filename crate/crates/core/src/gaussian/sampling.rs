//! Heterodyne measurement: the mode is mixed with vacuum on a 50:50 splitter
//! and `x̂₁`, `p̂₂` are read out on the two output ports.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{GaussianError, GaussianState, ModeIndex};

/// Bivariate normal law of one heterodyne outcome `x₁ + i p₂`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeterodyneLaw {
    pub mean: Complex64,
    pub var_re: f64,
    pub var_im: f64,
    pub cov_re_im: f64,
}

impl HeterodyneLaw {
    /// Law of the average of `count` independent outcomes.
    pub fn averaged(&self, count: usize) -> HeterodyneLaw {
        let k = count as f64;
        HeterodyneLaw {
            mean: self.mean,
            var_re: self.var_re / k,
            var_im: self.var_im / k,
            cov_re_im: self.cov_re_im / k,
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Complex64 {
        let z1: f64 = rng.sample(StandardNormal);
        let z2: f64 = rng.sample(StandardNormal);
        let s1 = self.var_re.sqrt();
        let re = self.mean.re + s1 * z1;
        let im = if s1 > 0.0 {
            let beta = self.cov_re_im / s1;
            let rest = (self.var_im - beta * beta).max(0.0).sqrt();
            self.mean.im + beta * z1 + rest * z2
        } else {
            self.mean.im + self.var_im.sqrt() * z2
        };
        Complex64::new(re, im)
    }
}

impl GaussianState {
    /// Exact outcome distribution of heterodyne detection on `mode`:
    /// `Re ~ N(x̄/√2, (V_xx + 1/2)/2)`, `Im ~ N(p̄/√2, (V_pp + 1/2)/2)`,
    /// `Cov(Re, Im) = V_xp/2`.
    pub fn heterodyne_law(
        &self,
        mode: impl Into<ModeIndex>,
    ) -> Result<HeterodyneLaw, GaussianError> {
        let m = self.check_mode(mode.into())?;
        let (x, p) = (2 * m, 2 * m + 1);
        let s2 = std::f64::consts::SQRT_2;
        let cov = self.cov();
        Ok(HeterodyneLaw {
            mean: Complex64::new(self.mean()[x] / s2, self.mean()[p] / s2),
            var_re: (cov[(x, x)] + 0.5) / 2.0,
            var_im: (cov[(p, p)] + 0.5) / 2.0,
            cov_re_im: cov[(x, p)] / 2.0,
        })
    }

    /// One heterodyne outcome `x₁ + i p₂`.
    pub fn heterodyne_sample<R: Rng + ?Sized>(
        &self,
        mode: impl Into<ModeIndex>,
        rng: &mut R,
    ) -> Result<Complex64, GaussianError> {
        Ok(self.heterodyne_law(mode)?.sample(rng))
    }
}
